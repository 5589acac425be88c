#pragma once

#include <map>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>

#include "sciforge/errors.hpp"

namespace sciforge::execctx {

class MalformedLaunchEnv : public Error {
public:
    explicit MalformedLaunchEnv(const std::string& detail)
        : Error("malformed launcher environment: " + detail) {}
};

enum class Launcher { None, OpenMpi, Pmi, Slurm };

/// Process rank and count, with a sequential fallback so the same program
/// runs under a parallel launcher or standalone.
struct ExecContext {
    int rank = 0;
    int nb_proc = 1;
    Launcher launcher = Launcher::None;

    bool sequential() const noexcept { return launcher == Launcher::None; }
    friend bool operator==(const ExecContext&, const ExecContext&) = default;
};

/// Inspect the launcher variable pairs in precedence order
/// (OMPI_COMM_WORLD_RANK/SIZE, PMI_RANK/SIZE, SLURM_PROCID/NTASKS); the
/// first fully-present pair wins, otherwise sequential. A fully-present
/// pair that is non-numeric or violates rank < nb_proc raises
/// MalformedLaunchEnv; a half-present pair is skipped.
ExecContext detect_context(const std::map<std::string, std::string>& environment);

/// Snapshot of the real process environment, restricted to the launcher
/// variables above.
std::map<std::string, std::string> launch_environment();

/// Run `action` only on rank 0. Returns the result wrapped in optional
/// (or, for void actions, whether it ran).
template <typename Fn>
auto only_rank0(const ExecContext& ctx, Fn&& action) {
    using Result = std::invoke_result_t<Fn&&>;
    if constexpr (std::is_void_v<Result>) {
        if (ctx.rank != 0)
            return false;
        std::forward<Fn>(action)();
        return true;
    } else {
        if (ctx.rank != 0)
            return std::optional<Result>{};
        return std::optional<Result>{std::forward<Fn>(action)()};
    }
}

}  // namespace sciforge::execctx
