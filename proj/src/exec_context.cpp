#include "sciforge/exec_context.hpp"

#include <array>
#include <cstdlib>

#include "sciforge/text_format.hpp"

namespace sciforge::execctx {

namespace {

struct LauncherVars {
    Launcher launcher;
    const char* rank_var;
    const char* size_var;
};

constexpr std::array<LauncherVars, 3> kLaunchers{{
    {Launcher::OpenMpi, "OMPI_COMM_WORLD_RANK", "OMPI_COMM_WORLD_SIZE"},
    {Launcher::Pmi, "PMI_RANK", "PMI_SIZE"},
    {Launcher::Slurm, "SLURM_PROCID", "SLURM_NTASKS"},
}};

int parse_count(const std::string& var, const std::string& text) {
    for (char c : text)
        if (c < '0' || c > '9')
            throw MalformedLaunchEnv(var + "='" + text + "' is not a number");
    auto value = parse_integer(text);
    if (!value || text.empty())
        throw MalformedLaunchEnv(var + "='" + text + "' is not a number");
    return static_cast<int>(*value);
}

}  // namespace

ExecContext detect_context(const std::map<std::string, std::string>& environment) {
    for (const auto& vars : kLaunchers) {
        auto rank_it = environment.find(vars.rank_var);
        auto size_it = environment.find(vars.size_var);
        if (rank_it == environment.end() || size_it == environment.end())
            continue;
        int rank = parse_count(vars.rank_var, rank_it->second);
        int size = parse_count(vars.size_var, size_it->second);
        if (rank >= size)
            throw MalformedLaunchEnv(std::string(vars.rank_var) + "=" +
                                     rank_it->second + " >= " + vars.size_var + "=" +
                                     size_it->second);
        return {rank, size, vars.launcher};
    }
    return {};
}

std::map<std::string, std::string> launch_environment() {
    std::map<std::string, std::string> env;
    for (const auto& vars : kLaunchers) {
        for (const char* name : {vars.rank_var, vars.size_var})
            if (const char* value = std::getenv(name))
                env.emplace(name, value);
    }
    return env;
}

}  // namespace sciforge::execctx
