#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

namespace sciforge::sysinfo {

/// System probe surface, injectable so reports are deterministic in tests.
/// Any probe may come back empty; the report then shows "unknown".
class Probes {
public:
    virtual ~Probes() = default;
    virtual std::optional<std::string> os_description() const = 0;
    virtual std::optional<std::string> kernel() const = 0;
    virtual std::optional<std::string> hostname() const = 0;
    virtual std::optional<std::string> cpu_model() const = 0;
    virtual std::optional<int> logical_cpus() const = 0;
    virtual std::optional<std::uint64_t> total_memory_bytes() const = 0;
    virtual std::optional<std::string> env(const std::string& name) const = 0;
};

/// Probes backed by the live system (uname, /proc, sysconf, getenv).
class SystemProbes : public Probes {
public:
    std::optional<std::string> os_description() const override;
    std::optional<std::string> kernel() const override;
    std::optional<std::string> hostname() const override;
    std::optional<std::string> cpu_model() const override;
    std::optional<int> logical_cpus() const override;
    std::optional<std::uint64_t> total_memory_bytes() const override;
    std::optional<std::string> env(const std::string& name) const override;
};

struct SysInfoReport {
    std::string os;
    std::string kernel;
    std::string hostname;
    std::string cpu_model;
    std::string logical_cpus;
    std::string total_memory_bytes;
    std::string toolkit_version;
    std::string omp_num_threads;
    std::string ompi_rank, ompi_size;
    std::string pmi_rank, pmi_size;
    std::string slurm_procid, slurm_ntasks;

    friend bool operator==(const SysInfoReport&, const SysInfoReport&) = default;
};

SysInfoReport gather_sysinfo(const Probes& probes);

/// One `key: value` line per field, fixed order.
std::string render_text(const SysInfoReport& report);
nlohmann::ordered_json render_json(const SysInfoReport& report);
SysInfoReport report_from_json(const nlohmann::ordered_json& doc);

}  // namespace sciforge::sysinfo
