#include "sciforge/sysinfo.hpp"

#include <cstdlib>
#include <fstream>
#include <utility>
#include <vector>

#include <sys/utsname.h>
#include <unistd.h>

#include "sciforge/version.hpp"

namespace sciforge::sysinfo {

std::optional<std::string> SystemProbes::os_description() const {
    // PRETTY_NAME from os-release, falling back to uname sysname
    std::ifstream release("/etc/os-release");
    std::string line;
    while (std::getline(release, line)) {
        if (line.rfind("PRETTY_NAME=", 0) == 0) {
            std::string value = line.substr(12);
            if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
                value = value.substr(1, value.size() - 2);
            return value;
        }
    }
    struct utsname uts{};
    if (uname(&uts) == 0)
        return std::string(uts.sysname) + " " + uts.release;
    return std::nullopt;
}

std::optional<std::string> SystemProbes::kernel() const {
    struct utsname uts{};
    if (uname(&uts) != 0)
        return std::nullopt;
    return std::string(uts.sysname) + " " + uts.release;
}

std::optional<std::string> SystemProbes::hostname() const {
    char buf[256] = {};
    if (gethostname(buf, sizeof buf - 1) != 0)
        return std::nullopt;
    return std::string(buf);
}

std::optional<std::string> SystemProbes::cpu_model() const {
    std::ifstream cpuinfo("/proc/cpuinfo");
    std::string line;
    while (std::getline(cpuinfo, line)) {
        if (line.rfind("model name", 0) == 0) {
            std::size_t colon = line.find(':');
            if (colon == std::string::npos)
                continue;
            std::size_t start = line.find_first_not_of(" \t", colon + 1);
            if (start == std::string::npos)
                continue;
            return line.substr(start);
        }
    }
    return std::nullopt;
}

std::optional<int> SystemProbes::logical_cpus() const {
    long n = sysconf(_SC_NPROCESSORS_ONLN);
    if (n < 1)
        return std::nullopt;
    return static_cast<int>(n);
}

std::optional<std::uint64_t> SystemProbes::total_memory_bytes() const {
    long pages = sysconf(_SC_PHYS_PAGES);
    long page_size = sysconf(_SC_PAGESIZE);
    if (pages < 1 || page_size < 1)
        return std::nullopt;
    return std::uint64_t(pages) * std::uint64_t(page_size);
}

std::optional<std::string> SystemProbes::env(const std::string& name) const {
    const char* value = std::getenv(name.c_str());
    if (!value)
        return std::nullopt;
    return std::string(value);
}

namespace {

constexpr const char* kUnknown = "unknown";
constexpr const char* kUnset = "unset";

std::string or_unknown(const std::optional<std::string>& v) {
    return v.value_or(kUnknown);
}

template <typename T>
std::string number_or_unknown(const std::optional<T>& v) {
    return v ? std::to_string(*v) : kUnknown;
}

std::string env_or_unset(const Probes& probes, const char* name) {
    return probes.env(name).value_or(kUnset);
}

}  // namespace

SysInfoReport gather_sysinfo(const Probes& probes) {
    SysInfoReport report;
    report.os = or_unknown(probes.os_description());
    report.kernel = or_unknown(probes.kernel());
    report.hostname = or_unknown(probes.hostname());
    report.cpu_model = or_unknown(probes.cpu_model());
    report.logical_cpus = number_or_unknown(probes.logical_cpus());
    report.total_memory_bytes = number_or_unknown(probes.total_memory_bytes());
    report.toolkit_version = kVersion;
    report.omp_num_threads = env_or_unset(probes, "OMP_NUM_THREADS");
    report.ompi_rank = env_or_unset(probes, "OMPI_COMM_WORLD_RANK");
    report.ompi_size = env_or_unset(probes, "OMPI_COMM_WORLD_SIZE");
    report.pmi_rank = env_or_unset(probes, "PMI_RANK");
    report.pmi_size = env_or_unset(probes, "PMI_SIZE");
    report.slurm_procid = env_or_unset(probes, "SLURM_PROCID");
    report.slurm_ntasks = env_or_unset(probes, "SLURM_NTASKS");
    return report;
}

namespace {

// field order is the report contract
const std::vector<std::pair<const char*, std::string SysInfoReport::*>>& fields() {
    static const std::vector<std::pair<const char*, std::string SysInfoReport::*>>
        table = {
            {"os", &SysInfoReport::os},
            {"kernel", &SysInfoReport::kernel},
            {"hostname", &SysInfoReport::hostname},
            {"cpu model", &SysInfoReport::cpu_model},
            {"logical cpus", &SysInfoReport::logical_cpus},
            {"total memory bytes", &SysInfoReport::total_memory_bytes},
            {"toolkit version", &SysInfoReport::toolkit_version},
            {"OMP_NUM_THREADS", &SysInfoReport::omp_num_threads},
            {"OMPI_COMM_WORLD_RANK", &SysInfoReport::ompi_rank},
            {"OMPI_COMM_WORLD_SIZE", &SysInfoReport::ompi_size},
            {"PMI_RANK", &SysInfoReport::pmi_rank},
            {"PMI_SIZE", &SysInfoReport::pmi_size},
            {"SLURM_PROCID", &SysInfoReport::slurm_procid},
            {"SLURM_NTASKS", &SysInfoReport::slurm_ntasks},
        };
    return table;
}

}  // namespace

std::string render_text(const SysInfoReport& report) {
    std::string out;
    for (const auto& [key, member] : fields())
        out += std::string(key) + ": " + report.*member + "\n";
    return out;
}

nlohmann::ordered_json render_json(const SysInfoReport& report) {
    nlohmann::ordered_json doc;
    for (const auto& [key, member] : fields())
        doc[key] = report.*member;
    return doc;
}

SysInfoReport report_from_json(const nlohmann::ordered_json& doc) {
    SysInfoReport report;
    for (const auto& [key, member] : fields())
        report.*member = doc.at(key).get<std::string>();
    return report;
}

}  // namespace sciforge::sysinfo
