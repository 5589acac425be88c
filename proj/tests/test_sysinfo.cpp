#include <doctest.h>

#include "sciforge/sysinfo.hpp"
#include "sciforge/version.hpp"

using namespace sciforge::sysinfo;

namespace {

struct StubProbes : Probes {
    std::optional<std::string> os_value = "TestOS 1.0";
    std::optional<std::string> cpu_value = "Imaginary CPU @ 2GHz";
    std::optional<int> cpus = 8;
    std::optional<std::uint64_t> memory = 16ULL << 30;
    std::map<std::string, std::string> env_map = {{"OMP_NUM_THREADS", "4"}};

    std::optional<std::string> os_description() const override { return os_value; }
    std::optional<std::string> kernel() const override { return "Linux 6.1"; }
    std::optional<std::string> hostname() const override { return "node42"; }
    std::optional<std::string> cpu_model() const override { return cpu_value; }
    std::optional<int> logical_cpus() const override { return cpus; }
    std::optional<std::uint64_t> total_memory_bytes() const override {
        return memory;
    }
    std::optional<std::string> env(const std::string& name) const override {
        auto it = env_map.find(name);
        if (it == env_map.end())
            return std::nullopt;
        return it->second;
    }
};

}  // namespace

TEST_CASE("stub probes fill the report") {
    StubProbes probes;
    SysInfoReport report = gather_sysinfo(probes);
    CHECK(report.logical_cpus == "8");
    CHECK(report.total_memory_bytes == std::to_string(16ULL << 30));
    CHECK(report.cpu_model == "Imaginary CPU @ 2GHz");
    CHECK(report.toolkit_version == sciforge::kVersion);
    CHECK(report.omp_num_threads == "4");
    CHECK(report.slurm_procid == "unset");
}

TEST_CASE("missing probes degrade to unknown, never fail") {
    StubProbes probes;
    probes.cpu_value = std::nullopt;
    probes.cpus = std::nullopt;
    SysInfoReport report = gather_sysinfo(probes);
    CHECK(report.cpu_model == "unknown");
    CHECK(report.logical_cpus == "unknown");
}

TEST_CASE("text rendering has one key: value line per field, fixed order") {
    StubProbes probes;
    std::string text = render_text(gather_sysinfo(probes));
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t end = text.find('\n', start);
        lines.push_back(text.substr(start, end - start));
        start = end + 1;
    }
    REQUIRE(lines.size() == 14);
    CHECK(lines[0].rfind("os: ", 0) == 0);
    CHECK(lines[3] == "cpu model: Imaginary CPU @ 2GHz");
    CHECK(lines[4] == "logical cpus: 8");
    CHECK(lines[6] == std::string("toolkit version: ") + sciforge::kVersion);
    for (const auto& line : lines)
        CHECK(line.find(": ") != std::string::npos);
}

TEST_CASE("json rendering round-trips the field set") {
    StubProbes probes;
    SysInfoReport report = gather_sysinfo(probes);
    auto doc = render_json(report);
    SysInfoReport back = report_from_json(doc);
    CHECK(back == report);
}

TEST_CASE("live system probes produce a plausible report") {
    SystemProbes probes;
    SysInfoReport report = gather_sysinfo(probes);
    // on any POSIX host these should resolve
    CHECK(report.kernel != "unknown");
    CHECK(report.logical_cpus != "unknown");
    CHECK(std::stoll(report.total_memory_bytes) > 0);
}
