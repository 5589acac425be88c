#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <sys/wait.h>

#include <doctest.h>
#include <json.hpp>

#include "test_support.hpp"

namespace fs = std::filesystem;

namespace {

struct CliResult {
    int exit_code = -1;
    std::string out;
};

CliResult run_cli(const std::string& args) {
    std::string command = std::string(SCIFORGE_CLI_PATH) + " " + args + " 2>&1";
    CliResult result;
    FILE* pipe = ::popen(command.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf{};
    std::size_t got = 0;
    while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0)
        result.out.append(buf.data(), got);
    int status = ::pclose(pipe);
    result.exit_code = WEXITSTATUS(status);
    return result;
}

fs::path scratch_dir() {
    fs::path dir = fs::temp_directory_path() / "sciforge_cli_test";
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("help is available everywhere") {
    CHECK(run_cli("--help").exit_code == 0);
    for (const char* sub : {"info", "dump", "nbstrip", "mat2py", "params",
                            "series", "job"}) {
        auto result = run_cli(std::string(sub) + " --help");
        CHECK(result.exit_code == 0);
    }
    CHECK(run_cli("job render --help").out.find("--walltime") != std::string::npos);
}

TEST_CASE("usage errors exit with 2") {
    CHECK(run_cli("definitely-not-a-command").exit_code == 2);
    CHECK(run_cli("dump").exit_code == 2);          // missing argument
    CHECK(run_cli("job render").exit_code == 2);    // missing required flags
    CHECK(run_cli("").exit_code == 2);              // subcommand required
}

TEST_CASE("info renders text and json") {
    auto text = run_cli("info");
    CHECK(text.exit_code == 0);
    CHECK(text.out.find("toolkit version: ") != std::string::npos);
    CHECK(text.out.find("cpu model: ") != std::string::npos);

    auto json = run_cli("info --json");
    CHECK(json.exit_code == 0);
    auto doc = nlohmann::ordered_json::parse(json.out);
    CHECK(doc.contains("hostname"));
    CHECK(doc["toolkit version"].is_string());
}

TEST_CASE("dump prints the fixture hierarchy") {
    auto path = testsup::data_path("ncdump/one_var.nc");
    auto result = run_cli("dump " + path);
    CHECK(result.exit_code == 0);
    CHECK(result.out ==
          path +
              " (NetCDF classic, version 1)\n"
              "dimensions:\n"
              "  x = 3\n"
              "global attributes:\n"
              "variables:\n"
              "  double u(x)\n"
              "    u:units = \"m/s\"\n");

    auto with_data = run_cli("dump --data " + path);
    CHECK(with_data.exit_code == 0);
    CHECK(with_data.out.find("data u: 1.5, 2.5, 3.5") != std::string::npos);

    auto missing = run_cli("dump /no/such/file.nc");
    CHECK(missing.exit_code == 1);

    // HDF5 magic gets a clear unsupported-format report
    fs::path fake = scratch_dir() / "fake.h5";
    {
        std::ofstream out(fake, std::ios::binary);
        const unsigned char magic[8] = {0x89, 'H', 'D', 'F', '\r', '\n', 0x1a, '\n'};
        out.write(reinterpret_cast<const char*>(magic), 8);
    }
    auto hdf5 = run_cli("dump " + fake.string());
    CHECK(hdf5.exit_code == 1);
    CHECK(hdf5.out.find("unsupported format: HDF5") != std::string::npos);
}

TEST_CASE("nbstrip CLI skips nbconvert by default and honors --check") {
    fs::path dir = scratch_dir();
    fs::path dirty = dir / "dirty.ipynb";
    fs::path artifact = dir / "a.nbconvert.ipynb";
    fs::copy_file(testsup::data_path("nbstrip/dirty.ipynb"), dirty,
                  fs::copy_options::overwrite_existing);
    fs::copy_file(testsup::data_path("nbstrip/report.nbconvert.ipynb"), artifact,
                  fs::copy_options::overwrite_existing);

    auto skipped = run_cli("nbstrip " + artifact.string());
    CHECK(skipped.exit_code == 0);
    CHECK(skipped.out.find("skipped (excluded by default)") != std::string::npos);

    // --check on a dirty notebook: exit 1, nothing written
    std::string before = testsup::read_file(dirty.string());
    auto check = run_cli("nbstrip --check " + dirty.string());
    CHECK(check.exit_code == 1);
    CHECK(testsup::read_file(dirty.string()) == before);

    auto strip = run_cli("nbstrip " + dirty.string());
    CHECK(strip.exit_code == 0);
    auto recheck = run_cli("nbstrip --check " + dirty.string());
    CHECK(recheck.exit_code == 0);

    auto included = run_cli("nbstrip --include-nbconvert " + artifact.string());
    CHECK(included.exit_code == 0);
    CHECK(included.out.find("stripped") != std::string::npos);
}

TEST_CASE("mat2py CLI writes .py and report files") {
    fs::path dir = scratch_dir();
    fs::path source = dir / "loop.m";
    fs::copy_file(testsup::data_path("mat2py/for_range.m"), source,
                  fs::copy_options::overwrite_existing);

    auto result = run_cli("mat2py --report " + source.string());
    CHECK(result.exit_code == 0);
    CHECK(testsup::read_file((dir / "loop.py").string()) ==
          testsup::read_file(testsup::data_path("mat2py/for_range.py.expected")));
    CHECK(testsup::read_file((dir / "loop.report.txt").string())
              .find("R3") != std::string::npos);
}

TEST_CASE("params validate merges and reports dotted paths") {
    fs::path dir = scratch_dir();
    fs::path defaults = dir / "defaults.xml";
    fs::path overrides = dir / "overrides.xml";
    fs::path bad = dir / "bad.xml";
    {
        std::ofstream d(defaults);
        d << "<params nx=\"64\">\n  <output period=\"1.0\"/>\n</params>\n";
        std::ofstream o(overrides);
        o << "<params>\n  <output period=\"2\"/>\n</params>\n";
        std::ofstream b(bad);
        b << "<params>\n  <output cadence=\"2\"/>\n</params>\n";
    }
    auto merged = run_cli("params validate " + defaults.string() + " " +
                          overrides.string());
    CHECK(merged.exit_code == 0);
    CHECK(merged.out ==
          "<params nx=\"64\">\n  <output period=\"2.0\"/>\n</params>\n");

    auto failed = run_cli("params validate " + defaults.string() + " " +
                          bad.string());
    CHECK(failed.exit_code == 1);
    CHECK(failed.out.find("output.cadence") != std::string::npos);
}

TEST_CASE("series CLI groups and pairs") {
    auto files = "im1_1.png im1_2.png im1_3.png im2_1.png im2_2.png im2_3.png";
    auto groups = run_cli(std::string("series group --axis 0 ") + files);
    CHECK(groups.exit_code == 0);
    CHECK(groups.out ==
          "im1_1.png im1_2.png im1_3.png\n"
          "im2_1.png im2_2.png im2_3.png\n");

    auto pairs = run_cli(std::string("series pairs --axis 1 --step 1 ") + files);
    CHECK(pairs.exit_code == 0);
    CHECK(pairs.out ==
          "im1_1.png im1_2.png\n"
          "im1_2.png im1_3.png\n"
          "im2_1.png im2_2.png\n"
          "im2_2.png im2_3.png\n");

    // a directory argument is listed
    fs::path dir = scratch_dir() / "frames";
    fs::create_directories(dir);
    for (const char* name : {"f1.png", "f2.png", "f3.png"}) {
        std::ofstream touch(dir / name);
        touch << "";
    }
    auto from_dir = run_cli("series group --axis 0 " + dir.string());
    CHECK(from_dir.exit_code == 0);
    CHECK(from_dir.out == "f1.png\nf2.png\nf3.png\n");
}

TEST_CASE("subcommands write only files named in their arguments") {
    // run read-only commands from a scratch working directory and verify it
    // stays empty
    fs::path sandbox = fs::temp_directory_path() / "sciforge_sandbox";
    fs::remove_all(sandbox);
    fs::create_directories(sandbox);
    auto run_sandboxed = [&](const std::string& args) {
        std::string command = "cd " + sandbox.string() + " && " +
                              std::string(SCIFORGE_CLI_PATH) + " " + args +
                              " >/dev/null 2>&1";
        int rc = std::system(command.c_str());
        (void)rc;  // some of these exit nonzero on purpose (--check)
    };
    run_sandboxed("info");
    run_sandboxed("info --json");
    run_sandboxed("dump " + testsup::data_path("ncdump/one_var.nc"));
    run_sandboxed("series group --axis 0 a1.png a2.png");
    run_sandboxed("series pairs --axis 0 --step 1 a1.png a2.png");
    run_sandboxed(
        "job render --scheduler oar --name j --walltime 00:10:00 --cmd x");
    run_sandboxed("nbstrip --check " + testsup::data_path("nbstrip/dirty.ipynb"));
    CHECK(fs::is_empty(sandbox));
    fs::remove_all(sandbox);
}

TEST_CASE("job render and submit") {
    std::string flags =
        " --scheduler slurm --name run1 --walltime 01:00:00 --nodes 1"
        " --cores-per-node 4 --partition compute --output run1.out"
        " --error run1.err --launch-prefix srun --cmd './solver --case a'"
        " --env 'module purge' --env 'module load gcc'";
    auto render = run_cli("job render" + flags);
    CHECK(render.exit_code == 0);
    CHECK(render.out == testsup::read_file(testsup::data_path(
                            "hpc_jobs/run1_slurm.sh")));

    auto bad = run_cli(
        "job render --scheduler slurm --name x --walltime 10:99:00 --cmd y");
    CHECK(bad.exit_code == 1);
    CHECK(bad.out.find("bad walltime") != std::string::npos);

    // submit through a fake sbatch on PATH
    fs::path dir = scratch_dir();
    fs::path fake_sbatch = dir / "sbatch";
    {
        std::ofstream sb(fake_sbatch);
        sb << "#!/bin/sh\necho 'Submitted batch job 123456'\n";
    }
    fs::permissions(fake_sbatch, fs::perms::owner_all);
    std::string env_prefix = "PATH=" + dir.string() + ":$PATH ";
    CliResult submit;
    {
        std::string command = env_prefix + std::string(SCIFORGE_CLI_PATH) +
                              " job submit" + flags + " 2>&1";
        FILE* pipe = ::popen(command.c_str(), "r");
        REQUIRE(pipe != nullptr);
        std::array<char, 4096> buf{};
        std::size_t got = 0;
        while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0)
            submit.out.append(buf.data(), got);
        submit.exit_code = WEXITSTATUS(::pclose(pipe));
    }
    CHECK(submit.exit_code == 0);
    CHECK(submit.out == "123456\n");
}
