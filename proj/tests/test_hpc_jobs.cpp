#include <filesystem>

#include <doctest.h>

#include "sciforge/hpc_jobs.hpp"
#include "test_support.hpp"

using namespace sciforge::jobs;

namespace {

struct StubRunner : CommandRunner {
    RunResult result;
    std::vector<std::string> last_argv;

    RunResult run(const std::vector<std::string>& argv) override {
        last_argv = argv;
        return result;
    }
};

// the three fixture jobs behind the golden scripts
ClusterProfile run1_profile(Scheduler s) {
    return {s, 3600, 32, "compute", {"module purge", "module load gcc"}, "srun"};
}
JobSpec run1_job() {
    return {"run1", "./solver --case a", 3600, 1, 4, "run1.out", "run1.err", {}};
}

ClusterProfile post_proc_profile(Scheduler s) {
    return {s, 3600, 64, std::nullopt, {}, ""};
}
JobSpec post_proc_job() {
    return {"post_proc", "python3 analyze.py", parse_walltime("23:59:58"),
            2,           16,                   "logs/post.out",
            "logs/post.err", {}};
}

ClusterProfile sim_chain_profile(Scheduler s) {
    return {s, 3600, 8, "long", {"export OMP_NUM_THREADS=1"}, "mpirun -np 8"};
}
JobSpec sim_chain_job() {
    return {"sim_chain", "./run_all.sh", parse_walltime("1-00:00:00"),
            1,           8,              "",
            "",          {}};
}

}  // namespace

TEST_CASE("parse_walltime") {
    CHECK(parse_walltime("23:59:58") == 86398);
    CHECK(parse_walltime("1-00:00:00") == 86400);
    CHECK(parse_walltime("01:00:00") == 3600);
    CHECK(parse_walltime("100:00:30") == 360030);
    CHECK(parse_walltime("2-12:30:00") == 2 * 86400 + 12 * 3600 + 1800);
    CHECK_THROWS_AS(parse_walltime("10:99:00"), BadWalltime);
    CHECK_THROWS_AS(parse_walltime("10:00:61"), BadWalltime);
    CHECK_THROWS_AS(parse_walltime("1-25:00:00"), BadWalltime);
    CHECK_THROWS_AS(parse_walltime(""), BadWalltime);
    CHECK_THROWS_AS(parse_walltime("1:2:3x"), BadWalltime);
    CHECK_THROWS_AS(parse_walltime("00:00"), BadWalltime);
}

TEST_CASE("walltime render/parse property") {
    testsup::ParamGen gen(0x77);
    for (int i = 0; i < 500; ++i) {
        long long s = gen.pick(1, 2000000);
        CHECK(parse_walltime(render_walltime(s)) == s);
    }
    CHECK(render_walltime(3600) == "01:00:00");
    CHECK(render_walltime(86400) == "24:00:00");
}

TEST_CASE("rendered scripts match the goldens byte for byte") {
    auto golden = [](const std::string& name) {
        return testsup::read_file(testsup::data_path("hpc_jobs/" + name));
    };
    CHECK(render_script(run1_profile(Scheduler::Slurm), run1_job()) ==
          golden("run1_slurm.sh"));
    CHECK(render_script(run1_profile(Scheduler::Oar), run1_job()) ==
          golden("run1_oar.sh"));
    CHECK(render_script(post_proc_profile(Scheduler::Slurm), post_proc_job()) ==
          golden("post_proc_slurm.sh"));
    CHECK(render_script(post_proc_profile(Scheduler::Oar), post_proc_job()) ==
          golden("post_proc_oar.sh"));
    CHECK(render_script(sim_chain_profile(Scheduler::Slurm), sim_chain_job()) ==
          golden("sim_chain_slurm.sh"));
    CHECK(render_script(sim_chain_profile(Scheduler::Oar), sim_chain_job()) ==
          golden("sim_chain_oar.sh"));

    // deterministic across repeated calls
    CHECK(render_script(run1_profile(Scheduler::Slurm), run1_job()) ==
          render_script(run1_profile(Scheduler::Slurm), run1_job()));
}

TEST_CASE("every script opens with a shebang and leads with directives") {
    for (Scheduler s : {Scheduler::Slurm, Scheduler::Oar}) {
        std::string script = render_script(run1_profile(s), run1_job());
        REQUIRE(script.rfind("#!/bin/bash\n", 0) == 0);
        bool past_directives = false;
        std::size_t start = script.find('\n') + 1;
        while (start < script.size()) {
            std::size_t end = script.find('\n', start);
            std::string line = script.substr(start, end - start);
            bool directive = line.rfind("#SBATCH", 0) == 0 || line.rfind("#OAR", 0) == 0;
            if (!line.empty() && !directive)
                past_directives = true;
            if (directive)
                CHECK(!past_directives);
            start = end + 1;
        }
        CHECK(script.back() == '\n');
    }
}

TEST_CASE("render errors") {
    CHECK_THROWS_AS(
        render_script(ClusterProfile{Scheduler::Slurm, 3600, 32, {}, {}, ""},
                      JobSpec{"big", "x", 3600, 1, 64, "", "", {}}),
        TooManyCores);
    CHECK_THROWS_AS(
        render_script(run1_profile(Scheduler::Slurm),
                      JobSpec{"bad", "x", 0, 1, 1, "", "", {}}),
        BadWalltime);
    CHECK_THROWS_AS(
        render_script(run1_profile(Scheduler::Slurm),
                      JobSpec{"", "x", 60, 1, 1, "", "", {}}),
        InvalidJobSpec);
}

TEST_CASE("submit drives the runner and extracts job ids") {
    auto script_path = [](const char* n) {
        return (std::filesystem::temp_directory_path() / n).string();
    };

    SUBCASE("slurm") {
        StubRunner runner;
        runner.result = {0, "Submitted batch job 123456\n", ""};
        std::string id = submit(run1_profile(Scheduler::Slurm), run1_job(), runner,
                                script_path("t_slurm.sh"));
        CHECK(id == "123456");
        REQUIRE(runner.last_argv.size() == 2);
        CHECK(runner.last_argv[0] == "sbatch");
        // the script really was written
        CHECK(testsup::read_file(runner.last_argv[1]) ==
              render_script(run1_profile(Scheduler::Slurm), run1_job()));
    }

    SUBCASE("oar") {
        StubRunner runner;
        runner.result = {0, "...\nOAR_JOB_ID=777\n", ""};
        std::string id = submit(run1_profile(Scheduler::Oar), run1_job(), runner,
                                script_path("t_oar.sh"));
        CHECK(id == "777");
        REQUIRE(runner.last_argv.size() == 3);
        CHECK(runner.last_argv[0] == "oarsub");
        CHECK(runner.last_argv[1] == "-S");
    }

    SUBCASE("dependency chaining") {
        StubRunner runner;
        runner.result = {0, "Submitted batch job 9\n", ""};
        JobSpec chained = run1_job();
        chained.after_job = "123456";
        submit(run1_profile(Scheduler::Slurm), chained, runner,
               script_path("t_dep.sh"));
        REQUIRE(runner.last_argv.size() == 3);
        CHECK(runner.last_argv[1] == "--dependency=afterok:123456");

        runner.result = {0, "OAR_JOB_ID=10\n", ""};
        submit(run1_profile(Scheduler::Oar), chained, runner,
               script_path("t_dep_oar.sh"));
        REQUIRE(runner.last_argv.size() == 5);
        CHECK(runner.last_argv[1] == "-a");
        CHECK(runner.last_argv[2] == "123456");
    }

    SUBCASE("failures") {
        StubRunner runner;
        runner.result = {1, "", "sbatch: error: invalid partition"};
        CHECK_THROWS_AS(submit(run1_profile(Scheduler::Slurm), run1_job(), runner,
                               script_path("t_fail.sh")),
                        SubmitFailed);
        runner.result = {0, "what even is this output", ""};
        CHECK_THROWS_AS(submit(run1_profile(Scheduler::Slurm), run1_job(), runner,
                               script_path("t_garbage.sh")),
                        UnparsableJobId);
    }
}
