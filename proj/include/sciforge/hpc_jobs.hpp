#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sciforge/errors.hpp"

namespace sciforge::jobs {

class BadWalltime : public Error {
public:
    explicit BadWalltime(const std::string& text)
        : Error("bad walltime: '" + text + "'") {}
};

class TooManyCores : public Error {
public:
    TooManyCores(int requested, int available)
        : Error("job wants " + std::to_string(requested) +
                " cores per node, profile has " + std::to_string(available)) {}
};

class InvalidJobSpec : public Error {
public:
    explicit InvalidJobSpec(const std::string& detail)
        : Error("invalid job spec: " + detail) {}
};

class SubmitFailed : public Error {
public:
    SubmitFailed(int exit_code, const std::string& stderr_text)
        : Error("submission command failed (exit " + std::to_string(exit_code) +
                "): " + stderr_text) {}
};

class UnparsableJobId : public Error {
public:
    explicit UnparsableJobId(const std::string& output)
        : Error("no job id found in scheduler output: '" + output + "'") {}
};

enum class Scheduler { Oar, Slurm };

struct ClusterProfile {
    Scheduler scheduler = Scheduler::Slurm;
    long long default_walltime_s = 3600;
    int cores_per_node = 1;
    std::optional<std::string> queue_or_partition;
    std::vector<std::string> env_setup;  // shell lines, no newlines inside
    std::string launch_prefix;           // e.g. "srun" or "mpirun -np 4"
};

struct JobSpec {
    std::string name;
    std::string command;
    long long walltime_s = 0;
    int nb_nodes = 1;
    int nb_cores_per_node = 1;
    std::string stdout_path;
    std::string stderr_path;
    std::optional<std::string> after_job;
};

/// `H+:MM:SS` or `D-HH:MM:SS` to seconds; minutes/seconds below 60.
long long parse_walltime(const std::string& text);
/// Seconds to `HH:MM:SS` (hours grow past two digits as needed).
std::string render_walltime(long long seconds);

/// Deterministic batch script per the fixed OAR / SLURM directive
/// templates; byte-identical across calls and platforms.
std::string render_script(const ClusterProfile& profile, const JobSpec& job);

struct RunResult {
    int exit_code = 0;
    std::string out;
    std::string err;
};

/// Injectable process launcher so submission is testable without a
/// scheduler; one in-flight submission per runner.
class CommandRunner {
public:
    virtual ~CommandRunner() = default;
    virtual RunResult run(const std::vector<std::string>& argv) = 0;
};

/// Runs commands through the shell, capturing stdout/stderr.
class ProcessRunner : public CommandRunner {
public:
    RunResult run(const std::vector<std::string>& argv) override;
};

/// Write the script, invoke `sbatch` / `oarsub -S` through `runner`, and
/// extract the job id. `script_path` empty means a unique file under the
/// system temp directory.
std::string submit(const ClusterProfile& profile, const JobSpec& job,
                   CommandRunner& runner, const std::string& script_path = "");

}  // namespace sciforge::jobs
