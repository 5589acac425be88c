#include "sciforge/hpc_jobs.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <regex>

#include <sys/wait.h>
#include <unistd.h>

#include "sciforge/text_format.hpp"

namespace sciforge::jobs {

namespace {

bool all_digits(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
        return c >= '0' && c <= '9';
    });
}

}  // namespace

long long parse_walltime(const std::string& text) {
    std::string_view rest = text;
    long long days = 0;
    std::size_t dash = rest.find('-');
    if (dash != std::string_view::npos) {
        std::string_view day_part = rest.substr(0, dash);
        if (!all_digits(day_part))
            throw BadWalltime(text);
        days = *parse_integer(day_part);
        rest = rest.substr(dash + 1);
    }

    std::size_t c1 = rest.find(':');
    std::size_t c2 = c1 == std::string_view::npos ? c1 : rest.find(':', c1 + 1);
    if (c1 == std::string_view::npos || c2 == std::string_view::npos)
        throw BadWalltime(text);
    std::string_view hh = rest.substr(0, c1);
    std::string_view mm = rest.substr(c1 + 1, c2 - c1 - 1);
    std::string_view ss = rest.substr(c2 + 1);
    if (!all_digits(hh) || mm.size() != 2 || !all_digits(mm) || ss.size() != 2 ||
        !all_digits(ss))
        throw BadWalltime(text);
    if (dash != std::string_view::npos && hh.size() != 2)
        throw BadWalltime(text);

    long long hours = *parse_integer(hh);
    long long minutes = *parse_integer(mm);
    long long seconds = *parse_integer(ss);
    if (minutes >= 60 || seconds >= 60 || (dash != std::string_view::npos && hours >= 24))
        throw BadWalltime(text);
    return ((days * 24 + hours) * 60 + minutes) * 60 + seconds;
}

std::string render_walltime(long long seconds) {
    if (seconds <= 0)
        throw BadWalltime(std::to_string(seconds) + "s");
    long long hours = seconds / 3600;
    int minutes = static_cast<int>(seconds / 60 % 60);
    int secs = static_cast<int>(seconds % 60);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%02lld:%02d:%02d", hours, minutes, secs);
    return buf;
}

namespace {

void validate(const ClusterProfile& profile, const JobSpec& job) {
    if (job.name.empty() || job.name.find('\n') != std::string::npos)
        throw InvalidJobSpec("job name must be non-empty, without newlines");
    if (job.nb_nodes < 1 || job.nb_cores_per_node < 1)
        throw InvalidJobSpec("node and core counts must be >= 1");
    if (job.walltime_s <= 0)
        throw BadWalltime(std::to_string(job.walltime_s) + "s");
    if (job.nb_cores_per_node > profile.cores_per_node)
        throw TooManyCores(job.nb_cores_per_node, profile.cores_per_node);
    for (const auto& line : profile.env_setup)
        if (line.find('\n') != std::string::npos)
            throw InvalidJobSpec("env_setup lines must not contain newlines");
}

std::string output_path(const JobSpec& job, bool error_stream) {
    const std::string& path = error_stream ? job.stderr_path : job.stdout_path;
    if (!path.empty())
        return path;
    return job.name + (error_stream ? ".err" : ".out");
}

}  // namespace

std::string render_script(const ClusterProfile& profile, const JobSpec& job) {
    validate(profile, job);
    const std::string walltime = render_walltime(job.walltime_s);
    std::string script = "#!/bin/bash\n";
    if (profile.scheduler == Scheduler::Slurm) {
        script += "#SBATCH --job-name=" + job.name + "\n";
        script += "#SBATCH --time=" + walltime + "\n";
        script += "#SBATCH --nodes=" + std::to_string(job.nb_nodes) + "\n";
        script += "#SBATCH --ntasks-per-node=" +
                  std::to_string(job.nb_cores_per_node) + "\n";
        if (profile.queue_or_partition)
            script += "#SBATCH --partition=" + *profile.queue_or_partition + "\n";
        script += "#SBATCH --output=" + output_path(job, false) + "\n";
        script += "#SBATCH --error=" + output_path(job, true) + "\n";
    } else {
        script += "#OAR -n " + job.name + "\n";
        script += "#OAR -l /nodes=" + std::to_string(job.nb_nodes) +
                  "/core=" + std::to_string(job.nb_cores_per_node) +
                  ",walltime=" + walltime + "\n";
        if (profile.queue_or_partition)
            script += "#OAR -q " + *profile.queue_or_partition + "\n";
        script += "#OAR -O " + output_path(job, false) + "\n";
        script += "#OAR -E " + output_path(job, true) + "\n";
    }
    script += "\n";
    for (const auto& line : profile.env_setup)
        script += line + "\n";
    script += "\n";
    if (profile.launch_prefix.empty())
        script += job.command + "\n";
    else
        script += profile.launch_prefix + " " + job.command + "\n";
    return script;
}

RunResult ProcessRunner::run(const std::vector<std::string>& argv) {
    // single-quote each argument for the shell
    std::string command;
    for (const auto& arg : argv) {
        if (!command.empty())
            command += ' ';
        command += '\'';
        for (char c : arg) {
            if (c == '\'')
                command += "'\\''";
            else
                command += c;
        }
        command += '\'';
    }
    auto temp = std::filesystem::temp_directory_path() /
                ("sciforge_submit_" + std::to_string(::getpid()) + ".err");
    command += " 2>" + temp.string();

    RunResult result;
    FILE* pipe = ::popen(command.c_str(), "r");
    if (!pipe) {
        result.exit_code = -1;
        result.err = "popen failed";
        return result;
    }
    std::array<char, 4096> buf{};
    std::size_t got = 0;
    while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0)
        result.out.append(buf.data(), got);
    int status = ::pclose(pipe);
    result.exit_code = status == -1 ? -1 : WEXITSTATUS(status);

    std::ifstream err_file(temp);
    result.err.assign(std::istreambuf_iterator<char>(err_file), {});
    std::error_code ec;
    std::filesystem::remove(temp, ec);
    return result;
}

std::string submit(const ClusterProfile& profile, const JobSpec& job,
                   CommandRunner& runner, const std::string& script_path) {
    const std::string script = render_script(profile, job);

    std::filesystem::path path = script_path;
    if (path.empty()) {
        static std::atomic<unsigned> counter{0};
        path = std::filesystem::temp_directory_path() /
               (job.name + "_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter++) + ".sh");
    }
    {
        std::ofstream out(path, std::ios::binary);
        if (!out)
            throw SubmitFailed(-1, "cannot write script file " + path.string());
        out << script;
    }

    std::vector<std::string> argv;
    if (profile.scheduler == Scheduler::Slurm) {
        argv = {"sbatch"};
        if (job.after_job)
            argv.push_back("--dependency=afterok:" + *job.after_job);
        argv.push_back(path.string());
    } else {
        argv = {"oarsub"};
        if (job.after_job) {
            argv.push_back("-a");
            argv.push_back(*job.after_job);
        }
        argv.push_back("-S");
        argv.push_back(path.string());
    }

    RunResult result = runner.run(argv);
    if (result.exit_code != 0)
        throw SubmitFailed(result.exit_code, result.err);

    static const std::regex slurm_pattern(R"(Submitted batch job (\d+))");
    static const std::regex oar_pattern(R"(OAR_JOB_ID=(\d+))");
    const std::regex& pattern =
        profile.scheduler == Scheduler::Slurm ? slurm_pattern : oar_pattern;
    std::smatch match;
    if (!std::regex_search(result.out, match, pattern))
        throw UnparsableJobId(result.out);
    return match[1].str();
}

}  // namespace sciforge::jobs
