// sciforge: multi-command workbench for the toolkit.
//
// Exit codes: 0 success, 1 domain error (message on stderr), 2 usage error.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sciforge/errors.hpp"
#include "sciforge/exec_context.hpp"
#include "sciforge/file_series.hpp"
#include "sciforge/hpc_jobs.hpp"
#include "sciforge/mat2py.hpp"
#include "sciforge/nbstrip.hpp"
#include "sciforge/ncdump.hpp"
#include "sciforge/param_tree.hpp"
#include "sciforge/sysinfo.hpp"
#include "sciforge/version.hpp"

namespace fs = std::filesystem;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw sciforge::Error("cannot read file: " + path);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

std::vector<unsigned char> read_bytes(const std::string& path) {
    std::string text = read_file(path);
    return std::vector<unsigned char>(text.begin(), text.end());
}

struct InfoOptions {
    bool json = false;
};

struct DumpOptions {
    std::string path;
    bool show_data = false;
};

struct NbstripOptions {
    std::vector<std::string> paths;
    bool include_nbconvert = false;
    bool check = false;
};

struct Mat2pyOptions {
    std::string path;
    bool report = false;
};

struct ParamsOptions {
    std::string defaults_path;
    std::string overrides_path;
};

struct SeriesOptions {
    std::vector<std::string> inputs;
    std::size_t axis = 0;
    long long step = 1;
};

struct JobOptions {
    std::string scheduler;
    std::string name;
    std::string walltime;
    int nodes = 1;
    int cores_per_node = 1;
    int max_cores_per_node = 0;  // 0: no profile limit beyond the job's own
    std::string command;
    std::string partition;
    std::string output;
    std::string error;
    std::string after;
    std::string launch_prefix;
    std::vector<std::string> env_lines;
    std::string script_path;
};

int run_info(const InfoOptions& opt) {
    sciforge::sysinfo::SystemProbes probes;
    auto report = sciforge::sysinfo::gather_sysinfo(probes);
    if (opt.json)
        std::cout << sciforge::sysinfo::render_json(report).dump(1) << "\n";
    else
        std::cout << sciforge::sysinfo::render_text(report);
    return 0;
}

int run_dump(const DumpOptions& opt) {
    auto bytes = read_bytes(opt.path);
    auto file = sciforge::nc::parse_netcdf(bytes);
    std::cout << sciforge::nc::print_tree(file, opt.path, {opt.show_data});
    if (opt.show_data) {
        for (const auto& var : file.vars) {
            bool record = false;
            for (auto d : var.dim_refs)
                record |= file.dims[d].is_record();
            if (record)
                continue;
            auto values = sciforge::nc::read_var_data(bytes, file, var.name);
            std::cout << "data " << var.name << ": "
                      << sciforge::nc::render_values_text(values, var.type) << "\n";
        }
    }
    return 0;
}

int run_nbstrip(const NbstripOptions& opt) {
    bool any_would_change = false;
    for (const auto& path : opt.paths) {
        auto result = sciforge::nb::strip_file(path, opt.include_nbconvert, opt.check);
        if (!result.processed) {
            std::cout << path << ": skipped (excluded by default)\n";
            continue;
        }
        any_would_change |= result.changed;
        if (opt.check)
            std::cout << path << (result.changed ? ": would change\n" : ": clean\n");
        else
            std::cout << path << (result.changed ? ": stripped\n" : ": unchanged\n");
    }
    return opt.check && any_would_change ? 1 : 0;
}

int run_mat2py(const Mat2pyOptions& opt) {
    auto report = sciforge::mat2py::convert_report(read_file(opt.path));
    fs::path out_path(opt.path);
    out_path.replace_extension(".py");
    {
        std::ofstream out(out_path, std::ios::binary);
        if (!out)
            throw sciforge::Error("cannot write file: " + out_path.string());
        out << report.output;
    }
    std::cout << "wrote " << out_path.string() << "\n";
    if (opt.report) {
        fs::path report_path(opt.path);
        report_path.replace_extension(".report.txt");
        std::ofstream out(report_path, std::ios::binary);
        if (!out)
            throw sciforge::Error("cannot write file: " + report_path.string());
        out << sciforge::mat2py::render_report(report);
        std::cout << "wrote " << report_path.string() << "\n";
    }
    return 0;
}

int run_params_validate(const ParamsOptions& opt) {
    auto defaults = sciforge::params::parse_xml_text(read_file(opt.defaults_path));
    auto overrides = sciforge::params::parse_xml_text(read_file(opt.overrides_path));
    auto merged = sciforge::params::apply_overrides(defaults, overrides);
    std::cout << sciforge::params::to_xml_text(merged);
    return 0;
}

std::vector<std::string> collect_names(const std::vector<std::string>& inputs) {
    if (inputs.size() == 1 && fs::is_directory(inputs.front())) {
        std::vector<std::string> names;
        for (const auto& entry : fs::directory_iterator(inputs.front()))
            if (entry.is_regular_file())
                names.push_back(entry.path().filename().string());
        std::sort(names.begin(), names.end());
        return names;
    }
    std::vector<std::string> names;
    for (const auto& p : inputs)
        names.push_back(fs::path(p).filename().string());
    return names;
}

int run_series_group(const SeriesOptions& opt) {
    auto serie = sciforge::series::build_serie(collect_names(opt.inputs));
    for (const auto& group : sciforge::series::groups_along_axis(serie, opt.axis)) {
        for (std::size_t i = 0; i < group.size(); ++i)
            std::cout << (i ? " " : "") << group[i];
        std::cout << "\n";
    }
    return 0;
}

int run_series_pairs(const SeriesOptions& opt) {
    auto serie = sciforge::series::build_serie(collect_names(opt.inputs));
    for (const auto& [a, b] : sciforge::series::make_pairs(serie, opt.axis, opt.step))
        std::cout << a << " " << b << "\n";
    return 0;
}

sciforge::jobs::ClusterProfile profile_from(const JobOptions& opt) {
    sciforge::jobs::ClusterProfile profile;
    if (opt.scheduler == "slurm")
        profile.scheduler = sciforge::jobs::Scheduler::Slurm;
    else if (opt.scheduler == "oar")
        profile.scheduler = sciforge::jobs::Scheduler::Oar;
    else
        throw sciforge::Error("unknown scheduler: '" + opt.scheduler +
                              "' (expected oar or slurm)");
    profile.cores_per_node =
        opt.max_cores_per_node > 0 ? opt.max_cores_per_node : opt.cores_per_node;
    if (!opt.partition.empty())
        profile.queue_or_partition = opt.partition;
    profile.env_setup = opt.env_lines;
    profile.launch_prefix = opt.launch_prefix;
    return profile;
}

sciforge::jobs::JobSpec job_from(const JobOptions& opt) {
    sciforge::jobs::JobSpec job;
    job.name = opt.name;
    job.command = opt.command;
    job.walltime_s = sciforge::jobs::parse_walltime(opt.walltime);
    job.nb_nodes = opt.nodes;
    job.nb_cores_per_node = opt.cores_per_node;
    job.stdout_path = opt.output;
    job.stderr_path = opt.error;
    if (!opt.after.empty())
        job.after_job = opt.after;
    return job;
}

int run_job_render(const JobOptions& opt) {
    std::cout << sciforge::jobs::render_script(profile_from(opt), job_from(opt));
    return 0;
}

int run_job_submit(const JobOptions& opt) {
    sciforge::jobs::ProcessRunner runner;
    std::cout << sciforge::jobs::submit(profile_from(opt), job_from(opt), runner,
                                        opt.script_path)
              << "\n";
    return 0;
}

void add_job_flags(CLI::App* cmd, JobOptions& opt) {
    cmd->add_option("--scheduler", opt.scheduler, "oar or slurm")->required();
    cmd->add_option("--name", opt.name, "job name")->required();
    cmd->add_option("--walltime", opt.walltime, "H+:MM:SS or D-HH:MM:SS")
        ->required();
    cmd->add_option("--nodes", opt.nodes, "number of nodes");
    cmd->add_option("--cores-per-node", opt.cores_per_node, "cores per node");
    cmd->add_option("--max-cores-per-node", opt.max_cores_per_node,
                    "profile limit on cores per node (default: no limit)");
    cmd->add_option("--cmd", opt.command, "command to run")->required();
    cmd->add_option("--partition", opt.partition,
                    "partition (SLURM) or queue (OAR)");
    cmd->add_option("--output", opt.output, "stdout path (default <name>.out)");
    cmd->add_option("--error", opt.error, "stderr path (default <name>.err)");
    cmd->add_option("--after", opt.after, "chain after this job id (afterok)");
    cmd->add_option("--launch-prefix", opt.launch_prefix,
                    "prefix before the command (e.g. srun)");
    cmd->add_option("--env", opt.env_lines, "environment setup line (repeatable)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sciforge: research workflow toolkit", "sciforge"};
    app.set_version_flag("--version", sciforge::kVersion);
    app.require_subcommand(1);

    InfoOptions info_opt;
    auto* info = app.add_subcommand("info", "show software and hardware information");
    info->add_flag("--json", info_opt.json, "machine-readable output");

    DumpOptions dump_opt;
    auto* dump = app.add_subcommand("dump", "print the hierarchy of a NetCDF file");
    dump->add_option("file", dump_opt.path, "NetCDF classic file")->required();
    dump->add_flag("--data", dump_opt.show_data, "also print variable data");

    NbstripOptions nb_opt;
    auto* nbstrip = app.add_subcommand("nbstrip", "strip outputs from notebooks");
    nbstrip->add_option("paths", nb_opt.paths, "notebook files")->required();
    nbstrip->add_flag("--include-nbconvert", nb_opt.include_nbconvert,
                      "also process *.nbconvert.ipynb files");
    nbstrip->add_flag("--check", nb_opt.check,
                      "write nothing; exit 1 if any file would change");

    Mat2pyOptions mat_opt;
    auto* mat2py = app.add_subcommand("mat2py", "convert Matlab source toward Python");
    mat2py->add_option("file", mat_opt.path, "input .m file")->required();
    mat2py->add_flag("--report", mat_opt.report, "also write a rewrite report");

    ParamsOptions params_opt;
    auto* params = app.add_subcommand("params", "parameter tree tools");
    auto* validate = params->add_subcommand(
        "validate", "apply overrides to defaults and print the merged tree");
    validate->add_option("defaults", params_opt.defaults_path, "defaults XML file")
        ->required();
    validate->add_option("overrides", params_opt.overrides_path, "overrides XML file")
        ->required();
    params->require_subcommand(1);

    SeriesOptions series_opt;
    auto* series = app.add_subcommand("series", "filename series tools");
    auto* group = series->add_subcommand("group", "group files along an index axis");
    group->add_option("inputs", series_opt.inputs, "directory or filenames")
        ->required();
    group->add_option("--axis", series_opt.axis, "index axis")->required();
    auto* pairs = series->add_subcommand("pairs", "couple files along an index axis");
    pairs->add_option("inputs", series_opt.inputs, "directory or filenames")
        ->required();
    pairs->add_option("--axis", series_opt.axis, "index axis")->required();
    pairs->add_option("--step", series_opt.step, "index step between partners");
    series->require_subcommand(1);

    JobOptions job_opt;
    auto* job = app.add_subcommand("job", "batch-scheduler job tools");
    auto* render = job->add_subcommand("render", "print the job script");
    add_job_flags(render, job_opt);
    auto* submit = job->add_subcommand("submit", "submit through sbatch/oarsub");
    add_job_flags(submit, job_opt);
    submit->add_option("--script", job_opt.script_path,
                       "where to write the script (default: temp directory)");
    job->require_subcommand(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0)
            return app.exit(e);  // --help / --version
        std::cerr << e.what() << "\n";
        return 2;
    }

    try {
        if (*info)
            return run_info(info_opt);
        if (*dump)
            return run_dump(dump_opt);
        if (*nbstrip)
            return run_nbstrip(nb_opt);
        if (*mat2py)
            return run_mat2py(mat_opt);
        if (*validate)
            return run_params_validate(params_opt);
        if (*group)
            return run_series_group(series_opt);
        if (*pairs)
            return run_series_pairs(series_opt);
        if (*render)
            return run_job_render(job_opt);
        if (*submit)
            return run_job_submit(job_opt);
    } catch (const sciforge::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
