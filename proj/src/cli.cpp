#include "fairsched/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "fairsched/engine.hpp"
#include "fairsched/errors.hpp"
#include "fairsched/metrics.hpp"
#include "fairsched/schedulers.hpp"
#include "fairsched/sweep.hpp"

namespace fairsched {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double parse_positive(const std::string& field, const std::string& text) {
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end != text.c_str() + text.size() || text.empty() || !(v > 0.0))
        throw ParamError("weight " + field + " '" + text + "' is not a positive real");
    return v;
}

struct GenerateArgs {
    std::uint64_t seed = 1;
    std::size_t n_jobs = 10000;
    double shape = 1.0;
    double sigma = 0.0;
    double load = 0.9;
    double mean_size = 1.0;
    std::string weights = "uniform";
    std::string out;
};

struct RunArgs {
    std::string trace;
    std::string policy;
    std::string out;
    std::string log_events;
};

struct SweepArgs {
    std::uint64_t seed = 1;
    std::size_t n_jobs = 10000;
    std::size_t reps = 5;
    double load = 0.9;
    double mean_size = 1.0;
    std::vector<double> shapes = SweepGrid::default_shapes();
    std::vector<double> sigmas = SweepGrid::default_sigmas();
    std::vector<std::string> policies{"srpte", "fsp", "psbs"};
    std::string weights = "uniform";
    std::string out;
    unsigned threads = 1;
};

struct CompareArgs {
    std::string trace;
    std::string policy_a;
    std::string policy_b;
    double tol = 1e-9;
};

/// Routes writes to a file when a path is given, else to the fallback stream.
class OutputTarget {
public:
    OutputTarget(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw IoError("cannot open output file: " + path);
            stream_ = &file_;
        }
    }
    std::ostream& stream() { return *stream_; }

private:
    std::ofstream file_;
    std::ostream* stream_;
};

void cmd_generate(const GenerateArgs& a, std::ostream& out) {
    WorkloadParams params;
    params.n_jobs = a.n_jobs;
    params.shape = a.shape;
    params.mean_size = a.mean_size;
    params.load = a.load;
    params.sigma = a.sigma;
    params.weights = parse_weights(a.weights);
    params.seed = a.seed;
    const Workload workload = generate(params);
    OutputTarget target(a.out, out);
    write_trace(workload, target.stream());
}

void cmd_run(const RunArgs& a, std::ostream& out) {
    const Workload workload = read_trace(a.trace);
    auto scheduler = make_scheduler(a.policy, workload);
    RunOptions options;
    options.log_events = !a.log_events.empty();
    const SimulationResult result = run(workload, *scheduler, options);

    std::vector<const JobSpec*> by_id;
    by_id.reserve(workload.size());
    for (const JobSpec& j : workload.jobs()) by_id.push_back(&j);
    std::sort(by_id.begin(), by_id.end(),
              [](const JobSpec* x, const JobSpec* y) { return x->id < y->id; });

    OutputTarget target(a.out, out);
    std::ostream& os = target.stream();
    os << "id,release,size,estimate,weight,completion,sojourn\n";
    for (std::size_t i = 0; i < by_id.size(); ++i) {
        const JobSpec& j = *by_id[i];
        const CompletionRecord& r = result.records[i];
        os << j.id << ',' << fmt(j.release) << ',' << fmt(j.size) << ',' << fmt(j.estimate)
           << ',' << fmt(j.weight) << ',' << fmt(r.completion) << ',' << fmt(r.sojourn) << '\n';
    }
    os << "# mst=" << fmt(mean_sojourn(result)) << " makespan=" << fmt(makespan(result)) << '\n';

    if (!a.log_events.empty()) {
        std::ofstream log(a.log_events);
        if (!log) throw IoError("cannot open event log file: " + a.log_events);
        write_event_log(*result.events, log);
    }
}

void cmd_sweep(const SweepArgs& a, std::ostream& out) {
    SweepGrid grid;
    grid.shapes = a.shapes;
    grid.sigmas = a.sigmas;
    grid.seeds = a.reps;
    grid.n_jobs = a.n_jobs;
    grid.load = a.load;
    grid.mean_size = a.mean_size;
    grid.weights = parse_weights(a.weights);
    grid.policies = a.policies;
    grid.master_seed = a.seed;
    const std::vector<SweepRow> rows = run_sweep(grid, a.threads);
    OutputTarget target(a.out, out);
    write_sweep_csv(rows, target.stream());
}

void cmd_compare(const CompareArgs& a, std::ostream& out) {
    const Workload workload = read_trace(a.trace);
    auto cand = make_scheduler(a.policy_a, workload);
    auto ref = make_scheduler(a.policy_b, workload);
    const SimulationResult cand_result = run(workload, *cand);
    const SimulationResult ref_result = run(workload, *ref);
    const auto violations = dominance_violations(cand_result, ref_result, a.tol);
    out << "candidate: " << a.policy_a << '\n';
    out << "reference: " << a.policy_b << '\n';
    out << "dominates: " << (violations.empty() ? "yes" : "no") << ", " << violations.size()
        << " violations\n";
    for (const DominanceViolation& v : violations)
        out << "job " << v.job_id << ": " << fmt(v.candidate_completion) << " > "
            << fmt(v.reference_completion) << '\n';
}

/// Expands `--config FILE` into ordinary long flags inserted right after the
/// subcommand name. Flags given explicitly on the command line win: config
/// keys already present among the user's arguments are dropped. CLI11 then
/// validates the merged argument line exactly as if everything were typed.
std::vector<std::string> expand_config_args(const std::vector<std::string>& args) {
    std::string path;
    std::vector<std::string> rest;
    rest.reserve(args.size());
    for (std::size_t i = 0; i < args.size(); ++i) {
        const std::string& a = args[i];
        if (a == "--config" && i + 1 < args.size()) {
            path = args[++i];
        } else if (a.rfind("--config=", 0) == 0) {
            path = a.substr(9);
        } else {
            rest.push_back(a);
        }
    }
    if (path.empty()) return rest;

    std::vector<CLI::ConfigItem> items;
    try {
        items = CLI::ConfigTOML{}.from_file(path);
    } catch (const CLI::FileError& e) {
        throw IoError(std::string("config: ") + e.what());
    }

    std::set<std::string> given;
    std::size_t insert_at = rest.size();
    for (std::size_t i = 0; i < rest.size(); ++i) {
        if (rest[i].rfind("--", 0) == 0) {
            given.insert(rest[i].substr(0, rest[i].find('=')));
        } else if (insert_at == rest.size()) {
            insert_at = i + 1; // first bare token is the subcommand
        }
    }

    std::vector<std::string> expanded;
    for (const CLI::ConfigItem& item : items) {
        if (!item.parents.empty())
            throw ParamError("config: sections are not supported, use plain key=value lines");
        if (item.name == "config")
            throw ParamError("config: files cannot chain further config files");
        const std::string flag = "--" + item.name;
        if (given.count(flag)) continue;
        expanded.push_back(flag);
        expanded.insert(expanded.end(), item.inputs.begin(), item.inputs.end());
    }
    rest.insert(rest.begin() + static_cast<std::ptrdiff_t>(insert_at), expanded.begin(),
                expanded.end());
    return rest;
}

} // namespace

WeightModel parse_weights(const std::string& text) {
    if (text.empty() || text == "uniform") return WeightModel::uniform();
    std::vector<double> values, probs;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos)
            throw ParamError("weight entry '" + item + "' is not value:probability");
        values.push_back(parse_positive("value", item.substr(0, colon)));
        probs.push_back(parse_positive("probability", item.substr(colon + 1)));
    }
    if (values.empty()) throw ParamError("empty weight set");
    return WeightModel::discrete(std::move(values), std::move(probs));
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Preemptive single-machine scheduling simulator"};
    app.require_subcommand(1);
    std::string config_path; // consumed by expand_config_args; kept for --help

    GenerateArgs gen;
    CLI::App* cmd_gen = app.add_subcommand("generate", "Generate a synthetic workload trace");
    cmd_gen->add_option("--config", config_path, "Plain key=value file mirroring the flags");
    cmd_gen->add_option("--seed", gen.seed, "Random seed");
    cmd_gen->add_option("--n-jobs", gen.n_jobs, "Number of jobs");
    cmd_gen->add_option("--shape", gen.shape, "Weibull shape of the size distribution");
    cmd_gen->add_option("--sigma", gen.sigma, "Log-normal estimation error spread");
    cmd_gen->add_option("--load", gen.load, "Offered load (arrival rate x mean size)");
    cmd_gen->add_option("--mean-size", gen.mean_size, "Mean job size");
    cmd_gen->add_option("--weights", gen.weights, "'uniform' or discrete set v:p,v:p,...");
    cmd_gen->add_option("--out", gen.out, "Trace output path (default stdout)");

    RunArgs runa;
    CLI::App* cmd_run_ = app.add_subcommand("run", "Run one policy over a trace");
    cmd_run_->add_option("--config", config_path, "Plain key=value file mirroring the flags");
    cmd_run_->add_option("trace", runa.trace, "Input trace CSV")->required();
    cmd_run_->add_option("--policy", runa.policy, "Policy name")->required();
    cmd_run_->add_option("--out", runa.out, "Result CSV path (default stdout)");
    cmd_run_->add_option("--log-events", runa.log_events, "Also write an event log CSV here");

    SweepArgs sweep;
    CLI::App* cmd_sweep_ = app.add_subcommand("sweep", "Run a shape x sigma experiment grid");
    cmd_sweep_->add_option("--config", config_path, "Plain key=value file mirroring the flags");
    cmd_sweep_->add_option("--seed", sweep.seed, "Master seed");
    cmd_sweep_->add_option("--n-jobs", sweep.n_jobs, "Jobs per cell");
    cmd_sweep_->add_option("--reps", sweep.reps, "Replications per cell");
    cmd_sweep_->add_option("--load", sweep.load, "Offered load");
    cmd_sweep_->add_option("--mean-size", sweep.mean_size, "Mean job size");
    cmd_sweep_->add_option("--shapes", sweep.shapes, "Weibull shape axis")->delimiter(',');
    cmd_sweep_->add_option("--sigmas", sweep.sigmas, "Error sigma axis")->delimiter(',');
    cmd_sweep_->add_option("--policies", sweep.policies, "Policies to sweep")->delimiter(',');
    cmd_sweep_->add_option("--weights", sweep.weights, "'uniform' or discrete set v:p,v:p,...");
    cmd_sweep_->add_option("--threads", sweep.threads, "Worker threads for grid cells");
    cmd_sweep_->add_option("--out", sweep.out, "Sweep CSV path (default stdout)");

    CompareArgs cmp;
    CLI::App* cmd_cmp = app.add_subcommand("compare", "Dominance report between two policies");
    cmd_cmp->add_option("--config", config_path, "Plain key=value file mirroring the flags");
    cmd_cmp->add_option("trace", cmp.trace, "Input trace CSV")->required();
    cmd_cmp->add_option("candidate", cmp.policy_a, "Candidate policy")->required();
    cmd_cmp->add_option("reference", cmp.policy_b, "Reference policy")->required();
    cmd_cmp->add_option("--tol", cmp.tol, "Completion-time tolerance");

    try {
        const std::vector<std::string> merged = expand_config_args(args);
        std::vector<const char*> argv;
        argv.reserve(merged.size() + 1);
        argv.push_back("fairsched");
        for (const std::string& a : merged) argv.push_back(a.c_str());

        try {
            app.parse(static_cast<int>(argv.size()), argv.data());
        } catch (const CLI::ParseError& e) {
            const int code = app.exit(e, out, err);
            return code == 0 ? 0 : 2;
        }

        if (cmd_gen->parsed()) cmd_generate(gen, out);
        if (cmd_run_->parsed()) cmd_run(runa, out);
        if (cmd_sweep_->parsed()) cmd_sweep(sweep, out);
        if (cmd_cmp->parsed()) cmd_compare(cmp, out);
        return 0;
    } catch (const ParamError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 3;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return 4;
    }
}

} // namespace fairsched
