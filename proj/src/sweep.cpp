#include "fairsched/sweep.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <optional>
#include <ostream>
#include <thread>

#include "fairsched/engine.hpp"
#include "fairsched/errors.hpp"
#include "fairsched/metrics.hpp"
#include "fairsched/rng.hpp"
#include "fairsched/schedulers.hpp"

namespace fairsched {

namespace {

bool policy_registered(std::string_view name) {
    for (const std::string& n : scheduler_names())
        if (name == n) return true;
    if (name.substr(0, 4) == "pri:") return policy_registered(name.substr(4));
    return false;
}

void append_double(std::string& out, double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out += buf;
}

} // namespace

std::vector<double> SweepGrid::default_shapes() {
    // 8 points log-spaced over [0.125, 4]: ratio 32 over 7 intervals.
    std::vector<double> shapes(8);
    const double lo = std::log(0.125), hi = std::log(4.0);
    for (std::size_t i = 0; i < shapes.size(); ++i)
        shapes[i] = std::exp(lo + (hi - lo) * static_cast<double>(i) / 7.0);
    shapes.front() = 0.125;
    shapes.back() = 4.0;
    return shapes;
}

std::vector<double> SweepGrid::default_sigmas() {
    std::vector<double> sigmas;
    for (int i = 0; i <= 12; ++i) sigmas.push_back(0.25 * i);
    return sigmas;
}

void SweepGrid::validate() const {
    if (shapes.empty()) throw ParamError("sweep grid has no shapes");
    if (sigmas.empty()) throw ParamError("sweep grid has no sigmas");
    if (policies.empty()) throw ParamError("sweep grid has no policies");
    if (seeds == 0) throw ParamError("sweep grid needs at least one replication");
    for (double s : shapes)
        if (!(s > 0.0) || !std::isfinite(s)) throw ParamError("sweep shape must be a positive real");
    for (double s : sigmas)
        if (!(s >= 0.0) || !std::isfinite(s)) throw ParamError("sweep sigma must be >= 0");
    for (const std::string& p : policies)
        if (!policy_registered(p)) throw ParamError("unregistered sweep policy '" + p + "'");
    WorkloadParams probe;
    probe.n_jobs = n_jobs;
    probe.shape = shapes.front();
    probe.mean_size = mean_size;
    probe.load = load;
    probe.sigma = sigmas.front();
    probe.weights = weights;
    probe.validate();
}

std::uint64_t sweep_cell_seed(std::uint64_t master_seed, std::size_t shape_idx,
                              std::size_t sigma_idx, std::size_t rep) {
    std::uint64_t s = splitmix64(master_seed);
    s = splitmix64(s ^ (0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(shape_idx)));
    s = splitmix64(s ^ (0xBF58476D1CE4E5B9ULL + static_cast<std::uint64_t>(sigma_idx)));
    s = splitmix64(s ^ (0x94D049BB133111EBULL + static_cast<std::uint64_t>(rep)));
    return s;
}

namespace {

struct Cell {
    std::size_t shape_idx;
    std::size_t sigma_idx;
    std::size_t rep;
};

std::vector<SweepRow> run_cell(const SweepGrid& grid, const Cell& cell) {
    WorkloadParams params;
    params.n_jobs = grid.n_jobs;
    params.shape = grid.shapes[cell.shape_idx];
    params.mean_size = grid.mean_size;
    params.load = grid.load;
    params.sigma = grid.sigmas[cell.sigma_idx];
    params.weights = grid.weights;
    params.seed = sweep_cell_seed(grid.master_seed, cell.shape_idx, cell.sigma_idx, cell.rep);
    const Workload workload = generate(params);

    PsScheduler ps;
    const SimulationResult ps_result = run(workload, ps);
    const double ps_mst = mean_sojourn(ps_result);

    std::vector<SweepRow> rows;
    rows.reserve(grid.policies.size());
    for (const std::string& policy : grid.policies) {
        double mst;
        if (policy == "ps") {
            mst = ps_mst;
        } else {
            auto scheduler = make_scheduler(policy, workload);
            mst = mean_sojourn(run(workload, *scheduler));
        }
        rows.push_back({params.shape, params.sigma, params.seed, policy, mst, mst / ps_mst});
    }
    return rows;
}

} // namespace

std::vector<SweepRow> run_sweep(const SweepGrid& grid, unsigned threads) {
    grid.validate();

    std::vector<Cell> cells;
    cells.reserve(grid.shapes.size() * grid.sigmas.size() * grid.seeds);
    for (std::size_t i = 0; i < grid.shapes.size(); ++i)
        for (std::size_t j = 0; j < grid.sigmas.size(); ++j)
            for (std::size_t r = 0; r < grid.seeds; ++r) cells.push_back({i, j, r});

    std::vector<std::optional<std::vector<SweepRow>>> results(cells.size());
    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::optional<std::pair<std::size_t, std::string>> first_error;

    auto worker = [&] {
        for (;;) {
            const std::size_t k = next.fetch_add(1);
            if (k >= cells.size()) return;
            {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (first_error) return;
            }
            try {
                results[k] = run_cell(grid, cells[k]);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error || k < first_error->first) first_error = {k, e.what()};
            }
        }
    };

    const unsigned pool = std::max(1u, threads);
    if (pool == 1) {
        worker();
    } else {
        std::vector<std::thread> team;
        team.reserve(pool);
        for (unsigned i = 0; i < pool; ++i) team.emplace_back(worker);
        for (std::thread& t : team) t.join();
    }

    if (first_error) {
        const Cell& c = cells[first_error->first];
        char buf[160];
        std::snprintf(buf, sizeof(buf), "sweep cell shape=%g sigma=%g rep=%zu failed: ",
                      grid.shapes[c.shape_idx], grid.sigmas[c.sigma_idx], c.rep);
        throw Error(buf + first_error->second);
    }

    std::vector<SweepRow> rows;
    rows.reserve(cells.size() * grid.policies.size());
    for (auto& cell_rows : results)
        for (SweepRow& row : *cell_rows) rows.push_back(std::move(row));
    return rows;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
    out << "shape,sigma,seed,policy,mst,mst_norm_ps\n";
    std::string line;
    for (const SweepRow& row : rows) {
        line.clear();
        append_double(line, row.shape);
        line += ',';
        append_double(line, row.sigma);
        line += ',';
        line += std::to_string(row.seed);
        line += ',';
        line += row.policy;
        line += ',';
        append_double(line, row.mst);
        line += ',';
        append_double(line, row.mst_norm_ps);
        line += '\n';
        out << line;
    }
}

} // namespace fairsched
