#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fairsched/workload.hpp"

namespace fairsched {

/// Experiment grid: every (shape, sigma, replication, policy) combination is
/// one run, normalized against PS on the identical workload.
struct SweepGrid {
    std::vector<double> shapes = default_shapes();
    std::vector<double> sigmas = default_sigmas();
    std::size_t seeds = 5; // replications per (shape, sigma)
    std::size_t n_jobs = 10000;
    double load = 0.9;
    double mean_size = 1.0;
    WeightModel weights = WeightModel::uniform();
    std::vector<std::string> policies{"srpte", "fsp", "psbs"};
    std::uint64_t master_seed = 1;

    /// 8 values log-spaced over [0.125, 4].
    static std::vector<double> default_shapes();
    /// 0 to 3 in steps of 0.25.
    static std::vector<double> default_sigmas();

    /// Throws ParamError on empty axes, non-positive parameters or
    /// unregistered policy names.
    void validate() const;
};

struct SweepRow {
    double shape;
    double sigma;
    std::uint64_t seed; // the derived per-cell seed, reusable standalone
    std::string policy;
    double mst;
    double mst_norm_ps;
};

/// Deterministic per-cell seed: the master seed and the cell coordinates
/// chained through splitmix64 with distinct additive constants per axis, so
/// no two cells of a grid share a seed by accident.
std::uint64_t sweep_cell_seed(std::uint64_t master_seed, std::size_t shape_idx,
                              std::size_t sigma_idx, std::size_t rep);

/// Runs the whole grid, one PS baseline per cell reused across that cell's
/// policies. Rows come back in grid order (shape, sigma, rep, policy) no
/// matter how many threads execute the cells. A failing cell aborts the
/// sweep with an Error naming the cell.
std::vector<SweepRow> run_sweep(const SweepGrid& grid, unsigned threads = 1);

/// Header `shape,sigma,seed,policy,mst,mst_norm_ps`, one row per line.
void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out);

} // namespace fairsched
