#pragma once

#include <cstddef>
#include <vector>

#include "fairsched/engine.hpp"
#include "fairsched/workload.hpp"

namespace fairsched {

/// A job that completed later under the candidate than under the reference.
struct DominanceViolation {
    JobId job_id;
    double candidate_completion;
    double reference_completion;
};

/// Arithmetic mean of sojourn times. Empty result throws MetricError.
double mean_sojourn(const SimulationResult& result);

/// mean_sojourn(result) / mean_sojourn(baseline). Zero or non-finite
/// baseline throws MetricError.
double normalized_mst(const SimulationResult& result, const SimulationResult& baseline);

/// Maximum completion time. Empty result throws MetricError.
double makespan(const SimulationResult& result);

/// Jobs whose candidate completion exceeds the reference completion by more
/// than tol, ordered by job id. Empty means the candidate dominates the
/// reference on this instance. The two results must cover the same job set,
/// otherwise ContractViolation.
std::vector<DominanceViolation> dominance_violations(const SimulationResult& candidate,
                                                     const SimulationResult& reference,
                                                     double tol = 1e-9);

/// Sample Pearson correlation coefficient. Requires equal lengths, at least
/// two points and nonzero variance on both sides; throws MetricError
/// otherwise.
double pearson_correlation(const std::vector<double>& xs, const std::vector<double>& ys);

/// Correlation of elementwise logs; diagnostic companion to the raw-value
/// correlation. All inputs must be positive.
double pearson_correlation_log(const std::vector<double>& xs, const std::vector<double>& ys);

struct PerJobMetrics {
    std::vector<double> sojourns;  // by job id
    std::vector<double> slowdowns; // sojourn / true size, by job id
};

struct MetricsReport {
    double mst = 0.0;
    double mst_normalized = 1.0; // 1 when no baseline given
    double makespan = 0.0;
    PerJobMetrics per_job;
    std::vector<DominanceViolation> dominance_violations; // empty when no reference given
};

/// Aggregates the metrics above for one run. baseline feeds mst_normalized,
/// reference feeds the dominance check; either may be null.
MetricsReport build_report(const SimulationResult& result, const Workload& workload,
                           const SimulationResult* baseline = nullptr,
                           const SimulationResult* reference = nullptr, double tol = 1e-9);

} // namespace fairsched
