#include "fairsched/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fairsched/errors.hpp"

namespace fairsched {

double mean_sojourn(const SimulationResult& result) {
    if (result.records.empty()) throw MetricError("mean sojourn of an empty result");
    double sum = 0.0;
    for (const CompletionRecord& r : result.records) sum += r.sojourn;
    return sum / static_cast<double>(result.records.size());
}

double normalized_mst(const SimulationResult& result, const SimulationResult& baseline) {
    const double denom = mean_sojourn(baseline);
    if (!(denom > 0.0) || !std::isfinite(denom))
        throw MetricError("baseline mean sojourn is not a positive real");
    return mean_sojourn(result) / denom;
}

double makespan(const SimulationResult& result) {
    if (result.records.empty()) throw MetricError("makespan of an empty result");
    double m = result.records.front().completion;
    for (const CompletionRecord& r : result.records) m = std::max(m, r.completion);
    return m;
}

std::vector<DominanceViolation> dominance_violations(const SimulationResult& candidate,
                                                     const SimulationResult& reference,
                                                     double tol) {
    if (candidate.records.size() != reference.records.size())
        throw ContractViolation("dominance check over results with different job counts");
    std::vector<DominanceViolation> out;
    // Records are sorted by job id in both results.
    for (std::size_t i = 0; i < candidate.records.size(); ++i) {
        const CompletionRecord& c = candidate.records[i];
        const CompletionRecord& r = reference.records[i];
        if (c.job_id != r.job_id)
            throw ContractViolation("dominance check over results with different job sets");
        if (c.completion > r.completion + tol)
            out.push_back({c.job_id, c.completion, r.completion});
    }
    return out;
}

namespace {

double correlation_impl(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size()) throw MetricError("correlation over unequal-length series");
    const std::size_t n = xs.size();
    if (n < 2) throw MetricError("correlation needs at least two points");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = xs[i] - mx;
        const double dy = ys[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (!(sxx > 0.0) || !(syy > 0.0)) throw MetricError("correlation over a constant series");
    const double r = sxy / std::sqrt(sxx * syy);
    return std::clamp(r, -1.0, 1.0);
}

} // namespace

double pearson_correlation(const std::vector<double>& xs, const std::vector<double>& ys) {
    return correlation_impl(xs, ys);
}

double pearson_correlation_log(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size()) throw MetricError("correlation over unequal-length series");
    std::vector<double> lx(xs.size()), ly(ys.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!(xs[i] > 0.0) || !(ys[i] > 0.0))
            throw MetricError("log correlation needs positive inputs");
        lx[i] = std::log(xs[i]);
        ly[i] = std::log(ys[i]);
    }
    return correlation_impl(lx, ly);
}

MetricsReport build_report(const SimulationResult& result, const Workload& workload,
                           const SimulationResult* baseline, const SimulationResult* reference,
                           double tol) {
    if (result.records.size() != workload.size())
        throw ContractViolation("report over a result that does not cover the workload");
    MetricsReport report;
    report.mst = mean_sojourn(result);
    report.makespan = makespan(result);
    if (baseline != nullptr) report.mst_normalized = normalized_mst(result, *baseline);
    if (reference != nullptr)
        report.dominance_violations = dominance_violations(result, *reference, tol);
    report.per_job.sojourns.reserve(result.records.size());
    report.per_job.slowdowns.reserve(result.records.size());
    // Workload jobs and result records are both ordered; workload by
    // (release, id), records by id. Map sizes through a single pass.
    std::vector<const JobSpec*> by_id;
    by_id.reserve(workload.size());
    for (const JobSpec& j : workload.jobs()) by_id.push_back(&j);
    std::sort(by_id.begin(), by_id.end(),
              [](const JobSpec* a, const JobSpec* b) { return a->id < b->id; });
    for (std::size_t i = 0; i < result.records.size(); ++i) {
        const CompletionRecord& r = result.records[i];
        if (by_id[i]->id != r.job_id)
            throw ContractViolation("report workload does not match the result's job set");
        report.per_job.sojourns.push_back(r.sojourn);
        report.per_job.slowdowns.push_back(r.sojourn / by_id[i]->size);
    }
    return report;
}

} // namespace fairsched
