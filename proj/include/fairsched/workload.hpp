#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fairsched/rng.hpp"

namespace fairsched {

using JobId = std::uint64_t;

/// One job: identity, release time, true size, a-priori size estimate and
/// DPS weight. The estimate equals the true size when sigma is zero.
struct JobSpec {
    JobId id = 0;
    double release = 0.0;
    double size = 0.0;
    double estimate = 0.0;
    double weight = 1.0;

    friend bool operator==(const JobSpec&, const JobSpec&) = default;
};

/// Jobs ordered by (release, id). Construction sorts and validates: ids
/// unique, sizes/estimates/weights strictly positive, releases finite and
/// non-negative.
class Workload {
public:
    Workload() = default;
    explicit Workload(std::vector<JobSpec> jobs);

    const std::vector<JobSpec>& jobs() const noexcept { return jobs_; }
    std::size_t size() const noexcept { return jobs_.size(); }
    bool empty() const noexcept { return jobs_.empty(); }

    friend bool operator==(const Workload&, const Workload&) = default;

private:
    std::vector<JobSpec> jobs_;
};

/// Weight assignment: uniform (every weight 1) or i.i.d. draws from a
/// discrete value set with given probabilities.
struct WeightModel {
    std::vector<double> values; // empty means uniform weight 1
    std::vector<double> probs;

    static WeightModel uniform() { return {}; }
    static WeightModel discrete(std::vector<double> values, std::vector<double> probs);

    bool is_uniform() const noexcept { return values.empty(); }

    friend bool operator==(const WeightModel&, const WeightModel&) = default;
};

struct WorkloadParams {
    std::size_t n_jobs = 0;
    double shape = 1.0;     // Weibull shape k; heavy-tailed below 1
    double mean_size = 1.0;
    double load = 0.9;      // rho = arrival rate * mean size, in (0,1)
    double sigma = 0.0;     // log-normal size-estimation error spread
    WeightModel weights = WeightModel::uniform();
    std::uint64_t seed = 0;

    /// Throws ParamError when any field is outside its stated range.
    void validate() const;
};

/// Scale such that Weibull(shape, scale) has the requested mean:
/// scale = mean / Gamma(1 + 1/shape).
double weibull_scale_for_mean(double shape, double mean);

std::vector<double> gen_sizes(std::size_t n, double shape, double mean, Rng& rng);

/// Cumulative sums of i.i.d. exponential inter-arrivals with rate
/// load / mean_size. The first release is the first inter-arrival draw.
std::vector<double> gen_arrivals(std::size_t n, double load, double mean_size, Rng& rng);

/// estimate_i = size_i * exp(sigma * Z_i), Z_i i.i.d. standard normal.
std::vector<double> gen_estimates(const std::vector<double>& sizes, double sigma, Rng& rng);

std::vector<double> gen_weights(std::size_t n, const WeightModel& model, Rng& rng);

/// Deterministic function of params. Sizes, arrivals, estimation errors and
/// weights come from four independent sub-streams derived from the seed, so
/// changing sigma does not perturb the size sequence.
Workload generate(const WorkloadParams& params);

/// Trace file: UTF-8 CSV, header `id,release,size,estimate,weight`, one job
/// per row, written with enough digits to round-trip doubles exactly.
void write_trace(const Workload& workload, std::ostream& out);
void write_trace(const Workload& workload, const std::string& path);
Workload read_trace(std::istream& in);
Workload read_trace(const std::string& path);

} // namespace fairsched
