#include "fairsched/workload.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "fairsched/errors.hpp"

namespace fairsched {

namespace {

// Role constants for sub-stream seed derivation (arbitrary, fixed forever).
constexpr std::uint64_t kSizesSalt = 0x243F6A8885A308D3ULL;   // sizes
constexpr std::uint64_t kArrivalsSalt = 0x13198A2E03707344ULL; // arrivals
constexpr std::uint64_t kErrorsSalt = 0xA4093822299F31D0ULL;   // estimation errors
constexpr std::uint64_t kWeightsSalt = 0x082EFA98EC4E6C89ULL;  // weights

bool finite_positive(double x) { return std::isfinite(x) && x > 0.0; }

// Shortest text that parses back to exactly the same double; %.17g always
// round-trips IEEE 754 binary64.
void append_double(std::string& out, double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out += buf;
}

} // namespace

Workload::Workload(std::vector<JobSpec> jobs) : jobs_(std::move(jobs)) {
    std::sort(jobs_.begin(), jobs_.end(), [](const JobSpec& a, const JobSpec& b) {
        if (a.release != b.release) return a.release < b.release;
        return a.id < b.id;
    });
    std::unordered_set<JobId> seen;
    seen.reserve(jobs_.size());
    for (const JobSpec& j : jobs_) {
        if (!finite_positive(j.size)) throw ParamError("job size must be finite and > 0");
        if (!finite_positive(j.estimate)) throw ParamError("job estimate must be finite and > 0");
        if (!finite_positive(j.weight)) throw ParamError("job weight must be finite and > 0");
        if (!std::isfinite(j.release) || j.release < 0.0)
            throw ParamError("job release must be finite and >= 0");
        if (!seen.insert(j.id).second)
            throw ParamError("duplicate job id " + std::to_string(j.id));
    }
}

WeightModel WeightModel::discrete(std::vector<double> values, std::vector<double> probs) {
    WeightModel m{std::move(values), std::move(probs)};
    if (m.values.empty()) throw ParamError("weight model value set must not be empty");
    if (m.probs.size() != m.values.size())
        throw ParamError("weight model values and probabilities must have equal length");
    double total = 0.0;
    for (double v : m.values)
        if (!finite_positive(v)) throw ParamError("weight values must be > 0");
    for (double p : m.probs) {
        if (!std::isfinite(p) || p < 0.0) throw ParamError("weight probabilities must be >= 0");
        total += p;
    }
    if (total <= 0.0) throw ParamError("weight probabilities must not all be zero");
    for (double& p : m.probs) p /= total;
    return m;
}

void WorkloadParams::validate() const {
    if (!finite_positive(shape)) throw ParamError("shape must be > 0");
    if (!finite_positive(mean_size)) throw ParamError("mean_size must be > 0");
    if (!std::isfinite(load) || load <= 0.0 || load >= 1.0)
        throw ParamError("load must be in (0, 1)");
    if (!std::isfinite(sigma) || sigma < 0.0) throw ParamError("sigma must be >= 0");
    if (!weights.is_uniform()) {
        // Re-run the discrete-set checks; the model may have been aggregate-initialized.
        WeightModel::discrete(weights.values, weights.probs);
    }
}

double weibull_scale_for_mean(double shape, double mean) {
    if (!finite_positive(shape)) throw ParamError("shape must be > 0");
    if (!finite_positive(mean)) throw ParamError("mean must be > 0");
    return mean / std::tgamma(1.0 + 1.0 / shape);
}

std::vector<double> gen_sizes(std::size_t n, double shape, double mean, Rng& rng) {
    double scale = weibull_scale_for_mean(shape, mean);
    std::vector<double> sizes(n);
    for (double& s : sizes) s = rng.weibull(shape, scale);
    return sizes;
}

std::vector<double> gen_arrivals(std::size_t n, double load, double mean_size, Rng& rng) {
    if (!std::isfinite(load) || load <= 0.0 || load >= 1.0)
        throw ParamError("load must be in (0, 1)");
    if (!finite_positive(mean_size)) throw ParamError("mean_size must be > 0");
    double mean_gap = mean_size / load; // arrival rate = load / mean_size
    std::vector<double> arrivals(n);
    double t = 0.0;
    for (double& a : arrivals) {
        t += rng.exponential(mean_gap);
        a = t;
    }
    return arrivals;
}

std::vector<double> gen_estimates(const std::vector<double>& sizes, double sigma, Rng& rng) {
    if (!std::isfinite(sigma) || sigma < 0.0) throw ParamError("sigma must be >= 0");
    std::vector<double> estimates(sizes.size());
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        if (!finite_positive(sizes[i])) throw ParamError("sizes must be > 0");
        estimates[i] = sigma == 0.0 ? sizes[i] : sizes[i] * std::exp(sigma * rng.normal());
    }
    return estimates;
}

std::vector<double> gen_weights(std::size_t n, const WeightModel& model, Rng& rng) {
    std::vector<double> weights(n, 1.0);
    if (model.is_uniform()) return weights;
    WeightModel m = WeightModel::discrete(model.values, model.probs);
    for (double& w : weights) {
        double u = rng.uniform01();
        double acc = 0.0;
        w = m.values.back();
        for (std::size_t k = 0; k < m.values.size(); ++k) {
            acc += m.probs[k];
            if (u < acc) {
                w = m.values[k];
                break;
            }
        }
    }
    return weights;
}

Workload generate(const WorkloadParams& params) {
    params.validate();
    Rng size_rng(splitmix64(params.seed ^ kSizesSalt));
    Rng arrival_rng(splitmix64(params.seed ^ kArrivalsSalt));
    Rng error_rng(splitmix64(params.seed ^ kErrorsSalt));
    Rng weight_rng(splitmix64(params.seed ^ kWeightsSalt));

    std::vector<double> sizes = gen_sizes(params.n_jobs, params.shape, params.mean_size, size_rng);
    std::vector<double> arrivals =
        gen_arrivals(params.n_jobs, params.load, params.mean_size, arrival_rng);
    std::vector<double> estimates = gen_estimates(sizes, params.sigma, error_rng);
    std::vector<double> weights = gen_weights(params.n_jobs, params.weights, weight_rng);

    std::vector<JobSpec> jobs(params.n_jobs);
    for (std::size_t i = 0; i < params.n_jobs; ++i)
        jobs[i] = {static_cast<JobId>(i), arrivals[i], sizes[i], estimates[i], weights[i]};
    return Workload(std::move(jobs));
}

static const char* kTraceHeader = "id,release,size,estimate,weight";

void write_trace(const Workload& workload, std::ostream& out) {
    std::string line;
    out << kTraceHeader << '\n';
    for (const JobSpec& j : workload.jobs()) {
        line.clear();
        line += std::to_string(j.id);
        line += ',';
        append_double(line, j.release);
        line += ',';
        append_double(line, j.size);
        line += ',';
        append_double(line, j.estimate);
        line += ',';
        append_double(line, j.weight);
        out << line << '\n';
    }
}

void write_trace(const Workload& workload, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open trace file for writing: " + path);
    write_trace(workload, out);
}

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double_field(const std::string& field, const char* what, std::size_t line_no) {
    errno = 0;
    char* end = nullptr;
    double v = std::strtod(field.c_str(), &end);
    if (field.empty() || end != field.c_str() + field.size() || errno == ERANGE)
        throw ParseError(std::string("malformed ") + what + " '" + field + "'", line_no);
    return v;
}

JobId parse_id_field(const std::string& field, std::size_t line_no) {
    if (field.empty() || field[0] == '-' ||
        !std::all_of(field.begin(), field.end(), [](unsigned char c) { return std::isdigit(c); }))
        throw ParseError("malformed id '" + field + "'", line_no);
    errno = 0;
    char* end = nullptr;
    unsigned long long v = std::strtoull(field.c_str(), &end, 10);
    if (end != field.c_str() + field.size() || errno == ERANGE)
        throw ParseError("malformed id '" + field + "'", line_no);
    return static_cast<JobId>(v);
}

} // namespace

Workload read_trace(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    std::vector<JobSpec> jobs;
    std::unordered_set<JobId> seen;

    while (std::getline(in, line)) {
        ++line_no;
        std::string t = trim(line);
        if (t.empty()) continue;
        if (!header_seen) {
            if (t != kTraceHeader)
                throw ParseError("expected header '" + std::string(kTraceHeader) + "'", line_no);
            header_seen = true;
            continue;
        }
        std::vector<std::string> fields;
        std::size_t pos = 0;
        while (true) {
            std::size_t comma = t.find(',', pos);
            fields.push_back(trim(t.substr(pos, comma - pos)));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        if (fields.size() != 5)
            throw ParseError("expected 5 comma-separated fields, got " +
                                 std::to_string(fields.size()),
                             line_no);
        JobSpec j;
        j.id = parse_id_field(fields[0], line_no);
        j.release = parse_double_field(fields[1], "release", line_no);
        j.size = parse_double_field(fields[2], "size", line_no);
        j.estimate = parse_double_field(fields[3], "estimate", line_no);
        j.weight = parse_double_field(fields[4], "weight", line_no);

        if (!seen.insert(j.id).second)
            throw ParseError("duplicate job id " + std::to_string(j.id), line_no);
        if (!std::isfinite(j.release) || j.release < 0.0)
            throw ParseError("release must be finite and >= 0", line_no);
        if (!finite_positive(j.size)) throw ParseError("size must be > 0", line_no);
        if (!finite_positive(j.estimate)) throw ParseError("estimate must be > 0", line_no);
        if (!finite_positive(j.weight)) throw ParseError("weight must be > 0", line_no);
        jobs.push_back(j);
    }
    if (!header_seen) throw ParseError("missing trace header", 1);
    return Workload(std::move(jobs));
}

Workload read_trace(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open trace file: " + path);
    return read_trace(in);
}

} // namespace fairsched
