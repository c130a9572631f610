#include "fairsched/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>
#include <unordered_map>
#include <vector>

#include "fairsched/errors.hpp"
#include "fairsched/schedulers.hpp"

namespace fairsched {

namespace {

struct StepCompletion {
    double time;
    JobId id;
    double served;
};

struct LiveShare {
    JobId job;
    double fraction;
};

} // namespace

SimulationResult step_simulate(const Workload& workload, Scheduler& scheduler,
                               const OracleConfig& config) {
    if (!(config.dt > 0.0) || !std::isfinite(config.dt))
        throw ParamError("oracle dt must be a positive real");
    if (!(config.max_time > 0.0))
        throw ParamError("oracle max_time must be positive");

    const auto wall_start = std::chrono::steady_clock::now();
    const std::vector<JobSpec>& jobs = workload.jobs();
    const std::size_t n = jobs.size();

    std::unordered_map<JobId, double> remaining;
    std::unordered_map<JobId, double> served;
    remaining.reserve(n);
    served.reserve(n);

    SimulationResult result;
    result.records.reserve(n);

    std::size_t next_arrival = 0;
    std::size_t pending = 0;
    std::size_t steps = 0;
    double t = 0.0;
    AllocationVector alloc;
    std::vector<LiveShare> live;
    std::vector<StepCompletion> finished;

    auto admit_due = [&](double now) {
        while (next_arrival < n && jobs[next_arrival].release <= now) {
            const JobSpec& j = jobs[next_arrival];
            remaining.emplace(j.id, j.size);
            served.emplace(j.id, 0.0);
            scheduler.notify_arrival(j, now);
            ++pending;
            ++next_arrival;
        }
    };

    admit_due(t);
    while (pending > 0 || next_arrival < n) {
        if (pending == 0) {
            t = jobs[next_arrival].release;
            admit_due(t);
            continue;
        }
        if (t > config.max_time)
            throw Error("oracle diverged: horizon " + std::to_string(config.max_time) +
                        " exceeded with jobs still pending");

        // Steps are dt wide except when a release falls inside the window:
        // then the step ends exactly at the release. Arrivals at their true
        // instants keep finish tags comparable with the engine's; everything
        // else (stale in-step allocations) stays first-order in dt.
        double step_end = t + config.dt;
        if (next_arrival < n && jobs[next_arrival].release < step_end)
            step_end = jobs[next_arrival].release;

        alloc.clear();
        scheduler.allocation(t, alloc);
        double sum = 0.0;
        for (const auto& e : alloc.entries()) sum += e.fraction;
        result.max_alloc_sum_deviation =
            std::max(result.max_alloc_sum_deviation, std::abs(sum - 1.0));

        // Hold the queried shares for the whole step, but conserve work:
        // when a job completes mid-step its share is re-spread over the
        // others in proportion to their current fractions. The re-spread is
        // exact for egalitarian and weighted sharing; under policies that
        // serve one job at a time the freed capacity has nowhere to go (the
        // next job's fraction is zero until the next query), which is what
        // keeps the oracle first-order in dt.
        finished.clear();
        live.clear();
        for (const auto& e : alloc.entries()) live.push_back({e.job, e.fraction});
        double tau = t;
        while (!live.empty()) {
            // Earliest interpolated completion under the current shares.
            // The crossing test carries the same slack the engine grants, so
            // a completion that coincides exactly with a step boundary (e.g.
            // with an arrival) is not left behind as a sliver of work.
            std::size_t best = live.size();
            double best_time = step_end;
            for (std::size_t i = 0; i < live.size(); ++i) {
                const LiveShare& s = live[i];
                if (s.fraction <= 0.0) continue;
                const double rem = remaining.at(s.job);
                const double slack = 1e-12 + 1e-9 * s.fraction;
                if (rem > s.fraction * (step_end - tau) + slack) continue;
                const double t_c = std::min(tau + rem / s.fraction, step_end);
                if (best == live.size() || t_c < best_time ||
                    (t_c == best_time && s.job < live[best].job)) {
                    best = i;
                    best_time = t_c;
                }
            }
            if (best == live.size()) {
                for (const LiveShare& s : live) {
                    if (s.fraction <= 0.0) continue;
                    remaining.at(s.job) -= s.fraction * (step_end - tau);
                    served.at(s.job) += s.fraction * (step_end - tau);
                }
                break;
            }
            for (std::size_t i = 0; i < live.size(); ++i) {
                if (i == best || live[i].fraction <= 0.0) continue;
                const double delta = live[i].fraction * (best_time - tau);
                double& rem = remaining.at(live[i].job);
                rem = std::max(rem - delta, 0.0);
                served.at(live[i].job) += delta;
            }
            const LiveShare winner = live[best];
            finished.push_back(
                {best_time, winner.job, served.at(winner.job) + remaining.at(winner.job)});
            remaining.erase(winner.job);
            served.erase(winner.job);
            live.erase(live.begin() + static_cast<std::ptrdiff_t>(best));
            double surviving = 0.0;
            for (const LiveShare& s : live) surviving += s.fraction;
            if (surviving > 0.0)
                for (LiveShare& s : live) s.fraction += winner.fraction * s.fraction / surviving;
            tau = best_time;
        }
        for (const StepCompletion& f : finished) {
            scheduler.notify_real_completion(f.id, f.time);
            --pending;
            const JobSpec& spec = *std::find_if(jobs.begin(), jobs.end(),
                                                [&](const JobSpec& j) { return j.id == f.id; });
            result.records.push_back({f.id, f.time, f.time - spec.release, f.served});
        }

        t = step_end;
        ++steps;
        admit_due(t);
    }

    result.event_count = steps;
    std::sort(result.records.begin(), result.records.end(),
              [](const CompletionRecord& a, const CompletionRecord& b) { return a.job_id < b.job_id; });
    result.completion_sequence.reserve(n);
    std::vector<const CompletionRecord*> order;
    order.reserve(n);
    for (const CompletionRecord& r : result.records) order.push_back(&r);
    std::sort(order.begin(), order.end(), [](const CompletionRecord* a, const CompletionRecord* b) {
        if (a->completion != b->completion) return a->completion < b->completion;
        return a->job_id < b->job_id;
    });
    for (const CompletionRecord* r : order) result.completion_sequence.push_back(r->job_id);
    result.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
    return result;
}

SimulationResult step_simulate(const Workload& workload, std::string_view policy,
                               const OracleConfig& config) {
    auto scheduler = make_scheduler(policy, workload);
    return step_simulate(workload, *scheduler, config);
}

} // namespace fairsched
