#include "fairsched/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <unordered_map>

#include "fairsched/errors.hpp"

namespace fairsched {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
} // namespace

const CompletionRecord& SimulationResult::record_of(JobId id) const {
    auto it = std::lower_bound(records.begin(), records.end(), id,
                               [](const CompletionRecord& r, JobId v) { return r.job_id < v; });
    if (it == records.end() || it->job_id != id)
        throw ContractViolation("no completion record for job id " + std::to_string(id));
    return *it;
}

namespace {

class Run {
public:
    Run(const Workload& workload, Scheduler& scheduler, const RunOptions& options)
        : jobs_(workload.jobs()), sched_(scheduler), opts_(options) {
        std::size_t n = jobs_.size();
        remaining_.resize(n);
        served_.assign(n, 0.0);
        pending_.assign(n, false);
        alloc_stamp_.assign(n, 0);
        index_.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            remaining_[i] = jobs_[i].size;
            index_.emplace(jobs_[i].id, i);
        }
        if (opts_.log_events) result_.events.emplace();
    }

    SimulationResult finish() && {
        auto start = std::chrono::steady_clock::now();
        loop();
        result_.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

        std::sort(result_.records.begin(), result_.records.end(),
                  [](const CompletionRecord& a, const CompletionRecord& b) {
                      return a.job_id < b.job_id;
                  });
        result_.completion_sequence.resize(result_.records.size());
        std::vector<const CompletionRecord*> by_completion;
        by_completion.reserve(result_.records.size());
        for (const CompletionRecord& r : result_.records) by_completion.push_back(&r);
        std::sort(by_completion.begin(), by_completion.end(),
                  [](const CompletionRecord* a, const CompletionRecord* b) {
                      if (a->completion != b->completion) return a->completion < b->completion;
                      return a->job_id < b->job_id;
                  });
        for (std::size_t i = 0; i < by_completion.size(); ++i)
            result_.completion_sequence[i] = by_completion[i]->job_id;
        return std::move(result_);
    }

private:
    void log_event(double t, EventKind kind, JobId id) {
        ++result_.event_count;
        if (!result_.events) return;
        EngineEvent ev{t, kind, id, {}};
        ev.allocation = alloc_.entries();
        std::sort(ev.allocation.begin(), ev.allocation.end(),
                  [](const AllocationVector::Entry& a, const AllocationVector::Entry& b) {
                      return a.job < b.job;
                  });
        result_.events->push_back(std::move(ev));
    }

    void admit_due_arrivals(double t) {
        while (next_arrival_ < jobs_.size() && jobs_[next_arrival_].release <= t + kTimeEps) {
            const JobSpec& job = jobs_[next_arrival_];
            std::size_t idx = index_.at(job.id);
            pending_[idx] = true;
            ++pending_count_;
            ++next_arrival_;
            sched_.notify_arrival(job, t);
            log_event(t, EventKind::Arrival, job.id);
        }
    }

    void complete_job(std::size_t idx, double t) {
        remaining_[idx] = 0.0;
        pending_[idx] = false;
        --pending_count_;
        ++completed_count_;
        const JobSpec& job = jobs_[idx];
        result_.records.push_back({job.id, t, t - job.release, served_[idx]});
        sched_.notify_real_completion(job.id, t);
        log_event(t, EventKind::Completion, job.id);
    }

    // Query and validate the allocation at time t.
    void query_allocation(double t) {
        alloc_.clear();
        sched_.allocation(t, alloc_);
        ++alloc_generation_;
        double sum = 0.0;
        for (const auto& e : alloc_.entries()) {
            auto it = index_.find(e.job);
            if (it == index_.end())
                throw PolicyViolation(std::string(sched_.name()) + ": allocation names unknown job " +
                                          std::to_string(e.job),
                                      t);
            std::size_t idx = it->second;
            if (!pending_[idx])
                throw PolicyViolation(std::string(sched_.name()) +
                                          ": allocation names non-pending job " + std::to_string(e.job),
                                      t);
            if (alloc_stamp_[idx] == alloc_generation_)
                throw PolicyViolation(std::string(sched_.name()) + ": duplicate allocation entry for job " +
                                          std::to_string(e.job),
                                      t);
            alloc_stamp_[idx] = alloc_generation_;
            if (!(e.fraction >= 0.0) || !std::isfinite(e.fraction))
                throw PolicyViolation(std::string(sched_.name()) + ": negative or non-finite fraction",
                                      t);
            sum += e.fraction;
        }
        if (sum > 1.0 + kAllocEps)
            throw PolicyViolation(std::string(sched_.name()) + ": allocation sum " +
                                      std::to_string(sum) + " exceeds machine capacity",
                                  t);
        if (pending_count_ > 0) {
            if (sum <= kWorkEps)
                throw PolicyViolation(std::string(sched_.name()) +
                                          ": machine idle with pending jobs (not work-conserving)",
                                      t);
            double dev = std::abs(sum - 1.0);
            if (dev > result_.max_alloc_sum_deviation) result_.max_alloc_sum_deviation = dev;
        }
    }

    void loop() {
        std::size_t n = jobs_.size();
        double t = 0.0;
        int zero_dt_streak = 0;

        while (completed_count_ < n) {
            if (pending_count_ == 0) {
                // Idle: jump to the next release.
                t = std::max(t, jobs_[next_arrival_].release);
                admit_due_arrivals(t);
                continue;
            }
            query_allocation(t);

            double t_complete = kInf;
            for (const auto& e : alloc_.entries()) {
                if (e.fraction <= 0.0) continue;
                std::size_t idx = index_.at(e.job);
                double eta = t + remaining_[idx] / e.fraction;
                if (eta < t_complete) t_complete = eta;
            }
            double t_arrival = next_arrival_ < n ? jobs_[next_arrival_].release : kInf;
            double t_internal = kInf;
            if (auto ev = sched_.next_internal_event(t); ev.has_value())
                t_internal = std::max(*ev, t); // never travel back
            double t_next = std::min({t_complete, t_arrival, t_internal});
            if (t_next == kInf)
                throw PolicyViolation(std::string(sched_.name()) + ": no progress possible", t);

            if (t_next > t) {
                double dt = t_next - t;
                for (const auto& e : alloc_.entries()) {
                    if (e.fraction <= 0.0) continue;
                    std::size_t idx = index_.at(e.job);
                    remaining_[idx] -= e.fraction * dt;
                    served_[idx] += e.fraction * dt;
                }
                t = t_next;
                zero_dt_streak = 0;
            } else if (++zero_dt_streak > 64) {
                throw PolicyViolation(std::string(sched_.name()) +
                                          ": internal events do not advance time",
                                      t);
            }

            // A job completes here when its remaining work hit zero, or would
            // within one coincidence epsilon at its current rate.
            completing_.clear();
            for (const auto& e : alloc_.entries()) {
                std::size_t idx = index_.at(e.job);
                if (!pending_[idx]) continue;
                if (remaining_[idx] <= kWorkEps + e.fraction * kTimeEps) completing_.push_back(idx);
            }
            std::sort(completing_.begin(), completing_.end(),
                      [this](std::size_t a, std::size_t b) { return jobs_[a].id < jobs_[b].id; });

            if (opts_.arrivals_before_completions) admit_due_arrivals(t);
            for (std::size_t idx : completing_) complete_job(idx, t);
            if (!opts_.arrivals_before_completions) admit_due_arrivals(t);

            if (completing_.empty() && t == t_internal) {
                log_event(t, EventKind::Internal, 0);
            }
        }
    }

    const std::vector<JobSpec>& jobs_;
    Scheduler& sched_;
    RunOptions opts_;

    std::unordered_map<JobId, std::size_t> index_;
    std::vector<double> remaining_;
    std::vector<double> served_;
    std::vector<char> pending_;
    std::vector<std::uint64_t> alloc_stamp_;
    std::uint64_t alloc_generation_ = 0;
    std::size_t next_arrival_ = 0;
    std::size_t pending_count_ = 0;
    std::size_t completed_count_ = 0;
    AllocationVector alloc_;
    std::vector<std::size_t> completing_;
    SimulationResult result_;
};

} // namespace

SimulationResult run(const Workload& workload, Scheduler& scheduler, const RunOptions& options) {
    return Run(workload, scheduler, options).finish();
}

const std::vector<EngineEvent>& replay_events(const SimulationResult& result) {
    if (!result.events)
        throw Error("event log requested but logging was not enabled for this run");
    return *result.events;
}

void write_event_log(const std::vector<EngineEvent>& events, std::ostream& out) {
    out << "time,kind,job_id\n";
    char buf[32];
    for (const EngineEvent& ev : events) {
        std::snprintf(buf, sizeof(buf), "%.17g", ev.time);
        const char* kind = ev.kind == EventKind::Arrival      ? "arrival"
                           : ev.kind == EventKind::Completion ? "completion"
                                                              : "internal";
        out << buf << ',' << kind << ',' << ev.job_id << '\n';
    }
}

} // namespace fairsched
