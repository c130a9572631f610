#pragma once

#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "fairsched/engine.hpp"
#include "fairsched/virtual_clock.hpp"
#include "fairsched/workload.hpp"

namespace fairsched {

/// An ordering of job ids consistent with their completion times under some
/// schedule.
using CompletionSequence = std::vector<JobId>;

/// Ids ordered by the reference scheduler's completion times (ties by id).
/// Runs the reference to completion on the workload.
CompletionSequence completion_sequence_of(const Workload& workload, Scheduler& reference);

/// Processor sharing: the machine split equally among pending jobs.
class PsScheduler final : public Scheduler {
public:
    void notify_arrival(const JobSpec& job, double t) override;
    void notify_real_completion(JobId id, double t) override;
    void allocation(double t, AllocationVector& out) override;
    std::optional<double> next_internal_event(double) override { return std::nullopt; }
    std::string_view name() const override { return "ps"; }

private:
    std::set<JobId> pending_;
};

/// Discriminatory processor sharing: weight-proportional split.
class DpsScheduler final : public Scheduler {
public:
    void notify_arrival(const JobSpec& job, double t) override;
    void notify_real_completion(JobId id, double t) override;
    void allocation(double t, AllocationVector& out) override;
    std::optional<double> next_internal_event(double) override { return std::nullopt; }
    std::string_view name() const override { return "dps"; }

private:
    std::map<JobId, double> pending_; // id -> weight
};

/// Full machine to the pending job with minimum (release, id).
class FifoScheduler final : public Scheduler {
public:
    void notify_arrival(const JobSpec& job, double t) override;
    void notify_real_completion(JobId id, double t) override;
    void allocation(double t, AllocationVector& out) override;
    std::optional<double> next_internal_event(double) override { return std::nullopt; }
    std::string_view name() const override { return "fifo"; }

private:
    std::deque<JobId> queue_;
};

/// Shortest remaining processing time, preemptive. With use_estimates the
/// remaining work is tracked against the estimate and may go negative; an
/// underestimated job then keeps the minimum and blocks the machine until it
/// really completes, which is the degradation this toolkit studies.
class SrptScheduler final : public Scheduler {
public:
    explicit SrptScheduler(bool use_estimates) : use_estimates_(use_estimates) {}

    void notify_arrival(const JobSpec& job, double t) override;
    void notify_real_completion(JobId id, double t) override;
    void allocation(double t, AllocationVector& out) override;
    std::optional<double> next_internal_event(double) override { return std::nullopt; }
    std::string_view name() const override { return use_estimates_ ? "srpte" : "srpt"; }

private:
    struct Key {
        double remaining;
        double release;
        JobId id;
        bool operator<(const Key& o) const {
            if (remaining != o.remaining) return remaining < o.remaining;
            if (release != o.release) return release < o.release;
            return id < o.id;
        }
    };
    struct Info {
        double base; // size or estimate
        double attained;
        double release;
    };

    void settle(double t);

    bool use_estimates_;
    double last_t_ = 0.0;
    std::optional<JobId> running_;
    std::set<Key> waiting_; // remaining frozen while unserved
    std::unordered_map<JobId, Info> jobs_;
};

/// Serial preemptive execution in a fixed completion sequence: the whole
/// machine goes to the first pending job in the sequence.
class PriScheduler final : public Scheduler {
public:
    explicit PriScheduler(CompletionSequence sequence, std::string label = "pri");

    void notify_arrival(const JobSpec& job, double t) override;
    void notify_real_completion(JobId id, double t) override;
    void allocation(double t, AllocationVector& out) override;
    std::optional<double> next_internal_event(double) override { return std::nullopt; }
    std::string_view name() const override { return label_; }

private:
    std::string label_;
    std::vector<JobId> by_rank_;
    std::unordered_map<JobId, std::size_t> rank_;
    std::set<std::size_t> pending_ranks_;
};

/// Fair sojourn protocol: simulates PS over estimated sizes with a weights-1
/// virtual clock and gives the whole machine to the pending job with the
/// minimum finish tag, tags already passed included (late jobs run serially
/// in tag order). The virtual simulation is driven by arrivals only.
class FspScheduler final : public Scheduler {
public:
    void notify_arrival(const JobSpec& job, double t) override;
    void notify_real_completion(JobId id, double t) override;
    void allocation(double t, AllocationVector& out) override;
    std::optional<double> next_internal_event(double) override { return std::nullopt; }
    std::string_view name() const override { return "fsp"; }

private:
    struct Entry {
        double tag;
        double release;
        JobId id;
    };
    struct Greater {
        bool operator()(const Entry& a, const Entry& b) const {
            if (a.tag != b.tag) return a.tag > b.tag;
            if (a.release != b.release) return a.release > b.release;
            return a.id > b.id;
        }
    };

    VirtualClock clock_;
    std::priority_queue<Entry, std::vector<Entry>, Greater> heap_;
    std::unordered_set<JobId> completed_;
};

/// Practical size-based scheduling with inexact sizes: simulates DPS over
/// estimates and weights, serves pending jobs one at a time in simulated
/// completion order, and when jobs turn late (virtually complete but really
/// pending, which only estimation errors can cause) shares the machine among
/// the late set in proportion to weights. Jobs that really complete early
/// linger in the virtual simulation until their tags pass, keeping it a
/// faithful DPS simulation of the submitted workload.
class PsbsScheduler final : public Scheduler {
public:
    void notify_arrival(const JobSpec& job, double t) override;
    void notify_real_completion(JobId id, double t) override;
    void allocation(double t, AllocationVector& out) override;
    std::optional<double> next_internal_event(double t) override;
    std::string_view name() const override { return "psbs"; }

    bool late_was_ever_nonempty() const noexcept { return late_seen_; }
    std::size_t late_count() const noexcept { return late_.size(); }
    const VirtualClock& clock() const noexcept { return clock_; }

private:
    struct Entry {
        double tag;
        double release;
        JobId id;
    };
    struct Greater {
        bool operator()(const Entry& a, const Entry& b) const {
            if (a.tag != b.tag) return a.tag > b.tag;
            if (a.release != b.release) return a.release > b.release;
            return a.id > b.id;
        }
    };

    void advance(double t);

    VirtualClock clock_;
    std::priority_queue<Entry, std::vector<Entry>, Greater> heap_;
    std::unordered_set<JobId> completed_;
    std::unordered_map<JobId, double> weights_;
    std::map<JobId, double> late_; // id -> weight, really pending, virtually done
    bool late_seen_ = false;
};

/// Policy factory by registered name: ps, dps, fifo, srpt, srpte, fsp, psbs,
/// or pri:<reference-name> (which pre-runs the reference on the workload to
/// obtain its completion sequence). Unknown names throw ParamError.
std::unique_ptr<Scheduler> make_scheduler(std::string_view name, const Workload& workload);

/// Base policy names accepted by make_scheduler (pri:<name> composes them).
const std::vector<std::string>& scheduler_names();

} // namespace fairsched
