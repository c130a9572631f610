#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "fairsched/workload.hpp"

namespace fairsched {

/// Event-coincidence epsilon: instants closer than this are the same event.
inline constexpr double kTimeEps = 1e-9;
/// Remaining work below this counts as complete (float drift guard).
inline constexpr double kWorkEps = 1e-12;
/// Slack allowed on the allocation sum.
inline constexpr double kAllocEps = 1e-9;

/// The schedule function at one instant: fraction of the machine assigned to
/// each served job. Entries must be pending jobs, fractions >= 0, sum <= 1.
class AllocationVector {
public:
    struct Entry {
        JobId job;
        double fraction;
    };

    void clear() noexcept { entries_.clear(); }
    void add(JobId job, double fraction) { entries_.push_back({job, fraction}); }
    const std::vector<Entry>& entries() const noexcept { return entries_; }
    bool empty() const noexcept { return entries_.empty(); }

    double sum() const noexcept {
        double s = 0.0;
        for (const Entry& e : entries_) s += e.fraction;
        return s;
    }

private:
    std::vector<Entry> entries_;
};

struct CompletionRecord {
    JobId job_id = 0;
    double completion = 0.0;
    double sojourn = 0.0; // completion - release
    double served = 0.0;  // integrated service, equals the true size at completion
};

enum class EventKind { Arrival, Completion, Internal };

struct EngineEvent {
    double time = 0.0;
    EventKind kind = EventKind::Arrival;
    JobId job_id = 0;
    std::vector<AllocationVector::Entry> allocation; // snapshot after the event
};

struct SimulationResult {
    std::vector<CompletionRecord> records;  // ordered by job id
    std::vector<JobId> completion_sequence; // ordered by (completion, id)
    std::uint64_t event_count = 0;
    double wall_time = 0.0; // seconds spent simulating
    /// Max |allocation sum - 1| seen at an instant with pending jobs; zero
    /// for a work-conserving policy.
    double max_alloc_sum_deviation = 0.0;
    std::optional<std::vector<EngineEvent>> events; // present when logging enabled

    const CompletionRecord& record_of(JobId id) const;
};

/// Behavioral contract every scheduling policy implements. The engine calls
/// the notify hooks at event instants in non-decreasing time order and
/// re-queries the allocation after each one; between queries the allocation
/// is held constant, which is exact for every policy in this toolkit.
class Scheduler {
public:
    virtual ~Scheduler() = default;

    virtual void notify_arrival(const JobSpec& job, double t) = 0;
    virtual void notify_real_completion(JobId id, double t) = 0;

    /// Write the current allocation over pending jobs into `out` (cleared
    /// first). May advance internal bookkeeping to t.
    virtual void allocation(double t, AllocationVector& out) = 0;

    /// Earliest future instant at which this scheduler's allocation changes
    /// of its own accord (e.g. a simulated-schedule completion), or nothing.
    virtual std::optional<double> next_internal_event(double t) = 0;

    virtual std::string_view name() const = 0;
};

struct RunOptions {
    bool log_events = false;
    /// Test hook: admit coincident arrivals before processing completions
    /// instead of the documented completions-first order.
    bool arrivals_before_completions = false;
};

/// Run the workload to completion on one preemptive unit-rate machine.
/// Remaining work is tracked against true sizes; estimates only influence
/// the scheduler's decisions. The scheduler must be a fresh instance.
SimulationResult run(const Workload& workload, Scheduler& scheduler, const RunOptions& options = {});

/// Chronological event log of a run; requires RunOptions::log_events.
const std::vector<EngineEvent>& replay_events(const SimulationResult& result);

/// CSV `time,kind,job_id`.
void write_event_log(const std::vector<EngineEvent>& events, std::ostream& out);

} // namespace fairsched
