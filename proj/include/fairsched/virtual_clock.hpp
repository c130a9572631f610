#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <queue>
#include <set>
#include <span>
#include <unordered_map>
#include <vector>

#include "fairsched/workload.hpp"

namespace fairsched {

/// A job leaving the simulated (virtual) schedule: who and when, in real time.
struct VirtualCompletion {
    JobId id = 0;
    double time = 0.0;
};

/// Weighted virtual-time tracker simulating fluid DPS over estimated sizes.
///
/// Virtual time v advances at rate 1 / (sum of weights of virtually-pending
/// jobs) and freezes when none are pending. A job arriving at real time t is
/// assigned the immutable finish tag v(t) + estimate/weight and virtually
/// completes when v reaches the tag. Because tags never change, the relative
/// completion order of any two jobs is fixed at arrival, which is what makes
/// the serial policies built on top of this clock applicable online. All
/// queue operations are O(log n).
///
/// Single-owner mutable state: one clock per simulation, no concurrent use.
class VirtualClock {
public:
    VirtualClock();

    double now() const noexcept { return last_real_time_; }
    double virtual_now() const noexcept { return v_now_; }
    double active_weight() const noexcept { return active_weight_; }
    std::size_t virtually_pending() const noexcept { return queue_.size(); }

    /// Advance real time to t, popping every virtual completion reached on
    /// the way at its exact real instant (active_weight changes there, so v
    /// integrates piecewise-linearly). Throws ContractViolation if t is in
    /// the past.
    std::vector<VirtualCompletion> advance_to(double t);

    /// Register an arrival and return its finish tag. The clock must already
    /// be advanced to t. Duplicate ids are a contract violation.
    ///
    /// Tags that coincide in exact arithmetic can come out a few ulps apart
    /// here because they are computed along different paths (v accumulates).
    /// A new tag within rounding distance of an existing one is snapped onto
    /// it, so genuine ties compare equal and the documented (release, id)
    /// tie-break decides the order.
    double on_arrival(double t, JobId id, double estimate, double weight);

    /// Real instant of the next virtual completion assuming no further
    /// arrivals: now + (min_tag - v_now) * active_weight. Empty queue gives
    /// nothing. The clock must already be advanced to `now`.
    std::optional<VirtualCompletion> next_virtual_completion(double now) const;

    /// Of the given jobs, the one completing first in the simulated schedule:
    /// argmin finish tag, ties by (release, id). Ids must have been added.
    JobId peek_order(std::span<const JobId> ids) const;

    double finish_tag(JobId id) const;

    /// Total tag-queue comparisons performed so far (diagnostic; backs the
    /// O(n log n) growth check).
    std::uint64_t comparisons() const noexcept { return *comparisons_; }

private:
    struct Entry {
        double tag;
        double release;
        JobId id;
    };
    struct CountingGreater {
        std::shared_ptr<std::uint64_t> counter;
        bool operator()(const Entry& a, const Entry& b) const {
            ++*counter;
            if (a.tag != b.tag) return a.tag > b.tag;
            if (a.release != b.release) return a.release > b.release;
            return a.id > b.id;
        }
    };
    struct JobInfo {
        double tag;
        double release;
        double weight;
    };

    void pop_completion(double real_time, std::vector<VirtualCompletion>& out);

    double v_now_ = 0.0;
    double last_real_time_ = 0.0;
    double active_weight_ = 0.0;
    std::shared_ptr<std::uint64_t> comparisons_;
    std::priority_queue<Entry, std::vector<Entry>, CountingGreater> queue_;
    std::unordered_map<JobId, JobInfo> jobs_;
    std::set<double> tag_pool_; // distinct tag values ever assigned, for snapping
};

} // namespace fairsched
