#pragma once

#include <string_view>

#include "fairsched/engine.hpp"
#include "fairsched/workload.hpp"

namespace fairsched {

struct OracleConfig {
    double dt = 1e-4;
    double max_time = 1e7; // safety horizon
};

/// Fixed-step fluid simulation: every step queries the policy's allocation
/// once, holds the shares for the step, and integrates remaining true work; a
/// job completes inside the step where its remaining work crosses zero, at
/// the linearly interpolated instant, and its share is re-spread over the
/// survivors in proportion to their fractions (work conservation; a no-op
/// for one-job-at-a-time policies, whose freed capacity idles until the next
/// query). Steps are clipped to end exactly at release instants, so arrivals
/// enter at their true times and only in-step allocation staleness
/// contributes error; idle gaps are jumped. Shares the policy
/// implementations with the event-driven engine but none of its event
/// arithmetic, which is the point: agreement between the two is evidence,
/// not tautology.
///
/// First-order in dt by construction. Throws Error when the horizon is
/// exceeded, ParamError on a bad config.
SimulationResult step_simulate(const Workload& workload, Scheduler& scheduler,
                               const OracleConfig& config = {});

/// Convenience: builds the named policy via make_scheduler and runs it.
SimulationResult step_simulate(const Workload& workload, std::string_view policy,
                               const OracleConfig& config = {});

} // namespace fairsched
