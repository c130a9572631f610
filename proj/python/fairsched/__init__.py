"""Preemptive single-machine scheduling simulator.

Everything lives in the compiled core; this package re-exports it.
"""

from ._fairsched import (
    CompletionRecord,
    DominanceViolation,
    Job,
    SimulationResult,
    SweepGrid,
    SweepRow,
    WeightModel,
    Workload,
    dominance_violations,
    generate,
    makespan,
    mean_sojourn,
    normalized_mst,
    pearson_correlation,
    pearson_correlation_log,
    policies,
    read_trace,
    run,
    run_sweep,
    step_simulate,
    write_trace,
)

__all__ = [
    "CompletionRecord",
    "DominanceViolation",
    "Job",
    "SimulationResult",
    "SweepGrid",
    "SweepRow",
    "WeightModel",
    "Workload",
    "dominance_violations",
    "generate",
    "makespan",
    "mean_sojourn",
    "normalized_mst",
    "pearson_correlation",
    "pearson_correlation_log",
    "policies",
    "read_trace",
    "run",
    "run_sweep",
    "step_simulate",
    "write_trace",
]
