"""Checkpointing vs migration on large failure-prone clusters.

Analytic throughput and waste models with a seeded Monte Carlo simulator
as an independent cross-check, plus a CLI that regenerates the scenario
tables. All times are minutes.
"""

from .errors import InfeasibleSpareCountError, ParameterError, UndefinedImprovementError
from .failures import (
    MINUTES_PER_DAY,
    MINUTES_PER_MONTH,
    MINUTES_PER_WEEK,
    MINUTES_PER_YEAR,
    Exponential,
    Weibull,
    group_min_model,
    group_mtbf,
    group_mtbf_exponential,
    group_mtbf_weibull_min,
    group_mtbf_weibull_shape_scaled,
    replication_streams,
    sample_failure_time,
    sample_failure_times,
)
from .jobmix import DEFAULT_P_SEQUENTIAL, JobMix, solve_job_mix
from .periodic import (
    FeasibilityThreshold,
    min_waste,
    min_waste_unclamped,
    mtbf_feasibility_threshold,
    optimal_period,
    waste_extended,
    waste_young,
    yield_independent,
    yield_parallel,
)
from .presets import GRID_EPSILON, GRID_MACHINES, GRID_MTBF_MINUTES, load_presets
from .simulator import Migration, Periodic, PredictedCheckpoint, SimConfig, SimResult, simulate
from .spares import (
    AvailabilityParams,
    SpareSizing,
    availability_params,
    min_spares,
    success_probability,
    success_probability_lower_bound,
)
from .throughput import (
    CostParams,
    ThroughputReport,
    compare,
    improvement_pct,
    throughput_checkpoint_parallel,
    throughput_checkpoint_parallel_exponential,
    throughput_checkpoint_sequential,
    throughput_migration_parallel,
    throughput_migration_sequential,
)

__all__ = [name for name in dir() if not name.startswith("_")]
