"""Closed-form throughput models for checkpointing and migration.

Throughput is measured in machine-equivalents: the expected number of
machines doing useful work at any instant. Yield is throughput / N.

With perfect failure prediction, a checkpointing machine loses C+D+R minutes
per failure, and a migrating job loses only M minutes but the platform holds
m machines back as spares. Parallel jobs of 2**k processors fail at the
group rate (group MTBF from :mod:`ckptmig.failures`) and pay the outage on
all 2**k processors at once.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ParameterError, UndefinedImprovementError
from .failures import Exponential, FailureModel, group_mtbf
from .jobmix import JobMix


@dataclass(frozen=True)
class CostParams:
    """Per-event costs, in minutes: checkpoint save C, recovery R, reboot D, migration M."""

    checkpoint: float
    recovery: float
    downtime: float
    migration: float = 0.0

    def __post_init__(self):
        for name in ("checkpoint", "recovery", "downtime", "migration"):
            if getattr(self, name) < 0:
                raise ParameterError(f"{name} must be nonnegative")

    @property
    def outage(self) -> float:
        """Unavailability per predicted failure under checkpointing: C + D + R."""
        return self.checkpoint + self.downtime + self.recovery

    @property
    def migration_sensible(self) -> bool:
        """Migration only beats using the failed machine as its own spare when M < C+D+R."""
        return self.migration < self.outage


@dataclass(frozen=True)
class ThroughputReport:
    rho_cp: float
    rho_m: float
    spares: int
    improvement_pct: float


def _check_platform(n_machines: int, mtbf: float) -> int:
    if n_machines != int(n_machines) or n_machines < 1:
        raise ParameterError(f"n_machines must be a positive integer, got {n_machines}")
    if not mtbf > 0:
        raise ParameterError(f"mtbf must be positive, got {mtbf}")
    return int(n_machines)


def throughput_checkpoint_sequential(n_machines: int, mtbf: float, costs: CostParams) -> float:
    """Sequential jobs, predicted failures, checkpoint just in time: N * mtbf/(mtbf+C+D+R)."""
    n = _check_platform(n_machines, mtbf)
    return n * mtbf / (mtbf + costs.outage)


def throughput_migration_sequential(n_machines: int, spares: int, mtbf: float, migration: float) -> float:
    """Sequential jobs migrating off predicted failures: (N-m) * mtbf/(mtbf+M)."""
    n = _check_platform(n_machines, mtbf)
    if spares != int(spares) or not 0 <= spares <= n:
        raise ParameterError(f"spares must be an integer in [0, {n}], got {spares}")
    if migration < 0:
        raise ParameterError("migration must be nonnegative")
    return (n - spares) * mtbf / (mtbf + migration)


def throughput_checkpoint_parallel(
    mix: JobMix,
    model: FailureModel,
    costs: CostParams,
    weibull_group: str = "shape-scaled",
) -> float:
    """Job-mix checkpointing throughput: sum_k beta_k 2**k mu_k/(mu_k+C+D+R)."""
    outage = costs.outage
    total = 0.0
    for k, beta_k in enumerate(mix.beta):
        mu_k = group_mtbf(model, k, weibull_group)
        total += beta_k * 2.0**k * mu_k / (mu_k + outage)
    return total


def throughput_checkpoint_parallel_exponential(mix: JobMix, mtbf: float, costs: CostParams) -> float:
    """Exponential specialization written on the per-machine mean directly.

    Algebraically identical to the generic form with mu_k = mtbf/2**k; kept as
    a separate code path and cross-checked in tests.
    """
    if not mtbf > 0:
        raise ParameterError(f"mtbf must be positive, got {mtbf}")
    outage = costs.outage
    total = 0.0
    for k, beta_k in enumerate(mix.beta):
        total += beta_k * 2.0**k * mtbf / (mtbf + 2.0**k * outage)
    return total


def throughput_migration_parallel(mix: JobMix, mtbf: float, migration: float, spares: int) -> float:
    """Job-mix migration throughput: (sum_k beta_k 2**k mtbf/(mtbf+2**k M)) * (N-m)/N."""
    if not mtbf > 0:
        raise ParameterError(f"mtbf must be positive, got {mtbf}")
    if migration < 0:
        raise ParameterError("migration must be nonnegative")
    n = mix.machines
    if spares != int(spares) or not 0 <= spares <= n:
        raise ParameterError(f"spares must be an integer in [0, {n}], got {spares}")
    total = 0.0
    for k, beta_k in enumerate(mix.beta):
        total += beta_k * 2.0**k * mtbf / (mtbf + 2.0**k * migration)
    return total * (n - spares) / n


def improvement_pct(rho_m: float, rho_cp: float) -> float:
    """Relative gain of migration over checkpointing, in percent."""
    if rho_cp <= 0:
        raise UndefinedImprovementError(f"improvement is undefined for baseline throughput {rho_cp}")
    return 100.0 * (rho_m - rho_cp) / rho_cp


def compare(rho_cp: float, rho_m: float, spares: int) -> ThroughputReport:
    return ThroughputReport(
        rho_cp=rho_cp,
        rho_m=rho_m,
        spares=spares,
        improvement_pct=improvement_pct(rho_m, rho_cp),
    )


def exponential_model(mtbf: float) -> Exponential:
    """Convenience constructor matching the CLI's default failure model."""
    return Exponential(mtbf)
