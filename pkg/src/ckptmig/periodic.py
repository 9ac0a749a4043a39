"""Periodic checkpointing without failure prediction.

With period T, checkpoint cost C, and mean time between failures mu, the
wasted fraction of time is

    W = C/T + T/(2 mu)                    (no recovery accounting)
    W = C/T + (T/2 + R + D)/mu            (recovery-aware)

Both are minimized at T = sqrt(2 C mu); the recovery-aware minimum is
W_min = (R+D)/mu + sqrt(2C/mu). W_min exceeds 1 once mu drops below a
threshold, at which point the job stops progressing; the reported waste is
always min(W_min, 1). Platform yield follows by weighting (1 - W_min) over
machines, per job-size group for a parallel mix.
"""

from __future__ import annotations

import math
from typing import NamedTuple

from .errors import ParameterError
from .failures import Exponential, FailureModel, group_mtbf
from .jobmix import JobMix


def _check(C: float, mu: float, R: float = 0.0, D: float = 0.0) -> None:
    if C < 0 or R < 0 or D < 0:
        raise ParameterError("costs must be nonnegative")
    if not mu > 0:
        raise ParameterError(f"mtbf must be positive, got {mu}")


def waste_young(ckpt: float, period: float, mtbf: float) -> float:
    """Wasted fraction C/T + T/(2 mu)."""
    _check(ckpt, mtbf)
    if not period > 0:
        raise ParameterError(f"period must be positive, got {period}")
    return ckpt / period + period / (2.0 * mtbf)


def optimal_period(ckpt: float, mtbf: float) -> float:
    """Waste-minimizing period sqrt(2 C mu); 0 when checkpoints are free."""
    _check(ckpt, mtbf)
    return math.sqrt(2.0 * ckpt * mtbf)


def waste_extended(ckpt: float, period: float, mtbf: float, recovery: float, downtime: float) -> float:
    """Recovery-aware wasted fraction C/T + (T/2 + R + D)/mu."""
    _check(ckpt, mtbf, recovery, downtime)
    if not period > 0:
        raise ParameterError(f"period must be positive, got {period}")
    return ckpt / period + (period / 2.0 + recovery + downtime) / mtbf


def min_waste_unclamped(ckpt: float, mtbf: float, recovery: float, downtime: float) -> float:
    """Minimum of the recovery-aware waste over the period: (R+D)/mu + sqrt(2C/mu)."""
    _check(ckpt, mtbf, recovery, downtime)
    return (recovery + downtime) / mtbf + math.sqrt(2.0 * ckpt / mtbf)


def min_waste(ckpt: float, mtbf: float, recovery: float, downtime: float) -> float:
    """Minimum waste clamped at 1 (a job wasting everything makes no progress)."""
    return min(1.0, min_waste_unclamped(ckpt, mtbf, recovery, downtime))


class FeasibilityThreshold(NamedTuple):
    nu_b: float
    mtbf_min: float


def mtbf_feasibility_threshold(ckpt: float, recovery: float, downtime: float) -> FeasibilityThreshold:
    """Smallest MTBF at which the job still progresses (min waste <= 1).

    In nu = 1/sqrt(mu), the condition W_min <= 1 reads
    nu**2 (R+D) + nu sqrt(2C) - 1 <= 0, so the threshold is
    nu_b = (-sqrt(2C) + sqrt(2C + 4(R+D))) / (2(R+D)) and mtbf_min = 1/nu_b**2.
    When R+D = 0 the condition degenerates to sqrt(2C/mu) <= 1, i.e.
    mtbf_min = 2C (0 when checkpoints are free too).
    """
    _check(ckpt, 1.0, recovery, downtime)
    rd = recovery + downtime
    if ckpt == 0.0 and rd == 0.0:
        return FeasibilityThreshold(nu_b=math.inf, mtbf_min=0.0)
    # rationalized root of rd*nu**2 + sqrt(2C)*nu - 1 = 0; stable as rd -> 0
    nu_b = 2.0 / (math.sqrt(2.0 * ckpt) + math.sqrt(2.0 * ckpt + 4.0 * rd))
    return FeasibilityThreshold(nu_b=nu_b, mtbf_min=1.0 / nu_b**2)


def yield_independent(n_machines: int, ckpt: float, mtbf: float, recovery: float, downtime: float) -> float:
    """Platform throughput (1 - W_min) * N for N independent sequential jobs."""
    if n_machines != int(n_machines) or n_machines < 1:
        raise ParameterError(f"n_machines must be a positive integer, got {n_machines}")
    return (1.0 - min_waste(ckpt, mtbf, recovery, downtime)) * int(n_machines)


def yield_parallel(
    mix: JobMix,
    ckpt: float,
    mtbf: float,
    recovery: float,
    downtime: float,
    model: FailureModel | None = None,
    weibull_group: str = "shape-scaled",
) -> float:
    """Platform throughput sum_k (1 - W_min(k)) 2**k beta_k for a job mix.

    W_min(k) uses the group MTBF of 2**k machines and is clamped at 1 per
    size class, so stalled job sizes contribute zero rather than negative
    work. Defaults to exponential failures with the given per-machine mtbf.
    """
    _check(ckpt, mtbf, recovery, downtime)
    if model is None:
        model = Exponential(mtbf)
    total = 0.0
    for k, beta_k in enumerate(mix.beta):
        mu_k = group_mtbf(model, k, weibull_group)
        total += (1.0 - min_waste(ckpt, mu_k, recovery, downtime)) * 2.0**k * beta_k
    return total
