"""Failure-time distributions and group MTBF for jobs spanning 2**k machines.

All times are minutes. A "group" is the set of machines running one parallel
job; the group fails as soon as any member fails, so its time between
failures is the minimum of the members' failure times.

Two conventions are provided for the Weibull group MTBF, and they disagree
for every group size > 1:

* ``group_mtbf_weibull_shape_scaled`` treats the pooled group as a single
  Weibull whose shape parameter is scaled by the group size,
  ``scale * gamma(1 + 1/(shape * 2**k))``.
* ``group_mtbf_weibull_min`` is the mean of the minimum of 2**k independent
  draws, ``scale * (2**k)**(-1/shape) * gamma(1 + 1/shape)``.

At shape=1, k=1 the first gives 0.886*scale while only the second reduces to
the exponential halving rule (0.5*scale). Downstream consumers pick via the
``weibull_group`` argument of :func:`group_mtbf`; the default is
``"shape-scaled"``. The simulator always samples physical minima, which
follow the exact-minimum law.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError

# Unit conversions used everywhere, including CLI --mtbf suffixes.
# A month is 30 days and a year is 12 such months.
MINUTES_PER_DAY = 1440.0
MINUTES_PER_WEEK = 10080.0
MINUTES_PER_MONTH = 43200.0
MINUTES_PER_YEAR = 518400.0

WEIBULL_GROUP_CONVENTIONS = ("shape-scaled", "exact-min")


@dataclass(frozen=True)
class Exponential:
    """Exponential failure times with the given mean, in minutes."""

    mtbf: float

    def __post_init__(self):
        if not self.mtbf > 0:
            raise ParameterError(f"mtbf must be positive, got {self.mtbf}")

    def mean(self) -> float:
        return self.mtbf


@dataclass(frozen=True)
class Weibull:
    """Weibull failure times with scale (minutes) and dimensionless shape."""

    scale: float
    shape: float

    def __post_init__(self):
        if not self.scale > 0:
            raise ParameterError(f"scale must be positive, got {self.scale}")
        if not self.shape > 0:
            raise ParameterError(f"shape must be positive, got {self.shape}")

    def mean(self) -> float:
        return self.scale * math.gamma(1.0 + 1.0 / self.shape)


FailureModel = Exponential | Weibull


def _check_group_log2(group_log2: int) -> int:
    if group_log2 != int(group_log2) or group_log2 < 0:
        raise ParameterError(f"group_log2 must be a nonnegative integer, got {group_log2}")
    return int(group_log2)


def group_mtbf_exponential(mtbf: float, group_log2: int) -> float:
    """MTBF of a group of 2**k machines with exponential failures: mtbf / 2**k."""
    k = _check_group_log2(group_log2)
    if not mtbf > 0:
        raise ParameterError(f"mtbf must be positive, got {mtbf}")
    return mtbf / 2.0**k


def group_mtbf_weibull_shape_scaled(scale: float, shape: float, group_log2: int) -> float:
    """Group MTBF under the shape-scaling convention: scale * gamma(1 + 1/(shape*2**k))."""
    k = _check_group_log2(group_log2)
    if not scale > 0 or not shape > 0:
        raise ParameterError("scale and shape must be positive")
    return scale * math.gamma(1.0 + 1.0 / (shape * 2.0**k))


def group_mtbf_weibull_min(scale: float, shape: float, group_log2: int) -> float:
    """Exact mean of the minimum of 2**k i.i.d. Weibull draws.

    The minimum of n Weibull(scale, shape) variables is Weibull with the same
    shape and scale ``scale * n**(-1/shape)``, hence the mean
    ``scale * (2**k)**(-1/shape) * gamma(1 + 1/shape)``.
    """
    k = _check_group_log2(group_log2)
    if not scale > 0 or not shape > 0:
        raise ParameterError("scale and shape must be positive")
    return scale * (2.0**k) ** (-1.0 / shape) * math.gamma(1.0 + 1.0 / shape)


def group_mtbf(model: FailureModel, group_log2: int, weibull_group: str = "shape-scaled") -> float:
    """Group MTBF for any failure model.

    ``weibull_group`` selects the convention for Weibull models (ignored for
    exponential ones, whose minimum is exactly exponential with mean mtbf/2**k).
    """
    if isinstance(model, Exponential):
        return group_mtbf_exponential(model.mtbf, group_log2)
    if weibull_group == "shape-scaled":
        return group_mtbf_weibull_shape_scaled(model.scale, model.shape, group_log2)
    if weibull_group == "exact-min":
        return group_mtbf_weibull_min(model.scale, model.shape, group_log2)
    raise ParameterError(f"unknown weibull_group {weibull_group!r}, expected one of {WEIBULL_GROUP_CONVENTIONS}")


def group_min_model(model: FailureModel, group_log2: int) -> FailureModel:
    """Distribution of the minimum of 2**k independent draws from ``model``.

    Both families are closed under minima, so the result is a model of the
    same family. Used by the simulator to draw group failure times in one go.
    """
    k = _check_group_log2(group_log2)
    n = 2.0**k
    if isinstance(model, Exponential):
        return Exponential(model.mtbf / n)
    return Weibull(model.scale * n ** (-1.0 / model.shape), model.shape)


def sample_failure_times(model: FailureModel, rng: np.random.Generator, size: int | None = None):
    """Draw failure times from ``model``; a scalar when size is None, else an array."""
    if isinstance(model, Exponential):
        return rng.exponential(model.mtbf, size)
    return model.scale * rng.weibull(model.shape, size)


def sample_failure_time(model: FailureModel, rng: np.random.Generator) -> float:
    """One failure-time draw; reproducible given the stream state."""
    return float(sample_failure_times(model, rng))


def replication_streams(seed: int, replications: int) -> list[np.random.Generator]:
    """Independent generators, one per replication, derived from a single seed."""
    if replications < 1:
        raise ParameterError(f"replications must be >= 1, got {replications}")
    return [np.random.Generator(np.random.PCG64(s)) for s in np.random.SeedSequence(seed).spawn(replications)]
