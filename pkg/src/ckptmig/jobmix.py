"""Steady-state job-size mix on a machine with N = 2**Z processors.

A job is sequential with probability p1, otherwise it uses 2**j processors
with j drawn uniformly from 1..Z. With every processor busy, the expected
number of jobs K and the per-size expected counts beta_j follow from

    K = sum_j beta_j,   beta_j = alpha_j * K,   N = sum_j 2**j beta_j,

which gives the closed form N/K = p1 + (1-p1) * (2N-2) / Z. The beta_j are
expectations and deliberately kept as reals.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ParameterError

DEFAULT_P_SEQUENTIAL = 0.25


@dataclass(frozen=True)
class JobMix:
    log2_machines: int
    p_sequential: float
    alpha: tuple[float, ...]
    expected_jobs: float
    beta: tuple[float, ...]

    @property
    def machines(self) -> int:
        return 2**self.log2_machines


def solve_job_mix(log2_machines: int, p_sequential: float = DEFAULT_P_SEQUENTIAL) -> JobMix:
    """Solve the mix for Z = log2_machines and sequential-job probability p1.

    Z = 0 is only meaningful when every job is sequential (p1 = 1); otherwise
    there are no parallel sizes to draw from.
    """
    if log2_machines != int(log2_machines) or log2_machines < 0:
        raise ParameterError(f"log2_machines must be a nonnegative integer, got {log2_machines}")
    z = int(log2_machines)
    if not 0.0 <= p_sequential <= 1.0:
        raise ParameterError(f"p_sequential must be in [0, 1], got {p_sequential}")
    if z == 0 and p_sequential < 1.0:
        raise ParameterError("log2_machines = 0 requires p_sequential = 1 (no parallel sizes exist)")

    n = 2**z
    if z == 0:
        alpha = (1.0,)
    else:
        alpha = (p_sequential,) + ((1.0 - p_sequential) / z,) * z
    n_over_k = p_sequential + ((1.0 - p_sequential) * (2 * n - 2) / z if z else 0.0)
    k = n / n_over_k
    beta = tuple(a * k for a in alpha)
    return JobMix(log2_machines=z, p_sequential=p_sequential, alpha=alpha, expected_jobs=k, beta=beta)
