"""Spare-pool sizing for migration.

A machine is unavailable (migrating or rebooting) with probability
v = (M+D)/(mtbf+M+D) and available with probability u = mtbf/(mtbf+M+D). An
execution on N machines with m spares survives as long as at most m machines
are simultaneously unavailable, so the success probability is the binomial
CDF P[X <= m] with X ~ Binomial(N, v), taken over all N machines.

The CDF is evaluated without ever forming a binomial coefficient: the anchor
term (the largest in the summation range) is built as an exact running
product with power-of-two renormalization, and neighbours follow the ratio
recurrence t_{k+1}/t_k = (N-k)/(k+1) * v/u outward from the anchor until
they stop mattering. This keeps the absolute error below 1e-12 up to
N = 10**6; naive factorials overflow around N = 170 and lgamma differences
lose ~1e-9 at that scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InfeasibleSpareCountError, ParameterError

_LN2 = math.log(2.0)
# terms below this fraction of the accumulated sum cannot move the result at 1e-12
_TERM_CUTOFF = 1e-17


@dataclass(frozen=True)
class AvailabilityParams:
    """Per-machine availability (u) and unavailability (v); u + v = 1."""

    available: float
    busy: float

    def __post_init__(self):
        if not 0.0 <= self.available <= 1.0 or not 0.0 <= self.busy <= 1.0:
            raise ParameterError("available and busy must be probabilities")
        if abs(self.available + self.busy - 1.0) > 1e-12:
            raise ParameterError(f"available + busy must equal 1, got {self.available + self.busy}")

    @classmethod
    def from_busy(cls, busy: float) -> "AvailabilityParams":
        return cls(available=1.0 - busy, busy=busy)


@dataclass(frozen=True)
class SpareSizing:
    """Result of a minimal-spare search."""

    spares: int
    achieved_success: float
    epsilon: float
    method: str


def availability_params(mtbf: float, migration: float, downtime: float) -> AvailabilityParams:
    """u = mtbf/(mtbf+M+D), v = (M+D)/(mtbf+M+D) for migration time M and reboot time D."""
    if not mtbf > 0:
        raise ParameterError(f"mtbf must be positive, got {mtbf}")
    if migration < 0 or downtime < 0:
        raise ParameterError("migration and downtime must be nonnegative")
    total = mtbf + migration + downtime
    return AvailabilityParams(available=mtbf / total, busy=(migration + downtime) / total)


def _check_n_m(n_machines: int, spares: int) -> tuple[int, int]:
    if n_machines != int(n_machines) or n_machines < 1:
        raise ParameterError(f"n_machines must be a positive integer, got {n_machines}")
    if spares != int(spares) or not 0 <= spares <= n_machines:
        raise ParameterError(f"spares must be an integer in [0, {n_machines}], got {spares}")
    return int(n_machines), int(spares)


def success_probability(n_machines: int, spares: int, params: AvailabilityParams) -> float:
    """P[at most ``spares`` of ``n_machines`` machines are simultaneously unavailable]."""
    n, m = _check_n_m(n_machines, spares)
    v = params.busy
    u = params.available
    if v <= 0.0:
        return 1.0
    if u <= 0.0:
        return 1.0 if m == n else 0.0
    if m == n:
        return 1.0

    k0 = min(m, int((n + 1) * v))
    # anchor pmf term t_{k0} = C(n,k0) v^k0 u^(n-k0), exponent carried separately
    mant, ex2 = 1.0, 0
    for i in range(1, k0 + 1):
        mant *= ((n - k0 + i) / i) * v
        mant, e = math.frexp(mant)
        ex2 += e
    log_t0 = (math.log(mant) if k0 else 0.0) + ex2 * _LN2 + (n - k0) * math.log1p(-v)

    terms = [1.0]
    acc = 1.0
    r, k = 1.0, k0
    while k > 0:
        r *= (k / (n - k + 1.0)) * (u / v)
        if r < _TERM_CUTOFF * acc:
            break
        terms.append(r)
        acc += r
        k -= 1
    r, k = 1.0, k0
    while k < m:
        r *= ((n - k) / (k + 1.0)) * (v / u)
        if r < _TERM_CUTOFF * acc:
            break
        terms.append(r)
        acc += r
        k += 1
    return min(1.0, math.exp(log_t0 + math.log(math.fsum(terms))))


def success_probability_lower_bound(n_machines: int, spares: int, params: AvailabilityParams) -> float:
    """Underestimate of the success probability using (N/k)**k in place of C(N,k).

    (N/k)**k <= C(N,k) term by term (the k = 0 factor is taken as 1), so the
    result never exceeds :func:`success_probability`. For any positive ``busy``
    the full sum over k = 0..N stays strictly below 1, which is why minimal
    sizing under this bound can be infeasible for very small epsilon.
    """
    n, m = _check_n_m(n_machines, spares)
    v = params.busy
    u = params.available
    if v <= 0.0:
        return 1.0
    if u <= 0.0:
        return 1.0 if m == n else 0.0

    log_u, log_v = math.log1p(-v) if v < 1.0 else -math.inf, math.log(v)
    terms = [math.exp(n * log_u)]
    acc = terms[0]
    # bound terms peak near k = N v / (e u); past the peak they decay geometrically
    peak = n * v / (math.e * u)
    for k in range(1, m + 1):
        t = math.exp(k * math.log(n / k) + (n - k) * log_u + k * log_v)
        terms.append(t)
        acc += t
        if k > peak and t < _TERM_CUTOFF * acc:
            break
    return min(1.0, math.fsum(terms))


_SUCCESS_FN = {
    "exact": success_probability,
    "lower-bound": success_probability_lower_bound,
}


def min_spares(n_machines: int, params: AvailabilityParams, epsilon: float, method: str = "exact") -> SpareSizing:
    """Smallest m whose success probability reaches 1 - epsilon under ``method``.

    Searches the monotone predicate success(m) >= 1-epsilon by expanding
    geometrically from ceil(N v) and bisecting, so only O(log N) CDF
    evaluations are needed. Raises :class:`InfeasibleSpareCountError` when
    even m = N falls short (lower-bound method only).
    """
    n, _ = _check_n_m(n_machines, 0)
    if not 0.0 < epsilon < 1.0:
        raise ParameterError(f"epsilon must be in (0, 1), got {epsilon}")
    if method not in _SUCCESS_FN:
        raise ParameterError(f"method must be one of {sorted(_SUCCESS_FN)}, got {method!r}")
    success = _SUCCESS_FN[method]
    target = 1.0 - epsilon

    s0 = success(n, 0, params)
    if s0 >= target:
        return SpareSizing(spares=0, achieved_success=s0, epsilon=epsilon, method=method)

    hi = max(1, min(n, math.ceil(n * params.busy)))
    s_hi = success(n, hi, params)
    while s_hi < target and hi < n:
        hi = min(n, 2 * hi)
        s_hi = success(n, hi, params)
    if s_hi < target:
        raise InfeasibleSpareCountError(
            f"no spare count up to N={n} reaches success {target} under the {method} method"
        )

    lo = 0  # invariant: success(lo) < target <= success(hi)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        s_mid = success(n, mid, params)
        if s_mid >= target:
            hi, s_hi = mid, s_mid
        else:
            lo = mid
    return SpareSizing(spares=hi, achieved_success=s_hi, epsilon=epsilon, method=method)
