import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.stats import binom as scipy_binom

from ckptmig.errors import InfeasibleSpareCountError, ParameterError
from ckptmig.spares import (
    AvailabilityParams,
    availability_params,
    min_spares,
    success_probability,
    success_probability_lower_bound,
)


def cdf_rational(n: int, m: int, busy: Fraction) -> float:
    """Exact-rational binomial CDF, the small-N oracle."""
    avail = 1 - busy
    return float(sum(math.comb(n, k) * busy**k * avail ** (n - k) for k in range(m + 1)))


def cdf_mpmath(n: int, m: int, busy: float) -> float:
    """Arbitrary-precision term-by-term binomial CDF for mid-scale cross-checks."""
    with mpmath.workdps(40):
        v = mpmath.mpf(busy)
        u = 1 - v
        total = mpmath.fsum(mpmath.binomial(n, k) * v**k * u ** (n - k) for k in range(m + 1))
        return float(total)


class TestAvailabilityParams:
    def test_today_values(self):
        p = availability_params(1440.0, 1.0, 2.5)
        assert p.available == pytest.approx(1440.0 / 1443.5, rel=1e-14)
        assert p.busy == pytest.approx(3.5 / 1443.5, rel=1e-14)
        assert p.available + p.busy == pytest.approx(1.0, abs=1e-15)

    def test_no_unavailability(self):
        p = availability_params(77.0, 0.0, 0.0)
        assert (p.available, p.busy) == (1.0, 0.0)

    def test_even_split(self):
        p = availability_params(10.0, 5.0, 5.0)
        assert (p.available, p.busy) == (0.5, 0.5)

    def test_validation(self):
        with pytest.raises(ParameterError):
            availability_params(0.0, 1.0, 1.0)
        with pytest.raises(ParameterError):
            availability_params(10.0, -1.0, 0.0)
        with pytest.raises(ParameterError):
            AvailabilityParams(available=0.9, busy=0.2)


class TestSuccessProbability:
    def test_two_term_example(self):
        p = AvailabilityParams(available=0.9, busy=0.1)
        expected = cdf_rational(4, 1, Fraction(1, 10))
        assert expected == pytest.approx(0.9477, abs=1e-12)
        assert success_probability(4, 1, p) == pytest.approx(expected, abs=1e-13)

    def test_full_support(self):
        p = AvailabilityParams(available=0.3, busy=0.7)
        assert success_probability(17, 17, p) == 1.0

    def test_never_busy(self):
        p = AvailabilityParams(available=1.0, busy=0.0)
        assert success_probability(10**6, 0, p) == 1.0

    def test_always_busy(self):
        p = AvailabilityParams(available=0.0, busy=1.0)
        assert success_probability(5, 4, p) == 0.0
        assert success_probability(5, 5, p) == 1.0

    def test_small_n_exact_rational_grid(self):
        for n in range(1, 21):
            for busy in (Fraction(1, 100), Fraction(1, 10), Fraction(3, 10), Fraction(1, 2)):
                p = AvailabilityParams(available=float(1 - busy), busy=float(busy))
                for m in range(n + 1):
                    assert success_probability(n, m, p) == pytest.approx(
                        cdf_rational(n, m, busy), abs=1e-12
                    )

    def test_mid_scale_vs_mpmath(self):
        n = 10**4
        for busy in (0.01, 0.1, 0.3):
            mean = n * busy
            sd = math.sqrt(n * busy * (1 - busy))
            p = AvailabilityParams(available=1.0 - busy, busy=busy)
            for m in (int(mean - 3 * sd), int(mean), int(mean + 3 * sd), int(mean + 6 * sd)):
                assert success_probability(n, m, p) == pytest.approx(cdf_mpmath(n, m, busy), abs=1e-12)

    def test_large_scale_vs_scipy(self):
        n = 10**6
        busy = 3.5 / 1443.5
        p = AvailabilityParams(available=1.0 - busy, busy=busy)
        mean, sd = n * busy, math.sqrt(n * busy * (1 - busy))
        for m in range(int(mean - 5 * sd), int(mean + 5 * sd), 37):
            assert success_probability(n, m, p) == pytest.approx(
                float(scipy_binom.cdf(m, n, busy)), abs=5e-12
            )

    @given(
        n=st.integers(1, 300),
        busy=st.floats(0.0, 1.0),
        m=st.integers(0, 300),
    )
    def test_monotone_in_spares(self, n, busy, m):
        m = min(m, n - 1)
        if m < 0:
            return
        p = AvailabilityParams(available=1.0 - busy, busy=busy)
        assert success_probability(n, m, p) <= success_probability(n, m + 1, p) + 1e-15

    @given(n=st.integers(1, 200), m=st.integers(0, 200), lo=st.floats(0.0, 1.0), hi=st.floats(0.0, 1.0))
    def test_monotone_in_busy(self, n, m, lo, hi):
        m = min(m, n)
        lo, hi = sorted((lo, hi))
        p_lo = AvailabilityParams(available=1.0 - lo, busy=lo)
        p_hi = AvailabilityParams(available=1.0 - hi, busy=hi)
        assert success_probability(n, m, p_hi) <= success_probability(n, m, p_lo) + 1e-12

    def test_domain_errors(self):
        p = AvailabilityParams(available=0.9, busy=0.1)
        with pytest.raises(ParameterError):
            success_probability(4, 5, p)
        with pytest.raises(ParameterError):
            success_probability(4, -1, p)
        with pytest.raises(ParameterError):
            success_probability(0, 0, p)


class TestLowerBound:
    def test_equals_exact_when_coefficients_match(self):
        # C(4,1) == (4/1)**1, so the m=1 bound coincides with the exact sum
        p = AvailabilityParams(available=0.9, busy=0.1)
        assert success_probability_lower_bound(4, 1, p) == pytest.approx(0.9477, abs=1e-13)

    def test_strictly_below_for_m2(self):
        p = AvailabilityParams(available=0.9, busy=0.1)
        bound = success_probability_lower_bound(4, 2, p)
        exact = success_probability(4, 2, p)
        assert bound == pytest.approx(0.9477 + 4 * 0.81 * 0.01, abs=1e-13)
        assert exact == pytest.approx(cdf_rational(4, 2, Fraction(1, 10)), abs=1e-13)
        assert bound < exact

    def test_full_sum_stays_a_probability(self):
        p = AvailabilityParams(available=0.6, busy=0.4)
        assert success_probability_lower_bound(50, 50, p) <= 1.0

    @given(n=st.integers(1, 250), m=st.integers(0, 250), busy=st.floats(0.0, 1.0))
    def test_never_exceeds_exact(self, n, m, busy):
        m = min(m, n)
        p = AvailabilityParams(available=1.0 - busy, busy=busy)
        assert success_probability_lower_bound(n, m, p) <= success_probability(n, m, p) + 1e-12


class TestMinSpares:
    def test_reference_sizing_n10(self):
        p = AvailabilityParams(available=0.9, busy=0.1)
        sizing = min_spares(10, p, 1e-4)
        brute = next(
            m for m in range(11) if cdf_rational(10, m, Fraction(1, 10)) >= 1 - 1e-4
        )
        assert sizing.spares == brute == 6

    def test_zero_busy_needs_no_spares(self):
        p = AvailabilityParams(available=1.0, busy=0.0)
        assert min_spares(12345, p, 1e-9).spares == 0

    def test_brute_force_grid(self):
        for n in (3, 7, 12, 20):
            for busy in (Fraction(1, 100), Fraction(1, 10), Fraction(3, 10), Fraction(1, 2)):
                p = AvailabilityParams(available=float(1 - busy), busy=float(busy))
                for eps in (0.3, 1e-2, 1e-4, 1e-8):
                    sizing = min_spares(n, p, eps)
                    brute = next(m for m in range(n + 1) if cdf_rational(n, m, busy) >= 1 - eps)
                    assert sizing.spares == brute

    def test_minimality_contract(self):
        p = availability_params(1440.0, 1.0, 2.5)
        for n in (100, 10_000):
            sizing = min_spares(n, p, 1e-6)
            assert sizing.achieved_success >= 1 - 1e-6
            assert success_probability(n, sizing.spares - 1, p) < 1 - 1e-6

    def test_large_scale_band(self):
        p = availability_params(1440.0, 1.0, 2.5)
        n = 10**6
        sizing = min_spares(n, p, 1e-6)
        mean = n * p.busy
        sd = math.sqrt(n * p.busy * p.available)
        assert mean + 4 * sd < sizing.spares < mean + 7 * sd
        assert sizing.achieved_success >= 1 - 1e-6
        assert success_probability(n, sizing.spares - 1, p) < 1 - 1e-6

    def test_monotone_in_mtbf_and_epsilon(self):
        sizings = [
            min_spares(10_000, availability_params(mu, 1.0, 2.5), 1e-4).spares
            for mu in (1440.0, 10080.0, 43200.0, 518400.0)
        ]
        assert sizings == sorted(sizings, reverse=True)
        by_eps = [
            min_spares(10_000, availability_params(1440.0, 1.0, 2.5), eps).spares
            for eps in (1e-2, 1e-4, 1e-6, 1e-8)
        ]
        assert by_eps == sorted(by_eps)

    @settings(max_examples=40)
    @given(n=st.integers(1, 150), busy=st.floats(0.0, 0.6), eps=st.floats(1e-9, 0.5))
    def test_lower_bound_sizing_overestimates(self, n, busy, eps):
        p = AvailabilityParams(available=1.0 - busy, busy=busy)
        exact = min_spares(n, p, eps, "exact")
        try:
            bound = min_spares(n, p, eps, "lower-bound")
        except InfeasibleSpareCountError:
            return  # "more than N spares": still an overestimate
        assert bound.spares >= exact.spares

    def test_bound_infeasible_for_tiny_epsilon(self):
        p = AvailabilityParams(available=0.7, busy=0.3)
        with pytest.raises(InfeasibleSpareCountError):
            min_spares(100, p, 1e-12, "lower-bound")

    def test_validation(self):
        p = AvailabilityParams(available=0.9, busy=0.1)
        with pytest.raises(ParameterError):
            min_spares(10, p, 0.0)
        with pytest.raises(ParameterError):
            min_spares(10, p, 1.0)
        with pytest.raises(ParameterError):
            min_spares(10, p, 1e-4, "approximate")
