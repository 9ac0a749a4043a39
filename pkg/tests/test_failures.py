import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from ckptmig.errors import ParameterError
from ckptmig.failures import (
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


def mp_gamma(x) -> float:
    return float(mpmath.gamma(mpmath.mpf(x)))


class TestGroupMtbfExponential:
    def test_identity_at_k0(self):
        assert group_mtbf_exponential(1000.0, 0) == 1000.0

    def test_three_halvings(self):
        assert group_mtbf_exponential(1000.0, 3) == 125.0

    def test_month_over_256(self):
        assert group_mtbf_exponential(43200.0, 8) == 168.75

    @given(mtbf=st.floats(1e-6, 1e9), k=st.integers(0, 40))
    def test_halving_property(self, mtbf, k):
        assert group_mtbf_exponential(mtbf, k + 1) == group_mtbf_exponential(mtbf, k) / 2.0

    def test_rejects_bad_args(self):
        with pytest.raises(ParameterError):
            group_mtbf_exponential(0.0, 1)
        with pytest.raises(ParameterError):
            group_mtbf_exponential(100.0, -1)


class TestGroupMtbfWeibull:
    def test_shape_scaled_unit_case(self):
        assert group_mtbf_weibull_shape_scaled(1.0, 1.0, 0) == pytest.approx(1.0, rel=1e-14)

    def test_shape_scaled_half_shape(self):
        assert group_mtbf_weibull_shape_scaled(100.0, 1.0, 1) == pytest.approx(
            100.0 * mp_gamma(1.5), rel=1e-12
        )

    def test_shape_scaled_fractional(self):
        expected = mp_gamma(1 + 1 / (0.7 * 4))
        assert group_mtbf_weibull_shape_scaled(1.0, 0.7, 2) == pytest.approx(expected, rel=1e-12)

    def test_min_reduces_to_exponential_at_shape_1(self):
        assert group_mtbf_weibull_min(1000.0, 1.0, 3) == pytest.approx(125.0, rel=1e-13)

    def test_min_rayleigh(self):
        # (2**2)**(-1/2) * gamma(1.5)
        assert group_mtbf_weibull_min(1.0, 2.0, 2) == pytest.approx(0.5 * mp_gamma(1.5), rel=1e-12)

    def test_min_heavy_tail(self):
        # 2**(-2) * gamma(3) = 0.5
        assert group_mtbf_weibull_min(1.0, 0.5, 1) == pytest.approx(0.5, rel=1e-13)

    @given(mtbf=st.floats(1e-3, 1e8), k=st.integers(0, 30))
    def test_min_matches_exponential_at_shape_1(self, mtbf, k):
        assert group_mtbf_weibull_min(mtbf, 1.0, k) == pytest.approx(
            group_mtbf_exponential(mtbf, k), rel=1e-12
        )

    def test_conventions_disagree_for_groups(self):
        assert group_mtbf_weibull_shape_scaled(1.0, 1.0, 1) == pytest.approx(mp_gamma(1.5), rel=1e-12)
        assert group_mtbf_weibull_min(1.0, 1.0, 1) == pytest.approx(0.5, rel=1e-12)

    def test_dispatcher(self):
        model = Weibull(scale=2.0, shape=0.9)
        assert group_mtbf(model, 3) == group_mtbf_weibull_shape_scaled(2.0, 0.9, 3)
        assert group_mtbf(model, 3, "exact-min") == group_mtbf_weibull_min(2.0, 0.9, 3)
        assert group_mtbf(Exponential(100.0), 2, "exact-min") == 25.0
        with pytest.raises(ParameterError):
            group_mtbf(model, 1, "bogus")


def test_gamma_matches_factorials():
    for n in range(1, 11):
        assert math.gamma(n) == pytest.approx(math.factorial(n - 1), rel=1e-10)


def test_model_validation():
    with pytest.raises(ParameterError):
        Exponential(0.0)
    with pytest.raises(ParameterError):
        Weibull(scale=1.0, shape=0.0)
    with pytest.raises(ParameterError):
        Weibull(scale=-1.0, shape=1.0)


def test_model_means():
    assert Exponential(1440.0).mean() == 1440.0
    assert Weibull(scale=100.0, shape=1.0).mean() == pytest.approx(100.0, rel=1e-14)
    assert Weibull(scale=1.0, shape=0.5).mean() == pytest.approx(2.0, rel=1e-13)


class TestSampling:
    def test_exponential_mean_converges(self):
        rng = np.random.default_rng(42)
        draws = sample_failure_times(Exponential(1440.0), rng, 10**6)
        assert abs(draws.mean() - 1440.0) / 1440.0 < 0.01

    def test_weibull_shape_1_matches_exponential(self):
        rng = np.random.default_rng(7)
        weib = sample_failure_times(Weibull(scale=500.0, shape=1.0), rng, 20_000)
        expo = sample_failure_times(Exponential(500.0), rng, 20_000)
        assert stats.ks_2samp(weib, expo).pvalue > 0.01

    def test_min_of_group_exponential_mean(self):
        rng = np.random.default_rng(3)
        mins = sample_failure_times(Exponential(1600.0), rng, (10**5, 16)).min(axis=1)
        mean = mins.mean()
        assert abs(mean - 100.0) / 100.0 < 0.02
        halfwidth = 1.96 * mins.std(ddof=1) / math.sqrt(mins.size)
        assert mean - halfwidth <= 100.0 <= mean + halfwidth

    def test_min_of_group_weibull_matches_group_model(self):
        model = Weibull(scale=300.0, shape=0.7)
        rng = np.random.default_rng(11)
        mins = sample_failure_times(model, rng, (10**5, 8)).min(axis=1)
        grouped = group_min_model(model, 3)
        assert isinstance(grouped, Weibull)
        assert grouped.shape == 0.7
        assert abs(mins.mean() - grouped.mean()) / grouped.mean() < 0.02

    def test_scalar_draw(self):
        rng = np.random.default_rng(0)
        t = sample_failure_time(Exponential(10.0), rng)
        assert isinstance(t, float) and t > 0


def test_group_min_model_exponential():
    assert group_min_model(Exponential(1000.0), 3) == Exponential(125.0)


class TestStreams:
    def test_deterministic(self):
        a = [sample_failure_time(Exponential(5.0), rng) for rng in replication_streams(99, 4)]
        b = [sample_failure_time(Exponential(5.0), rng) for rng in replication_streams(99, 4)]
        assert a == b

    def test_streams_differ(self):
        draws = [sample_failure_time(Exponential(5.0), rng) for rng in replication_streams(1, 8)]
        assert len(set(draws)) == len(draws)

    def test_rejects_zero_replications(self):
        with pytest.raises(ParameterError):
            replication_streams(0, 0)


@settings(max_examples=30)
@given(scale=st.floats(0.1, 1e6), shape=st.floats(0.2, 5.0), k=st.integers(0, 20))
def test_min_convention_below_scale_times_gamma(scale, shape, k):
    # the minimum of more draws can only shrink the mean
    single = Weibull(scale, shape).mean()
    assert group_mtbf_weibull_min(scale, shape, k) <= single * (1 + 1e-12)
