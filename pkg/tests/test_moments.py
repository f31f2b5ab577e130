"""Moment lower bounds, harmonic sums and double-scaling asymptotics."""

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from recspec import moments as mo


def exact_bound(n: int, k: int) -> Fraction:
    """Rational oracle for the E||W^k x||^2 lower bound: n (n+k)! / ((k+1) n! n^k)."""
    num = Fraction(n)
    for d in range(1, k + 1):
        num *= Fraction(n + d, n)
    return num / (k + 1)


class TestLogFactorialRatio:
    def test_k0_empty_product(self):
        assert mo.log_factorial_ratio(123, 0) == 0.0

    def test_single_factor(self):
        assert mo.log_factorial_ratio(2, 1) == pytest.approx(math.log(1.5), rel=1e-15)

    @pytest.mark.parametrize(
        "n,k",
        [(10, 5), (100, 37), (10**4, 10**3), (10**6, 10**4), (7, 200), (10**6, 10**6)],
    )
    def test_matches_log_gamma_oracle(self, n, k):
        # independent evaluation through lgamma(n+k+1) - lgamma(n+1) - k log n
        oracle = math.lgamma(n + k + 1) - math.lgamma(n + 1) - k * math.log(n)
        assert mo.log_factorial_ratio(n, k) == pytest.approx(oracle, rel=1e-10, abs=1e-10)

    def test_double_scaling_magnitude(self):
        # k = 10 sqrt(n): the ratio is near alpha^2/2 = 50 with an O(k/n) correction
        val = mo.log_factorial_ratio(10**4, 10**3)
        assert val == pytest.approx(50.0, abs=2.0)
        assert val < 50.0  # the log(1+x) <= x correction is downward

    def test_series_matches_scalar(self):
        series = mo.log_factorial_ratio_series(50, 40)
        for k in (0, 1, 7, 40):
            assert series[k] == pytest.approx(mo.log_factorial_ratio(50, k), rel=1e-14)

    @settings(max_examples=60, deadline=None)
    @given(n=st.integers(2, 500), k=st.integers(0, 300))
    def test_nonnegative_and_increasing(self, n, k):
        # every product factor is >= 1
        a = mo.log_factorial_ratio(n, k)
        assert a >= 0.0
        assert mo.log_factorial_ratio(n, k + 1) >= a


class TestMomentLowerBound:
    def test_k0_equals_n(self):
        for n in (2, 17, 1000):
            assert mo.moment_lower_bound(n, 0) == pytest.approx(n, rel=1e-14)

    def test_n2_k1(self):
        # (1/2) * (2/2) * 3!/2! = 3/2, and exact_bound agrees
        assert exact_bound(2, 1) == Fraction(3, 2)
        assert mo.moment_lower_bound(2, 1) == pytest.approx(1.5, rel=1e-14)

    @pytest.mark.parametrize("n,k", [(2, 3), (10, 7), (57, 23), (150, 150)])
    def test_matches_rational_oracle(self, n, k):
        assert mo.moment_lower_bound(n, k) == pytest.approx(float(exact_bound(n, k)), rel=1e-12)

    def test_log_linear_agreement(self):
        # 12 significant digits wherever the direct product does not overflow
        for n, k in [(5, 100), (150, 150), (30, 60)]:
            direct = float(exact_bound(n, k))
            assert mo.moment_lower_bound(n, k) == pytest.approx(direct, rel=1e-12)

    def test_normalized_ratio_at_least_one(self):
        for n, k in [(2, 0), (10, 3), (300, 100)]:
            assert (k + 1) * mo.moment_lower_bound(n, k) / n >= 1.0 - 1e-12

    def test_eventually_increasing_in_k(self):
        # the e^{k^2/2n} growth overtakes the 1/(k+1) decay near k ~ sqrt(n)
        n = 50
        vals = [mo.moment_lower_bound(n, k) for k in range(61)]
        assert vals[1] < vals[0]  # early decay
        tail = vals[15:]
        assert all(b > a for a, b in zip(tail, tail[1:]))


class TestExpectedModulusMoment:
    def test_k0_normalization(self):
        assert mo.expected_modulus_moment(77, 0) == 1.0

    def test_n2_k1(self):
        assert mo.expected_modulus_moment(2, 1) == pytest.approx(0.75, rel=1e-14)

    def test_is_bound_over_n(self):
        for n, k in [(10, 4), (200, 30)]:
            assert mo.expected_modulus_moment(n, k) == pytest.approx(
                mo.moment_lower_bound(n, k) / n, rel=1e-12
            )


class TestHiddenStateBound:
    def test_t0_is_n(self):
        assert mo.hidden_state_lower_bound(42, 0) == pytest.approx(42.0, rel=1e-14)

    def test_telescoping_exact_oracle(self):
        # the rational oracle telescopes exactly; the float path tracks it to 1e-12
        n = 10
        running = Fraction(0)
        for t in range(0, 20):
            running += exact_bound(n, t)
            assert mo.hidden_state_lower_bound(n, t) == pytest.approx(float(running), rel=1e-12)

    def test_telescoping_float(self):
        n = 50
        for t in (1, 5, 17):
            diff = mo.hidden_state_lower_bound(n, t) - mo.hidden_state_lower_bound(n, t - 1)
            assert diff == pytest.approx(mo.moment_lower_bound(n, t), rel=1e-9)

    def test_harmonic_regime(self):
        # n >> t^2: (1/n) * bound approaches the partial harmonic sum
        n, t = 10**6, 100
        val = mo.hidden_state_lower_bound(n, t) / n
        assert val == pytest.approx(mo.exact_partial_harmonic(t), rel=5e-3)

    def test_double_scaling_regime_dominates_harmonic(self):
        # n = 500, t = 3 sqrt(n): the normalized bound clearly exceeds the
        # harmonic value and tracks the sum of e^{k^2/2n}/(k+1) terms
        n, t = 500, 67
        val = mo.hidden_state_lower_bound(n, t) / n
        approx = sum(math.exp(k * k / (2 * n)) / (k + 1) for k in range(t + 1))
        assert val >= 0.9 * approx
        assert val > mo.exact_partial_harmonic(t)

    def test_log_series_cumulative(self):
        series = mo.hidden_state_lower_bound_log_series(20, 10)
        assert series.shape == (11,)
        assert np.all(np.diff(series) > 0)
        assert series[4] == pytest.approx(mo.hidden_state_lower_bound_log(20, 4), rel=1e-14)


class TestHarmonic:
    def test_exact_small(self):
        # H_4 = 1 + 1/2 + 1/3 + 1/4
        assert mo.exact_partial_harmonic(3) == pytest.approx(25.0 / 12.0, rel=1e-15)

    def test_asymptotic_t100(self):
        exact = mo.exact_partial_harmonic(100)
        assert exact == pytest.approx(5.19727850774, rel=1e-10)
        assert abs(mo.harmonic_asymptotic(100) - exact) < 3e-2  # spec-level sanity
        assert abs(mo.harmonic_asymptotic(100) - exact) <= 5.0 / 100**2

    def test_asymptotic_t10000(self):
        exact = mo.exact_partial_harmonic(10**4)
        assert abs(mo.harmonic_asymptotic(10**4) - exact) < 3e-4
        assert abs(mo.harmonic_asymptotic(10**4) - exact) <= 5.0 / 10**8

    def test_gap_shrinks_quadratically(self):
        gaps = [abs(mo.harmonic_asymptotic(t) - mo.exact_partial_harmonic(t)) for t in (100, 1000, 10000)]
        # each decade in t buys ~two decades of accuracy
        assert gaps[0] / gaps[1] == pytest.approx(100.0, rel=0.2)
        assert gaps[1] / gaps[2] == pytest.approx(100.0, rel=0.2)

    def test_domain(self):
        with pytest.raises(ValueError):
            mo.harmonic_asymptotic(1)


class TestDoubleScaling:
    def test_k0(self):
        assert mo.double_scaling_factor(123, 0) == 1.0

    @pytest.mark.parametrize("n,tol", [(10**4, 0.05), (10**6, 0.005)])
    def test_ratio_converges_alpha2(self, n, tol):
        k = int(2 * math.sqrt(n))
        ratio = math.exp(mo.log_factorial_ratio(n, k)) / mo.double_scaling_factor(n, k)
        assert ratio == pytest.approx(1.0, abs=tol)

    def test_n500_k67(self):
        assert mo.double_scaling_factor(500, 67) == pytest.approx(math.exp(67**2 / 1000.0), rel=1e-14)
        assert mo.double_scaling_factor(500, 67) == pytest.approx(89.0, rel=0.01)


class TestExplosionEnvelope:
    def test_at_sqrt_n(self):
        n = 400
        assert mo.explosion_envelope(n, 20) == pytest.approx(20.0 * math.exp(0.5), rel=1e-12)

    def test_n500_t100(self):
        assert mo.explosion_envelope(500, 100) == pytest.approx(5.0 * math.exp(10.0), rel=1e-12)

    def test_brackets_exact_sum_from_above(self):
        # over the explosion window the envelope exceeds the exact normalized
        # sum by a factor that grows like t (measured 9x..93x for t=22..90):
        # same e^{t^2/2n} growth rate, prefactor n/t instead of the sharp n/t^2
        n = 500
        for t in (22, 45, 67, 90):
            exact = mo.hidden_state_lower_bound(n, t) / n
            ratio = mo.explosion_envelope(n, t) / exact
            assert 1.0 <= ratio <= 2.0 * t
            sharp = (n / t**2) * math.exp(t * t / (2.0 * n))
            assert 0.1 <= sharp / exact <= 10.0
