import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from invmoments.distributions import BinomialSpec, MomentQuery, PoissonSpec
from invmoments.errors import ConvergenceError, ValidationError
from invmoments.oracle import (OracleResult, binomial_inverse_moment_exact,
                               binomial_inverse_moment_quadrature, poisson_inverse_moment_exact)

# sum_{s>=1} e^-1 / (s! s) to 30 digits (mpmath nsum, 40-digit working precision)
POISSON_M1_R1 = 0.484829106995687646310401414222


class TestBinomialExact:
    @pytest.mark.parametrize("p,r", [(0.3, 1), (0.9, 2.5), (1.0, 0.5)])
    def test_single_trial(self, p, r):
        res = binomial_inverse_moment_exact(BinomialSpec(1, p), MomentQuery(r))
        assert res.value == pytest.approx(p, rel=1e-15)

    def test_point_mass(self):
        res = binomial_inverse_moment_exact(BinomialSpec(8, 1.0), MomentQuery(2))
        assert res.value == pytest.approx(1 / 64, rel=1e-15)
        exact = binomial_inverse_moment_exact(BinomialSpec(8, 1), MomentQuery(2, mode="rational"))
        assert exact.value == Fraction(1, 64)

    def test_two_trials(self):
        # 2 * 1/4 * 1 + 1/4 * 1/2
        res = binomial_inverse_moment_exact(BinomialSpec(2, Fraction(1, 2)), MomentQuery(1, mode="rational"))
        assert res.value == Fraction(5, 8)
        assert res.bound == 0
        res = binomial_inverse_moment_exact(BinomialSpec(2, 0.5), MomentQuery(1))
        assert abs(res.value - 0.625) <= res.bound

    def test_rational_needs_integer_r(self):
        with pytest.raises(ValidationError):
            binomial_inverse_moment_exact(BinomialSpec(2, Fraction(1, 2)),
                                          MomentQuery(Fraction(1, 2), mode="rational"))

    @pytest.mark.parametrize("n", [5, 40, 300])
    @pytest.mark.parametrize("p", [Fraction(1, 10), Fraction(1, 2), Fraction(7, 8)])
    @pytest.mark.parametrize("r", [1, 2, 3])
    def test_float_matches_rational(self, n, p, r):
        exact = binomial_inverse_moment_exact(BinomialSpec(n, p), MomentQuery(r, mode="rational")).value
        approx = binomial_inverse_moment_exact(BinomialSpec(n, float(p)), MomentQuery(r))
        assert abs(approx.value / float(exact) - 1) < 1e-13
        assert abs(approx.value - float(exact)) <= approx.bound + 1e-16 * float(exact)

    def test_large_n_no_overflow(self):
        res = binomial_inverse_moment_exact(BinomialSpec(200000, 0.3), MomentQuery(1))
        assert math.isfinite(res.value)
        assert res.value == pytest.approx(1 / 60000, rel=1e-3)

    @settings(max_examples=30, deadline=None)
    @given(st.integers(2, 60), st.floats(0.05, 0.95), st.floats(0.2, 4), st.floats(0.2, 4))
    def test_monotone_in_r(self, n, p, r1, r2):
        if abs(r1 - r2) < 1e-3:
            return
        lo, hi = sorted((r1, r2))
        spec = BinomialSpec(n, p)
        assert (binomial_inverse_moment_exact(spec, MomentQuery(hi)).value
                < binomial_inverse_moment_exact(spec, MomentQuery(lo)).value)


class TestPoissonExact:
    def test_m1_r1(self):
        res = poisson_inverse_moment_exact(PoissonSpec(1), MomentQuery(1, tol=1e-15))
        assert abs(res.value - POISSON_M1_R1) < 1e-15
        assert res.bound < 1e-14

    def test_zero_order_rejected(self):
        with pytest.raises(ValidationError):
            poisson_inverse_moment_exact(PoissonSpec(5), MomentQuery(0))

    def test_small_rate_high_order(self):
        res = poisson_inverse_moment_exact(PoissonSpec(0.1), MomentQuery(3))
        assert 0 < res.value < 1

    def test_rational_mode_rejected(self):
        with pytest.raises(ValidationError):
            poisson_inverse_moment_exact(PoissonSpec(2), MomentQuery(1, mode="rational"))

    def test_term_cap(self):
        with pytest.raises(ConvergenceError):
            poisson_inverse_moment_exact(PoissonSpec(500.0), MomentQuery(1), max_terms=100)

    def test_large_rate(self):
        res = poisson_inverse_moment_exact(PoissonSpec(1e6), MomentQuery(1))
        # leading behaviour 1/m (1 + 1/m + ...)
        assert res.value == pytest.approx(1e-6 * (1 + 1e-6), rel=1e-11)

    def test_tail_bound_honest(self):
        # tighter tolerance moves the value by less than the looser run's bound
        loose = poisson_inverse_moment_exact(PoissonSpec(30), MomentQuery(2, tol=1e-6))
        tight = poisson_inverse_moment_exact(PoissonSpec(30), MomentQuery(2, tol=1e-16))
        assert abs(loose.value - tight.value) <= loose.bound
        assert loose.terms_or_nodes < tight.terms_or_nodes


class TestQuadrature:
    def test_single_trial(self):
        res = binomial_inverse_moment_quadrature(BinomialSpec(1, 0.7), MomentQuery(2))
        assert res.value == pytest.approx(0.7, abs=1e-12)
        assert res.method == "quadrature"

    def test_two_trials(self):
        res = binomial_inverse_moment_quadrature(BinomialSpec(2, 0.5), MomentQuery(1))
        assert abs(res.value - 0.625) < 1e-10

    def test_matches_direct_sum(self):
        spec, query = BinomialSpec(20, 0.5), MomentQuery(1)
        a = binomial_inverse_moment_exact(spec, query)
        b = binomial_inverse_moment_quadrature(spec, query)
        assert abs(a.value - b.value) < 1e-10

    def test_refinement_failure_reported(self):
        with pytest.raises(ConvergenceError):
            binomial_inverse_moment_quadrature(BinomialSpec(50, 0.5), MomentQuery(1), rtol=1e-30)


def test_oracle_result_invariants():
    with pytest.raises(ValueError):
        OracleResult(1.0, "direct_sum", -1.0, 1)
    with pytest.raises(ConvergenceError):
        OracleResult(math.nan, "direct_sum", 0.0, 1)
