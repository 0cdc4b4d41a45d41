import math
from fractions import Fraction

import numpy as np
import pytest

from invmoments.distributions import BinomialSpec, MomentQuery, PoissonSpec
from invmoments.errors import ConvergenceError, ValidationError
from invmoments.expansion import (ExpansionReport, GeneralDistributionDescriptor, QuadratureConfig,
                                  auto_truncate, binomial_descriptor, binomial_expansion,
                                  general_expansion, poisson_descriptor, poisson_expansion,
                                  real_binomial_symbol)
from invmoments.oracle import binomial_inverse_moment_exact, poisson_inverse_moment_exact


def reproduce(report: ExpansionReport) -> float:
    return float(report.prefactor) * math.fsum(float(t) for _, t in report.terms)


@pytest.mark.parametrize("r,k,expected", [(7.3, 0, 1), (1, 2, 3), (Fraction(1, 2), 1, Fraction(3, 2))])
def test_real_binomial_symbol(r, k, expected):
    assert real_binomial_symbol(r, k, mode="rational") == expected
    assert real_binomial_symbol(r, k) == pytest.approx(float(expected), rel=1e-15)


def test_real_binomial_symbol_matches_gamma():
    for r in (0.5, 1.7, 4.0):
        for k in range(8):
            via_gamma = math.exp(math.lgamma(r + k + 1) - math.lgamma(r + 1) - math.lgamma(k + 1))
            assert real_binomial_symbol(r, k) == pytest.approx(via_gamma, rel=1e-13)


class TestBinomialExpansion:
    @pytest.mark.parametrize("p", [0.2, 0.5, 1.0])
    @pytest.mark.parametrize("r", [0.5, 1, 3.25])
    @pytest.mark.parametrize("order", [1, 4, 9])
    def test_single_trial_exact(self, p, r, order):
        rep = binomial_expansion(BinomialSpec(1, p), MomentQuery(r), order)
        assert rep.value == pytest.approx(p, rel=1e-15)
        assert all(t == 0 for k, t in rep.terms if k >= 1)
        assert rep.error_estimate == 0

    def test_leading_term(self):
        rep = binomial_expansion(BinomialSpec(100, 0.5), MomentQuery(1), 1)
        assert rep.value == pytest.approx(50 / 50.5**2, rel=1e-15)
        assert rep.value == pytest.approx(0.01960592, abs=1e-8)

    def test_against_oracle(self):
        spec, query = BinomialSpec(1000, 0.3), MomentQuery(2)
        rep = binomial_expansion(spec, query, 6)
        oracle = binomial_inverse_moment_exact(spec, query)
        assert abs(rep.value - oracle.value) <= 2 * rep.error_estimate

    def test_ledger_reproduces_value(self):
        rep = binomial_expansion(BinomialSpec(321, 0.17), MomentQuery(1.5), 7)
        assert reproduce(rep) == pytest.approx(rep.value, rel=1e-15)
        assert len(rep.terms) == rep.order_used == 7
        assert [k for k, _ in rep.lookahead] == [7, 8]

    def test_symmetric_odd_terms_vanish(self):
        rep = binomial_expansion(BinomialSpec(64, 0.5), MomentQuery(2), 10)
        assert all(t == 0 for k, t in rep.terms if k % 2 == 1)

    def test_sign_structure(self):
        spec = BinomialSpec(80, 0.2)
        rep = binomial_expansion(spec, MomentQuery(1), 8)
        from invmoments.distributions import binomial_central_moment_at
        for k, t in rep.terms:
            mu = binomial_central_moment_at(79, 0.2, k)
            assert np.sign(t) == np.sign((-1) ** k * mu)

    def test_rational_mode(self):
        spec = BinomialSpec(10, Fraction(1, 3))
        rep = binomial_expansion(spec, MomentQuery(2, mode="rational"), 5)
        assert isinstance(rep.value, Fraction)
        flt = binomial_expansion(BinomialSpec(10, 1 / 3), MomentQuery(2), 5)
        assert float(rep.value) == pytest.approx(flt.value, rel=1e-14)

    def test_small_parameter_warning(self):
        rep = binomial_expansion(BinomialSpec(2, 0.4), MomentQuery(1), 3)
        assert any("np+q" in w for w in rep.warnings)
        assert not binomial_expansion(BinomialSpec(100, 0.4), MomentQuery(1), 3).warnings

    @pytest.mark.parametrize("order", [0, -2, 1.5, True])
    def test_bad_order(self, order):
        with pytest.raises(ValidationError):
            binomial_expansion(BinomialSpec(10, 0.4), MomentQuery(1), order)

    def test_huge_n_no_overflow(self):
        rep = binomial_expansion(BinomialSpec(10**9, 0.3), MomentQuery(20), 30)
        assert math.isfinite(rep.value) and rep.value > 0


class TestPoissonExpansion:
    def test_leading_term(self):
        rep = poisson_expansion(PoissonSpec(10), MomentQuery(1), 1)
        assert rep.value == pytest.approx(10 / 121, rel=1e-15)

    def test_against_oracle(self):
        spec, query = PoissonSpec(50), MomentQuery(1)
        rep = poisson_expansion(spec, query, 6)
        oracle = poisson_inverse_moment_exact(spec, query)
        assert abs(rep.value - oracle.value) <= 2 * rep.error_estimate

    def test_against_inverse_m_form(self):
        # through 1/m^2: (1/m)(1 + r(r+1)/(2m) + r(10+21r+14r^2+3r^3)/(24 m^2)) at r = 1
        m = 100
        rep = poisson_expansion(PoissonSpec(m), MomentQuery(1), 3)
        reference = (1 / m) * (1 + 1 / m + 2 / m**2)
        # three retained terms leave O(1/m^2) relative: |t_3| + |t_4| = (4 + 15)/m^2 here
        assert abs(rep.value / reference - 1) < 20 / m**2

    def test_rational_mode(self):
        rep = poisson_expansion(PoissonSpec(Fraction(7, 2)), MomentQuery(1, mode="rational"), 4)
        assert rep.value == Fraction(7, 2) / Fraction(9, 2) ** 2 * (
            1 + Fraction(7, 2) / Fraction(9, 2) ** 2 * 3
            - Fraction(7, 2) / Fraction(9, 2) ** 3 * 4)

    def test_small_parameter_warning(self):
        assert poisson_expansion(PoissonSpec(0.5), MomentQuery(1), 2).warnings


class TestGeneralExpansion:
    def test_poisson_closed_form(self):
        rep_g = general_expansion(poisson_descriptor(PoissonSpec(10)), MomentQuery(1), 4)
        rep_p = poisson_expansion(PoissonSpec(10), MomentQuery(1), 4)
        assert abs(rep_g.value - rep_p.value) < 1e-10

    def test_binomial_descriptor_against_oracle(self):
        spec, query = BinomialSpec(50, 0.4), MomentQuery(1)
        rep = general_expansion(binomial_descriptor(spec), query, 4)
        oracle = binomial_inverse_moment_exact(spec, query)
        assert abs(rep.value - oracle.value) <= 2 * rep.error_estimate + oracle.bound

    def test_degenerate_descriptor_keeps_only_leading_term(self):
        xbar = 12.0
        desc = GeneralDistributionDescriptor(mean=xbar, central_moments=[1.0] + [0.0] * 10,
                                             cumulant_derivative=lambda t: xbar * np.exp(t))
        rep = general_expansion(desc, MomentQuery(2), 6)
        assert all(t == 0 for k, t in rep.terms if k >= 1)
        assert rep.value == pytest.approx(rep.prefactor * rep.terms[0][1], rel=1e-15)

    def test_inconsistent_descriptor(self):
        with pytest.raises(ValidationError):
            GeneralDistributionDescriptor(mean=3.0, central_moments=[1.0, 0.1, 2.0],
                                          cumulant_derivative=np.exp)
        with pytest.raises(ValidationError):
            GeneralDistributionDescriptor(mean=-1.0, central_moments=[1.0, 0.0],
                                          cumulant_derivative=np.exp)

    def test_short_moment_sequence(self):
        desc = GeneralDistributionDescriptor(mean=3.0, central_moments=[1.0, 0.0, 3.0],
                                             cumulant_derivative=lambda t: 3 * np.exp(t))
        with pytest.raises(ValidationError):
            general_expansion(desc, MomentQuery(1), 4)

    def test_quadrature_nonconvergence(self):
        with pytest.raises(ConvergenceError):
            general_expansion(poisson_descriptor(PoissonSpec(2)), MomentQuery(1), 3,
                              QuadratureConfig(rtol=1e-30, max_nodes=32))


class TestAutoTruncate:
    def test_single_trial(self):
        rep = auto_truncate(BinomialSpec(1, 0.3), MomentQuery(1), 10)
        assert rep.order_used >= 1
        assert rep.value == pytest.approx(0.3, rel=1e-15)

    def test_divergent_case_truncates(self):
        # (n-1)(1-2p) > 1: the series diverges and eventually grows
        rep = auto_truncate(BinomialSpec(10, 0.1), MomentQuery(1), 40)
        assert rep.order_used < 40
        assert any("grow" in w for w in rep.warnings)

    def test_symmetric_small_n_converges(self):
        # for p >= 1/2 every |i - (n-1)p| < np + q, so the series converges
        spec, query = BinomialSpec(10, 0.5), MomentQuery(1)
        rep = auto_truncate(spec, query, 40)
        assert rep.order_used == 40
        assert not any("grow" in w for w in rep.warnings)
        # slow geometric convergence (ratio 4.5/5.5): the tail is ~5.5x the next term
        exact = binomial_inverse_moment_exact(spec, query).value
        gap40 = abs(rep.value - exact)
        gap20 = abs(binomial_expansion(spec, query, 20).value - exact)
        assert gap40 < gap20 / 10
        assert gap40 <= rep.error_estimate / (1 - 4.5 / 5.5)

    def test_large_rate_keeps_all(self):
        rep = auto_truncate(PoissonSpec(10**6), MomentQuery(1), 8)
        assert rep.order_used == 8
        assert rep.warnings == ()

    def test_general_descriptor(self):
        rep = auto_truncate(poisson_descriptor(PoissonSpec(40)), MomentQuery(1), 6)
        assert rep.order_used == 6

    def test_rejects_unknown_target(self):
        with pytest.raises(ValidationError):
            auto_truncate(3.0, MomentQuery(1), 4)


def test_concurrent_evaluation_is_deterministic():
    from concurrent.futures import ThreadPoolExecutor

    grid = [(n, p) for n in (50, 100, 200, 400) for p in (0.2, 0.5, 0.8)]

    def run(point):
        return binomial_expansion(BinomialSpec(*point), MomentQuery(2), 6).value

    serial = [run(pt) for pt in grid]
    with ThreadPoolExecutor(max_workers=6) as pool:
        parallel = list(pool.map(run, grid))
    assert serial == parallel


def test_first_omitted_pair_bounds_error_on_scaling_grid():
    worst = 0.0
    for p in (0.3, 0.5):
        for r in (1, 2):
            for n in (128, 512, 2048, 8192):
                spec, query = BinomialSpec(n, p), MomentQuery(r)
                exact = binomial_inverse_moment_exact(spec, query).value
                for order in (2, 3, 4, 5):
                    rep = binomial_expansion(spec, query, order)
                    assert not rep.warnings
                    worst = max(worst, abs(rep.value - exact) / rep.error_estimate)
    assert worst <= 2
