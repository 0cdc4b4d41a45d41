import math
import random
from fractions import Fraction

import pytest

from invmoments.symbolic import (PolyError, PowerSeries, TruncationError, binomial_moment_poly,
                                 binomial_np_series, binomial_series, const, degree_report,
                                 double_factorial, golden_series, parse_poly, poisson_m_series,
                                 poisson_moment_poly, sym)

n, p, q, m, r = (sym(s) for s in "npqmr")


def brute_binomial_moment(nn, pp, k):
    pp = Fraction(pp)
    return sum(math.comb(nn, i) * pp**i * (1 - pp) ** (nn - i) * (i - nn * pp) ** k
               for i in range(nn + 1))


def brute_poisson_moment(mm, k, terms=200):
    # float bridge: truncated direct sum, tail far below 1e-15 for mm <= 5
    return math.fsum(math.exp(-mm + s * math.log(mm) - math.lgamma(s + 1)) * (s - mm) ** k
                     for s in range(terms))


class TestBinomialMomentPoly:
    def test_low_orders(self):
        assert binomial_moment_poly(0) == const(1)
        assert binomial_moment_poly(1).is_zero()
        assert binomial_moment_poly(2) == n * p * (1 - p)

    def test_third(self):
        assert binomial_moment_poly(3) == n * p * (1 - p) * (1 - 2 * p)

    def test_fourth(self):
        expected = n * p * (1 - p) * (1 - 6 * p + 6 * p**2 + 3 * n * p - 3 * n * p**2)
        assert binomial_moment_poly(4) == expected

    def test_sixth_against_direct_sum(self):
        value = binomial_moment_poly(6).evaluate({"n": 4, "p": Fraction(1, 2)})
        assert value == brute_binomial_moment(4, Fraction(1, 2), 6)

    def test_every_n_power_carries_p(self):
        # needed to rewrite n^j p^a as (np)^j p^(a-j) in the 1/(np) series
        for k in range(0, 25):
            for mono in binomial_moment_poly(k).terms:
                exps = dict(mono)
                assert exps.get("p", 0) >= exps.get("n", 0)

    def test_derivative_matches_finite_difference(self):
        rng = random.Random(7)
        h = 1e-5
        for _ in range(20):
            k = rng.randint(2, 8)
            nn = rng.randint(1, 40)
            pp = Fraction(rng.randint(1, 99), 100)
            mu = binomial_moment_poly(k)
            exact = float(mu.differentiate("p").evaluate({"n": nn, "p": pp}))
            f = lambda x: float(mu.evaluate({"n": nn, "p": Fraction(x)}))
            fd = (f(float(pp) + h) - f(float(pp) - h)) / (2 * h)
            scale = max(1.0, abs(exact))
            assert abs(fd - exact) <= 1e-6 * scale * nn ** (k / 2)


class TestPoissonMomentPoly:
    @pytest.mark.parametrize("k,expected", [(0, "1"), (1, "0"), (2, "m"), (3, "m"), (4, "m + 3*m^2")])
    def test_known_values(self, k, expected):
        assert poisson_moment_poly(k) == parse_poly(expected)

    def test_fifth_against_truncated_sum(self):
        value = float(poisson_moment_poly(5).evaluate({"m": 1}))
        assert abs(value - brute_poisson_moment(1.0, 5)) < 1e-12


class TestDegreeReport:
    def test_fourth(self):
        rep = degree_report(4)
        assert (rep.deg_p, rep.deg_n) == (4, 2)
        assert rep.leading_n_coefficient == 3 * (p * q) ** 2
        assert rep.leading_law_holds

    def test_first_is_zero(self):
        rep = degree_report(1)
        assert rep.is_zero
        assert rep.leading_n_coefficient.is_zero()

    def test_seventh(self):
        assert degree_report(7).deg_n == 3

    def test_double_factorial(self):
        assert [double_factorial(k) for k in (-1, 0, 1, 3, 5, 7)] == [1, 1, 1, 3, 15, 105]


class TestPowerSeries:
    def test_binomial_series_matches_float(self):
        s = binomial_series(const(Fraction(5, 2)), const(1), "1/m", 8)
        t = 0.01
        assert abs(s.evaluate(t) - (1 + t) ** -2.5) < 1e-17

    def test_truncation_never_exceeded(self):
        a = PowerSeries.from_coefficients("1/m", [1, 1], 3)
        prod = a * a * a * a
        assert prod.truncation_order == 3
        assert len(prod.coefficients) == 4
        assert [c.constant_value() for c in prod.coefficients] == [1, 4, 6, 4]
        assert a.shift(3).coefficients[3] == const(1)
        assert a.shift(4).coefficients[3].is_zero()

    def test_mismatched_orders(self):
        with pytest.raises(TruncationError):
            PowerSeries.from_coefficients("1/m", [1], 2) + PowerSeries.from_coefficients("1/m", [1], 3)
        with pytest.raises(TruncationError):
            PowerSeries("1/m", (const(1),), 2)
        with pytest.raises(PolyError):
            PowerSeries.from_coefficients("x", [1], 1)

    def test_text_round_trip(self):
        s = binomial_np_series(None, 3)
        back = PowerSeries.from_text(s.to_text())
        assert back == s


class TestCoefficientSeries:
    def test_general_r_first_correction(self):
        assert binomial_np_series(None, 1)[1] == r * (r + 1) * q / 2

    def test_general_r_second_correction(self):
        assert binomial_np_series(None, 2)[2] == r * (r + 1) * (r + 2) * q * (4 + q + 3 * r * q) / 24

    def test_f1_table(self):
        s = binomial_np_series(1, 5)
        assert s.coefficients[1:] == golden_series("binomial", 1)

    def test_f2_third_order_factored(self):
        assert binomial_np_series(2, 4)[3] == 5 * q * (1 + 6 * q + 3 * q**2)

    def test_numeric_r_is_symbolic_r_substituted(self):
        sym_series = binomial_np_series(None, 4)
        for rv in (1, 2, 3, Fraction(1, 2)):
            assert binomial_np_series(rv, 4) == sym_series.substitute({"r": rv})

    def test_point_mass_collapses(self):
        for rv in (None, 1, 2):
            s = binomial_np_series(rv, 5).substitute({"q": 0})
            assert s.coefficients[0] == const(1)
            assert all(c.is_zero() for c in s.coefficients[1:])

    def test_poisson_table(self):
        s = poisson_m_series(None, 2)
        assert s[0] == const(1)
        assert s[1] == r * (r + 1) / 2
        assert s[2] == r * (10 + 21 * r + 14 * r**2 + 3 * r**3) / 24

    def test_float_bridge_binomial(self):
        # series in 1/(np) vs the (np+q)-form summed far enough to agree to O(t^(K+1))
        from invmoments.distributions import BinomialSpec, MomentQuery
        from invmoments.expansion import binomial_expansion

        nn, pp, rv, K = 20000, 0.25, 2, 4
        t = 1 / (nn * pp)
        series_val = binomial_np_series(rv, K).evaluate(t, {"q": 1 - pp}) * t**rv
        rep = binomial_expansion(BinomialSpec(nn, pp), MomentQuery(rv), 2 * K + 2)
        assert abs(series_val / rep.value - 1) < 1e-12

    def test_float_bridge_poisson(self):
        from invmoments.distributions import MomentQuery, PoissonSpec
        from invmoments.expansion import poisson_expansion

        mm, rv, K = 1e5, 1.5, 4
        series_val = poisson_m_series(Fraction(3, 2), K).evaluate(1 / mm) * mm**-rv
        rep = poisson_expansion(PoissonSpec(mm), MomentQuery(rv), 2 * K + 2)
        assert abs(series_val / rep.value - 1) < 1e-12

    def test_negative_order_rejected(self):
        with pytest.raises(PolyError):
            binomial_np_series(1, -1)
        with pytest.raises(PolyError):
            binomial_np_series(0, 2)
