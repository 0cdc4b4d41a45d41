"""Re-expansion of the inverse-moment series in powers of 1/(np) and 1/m.

The binomial series is naturally a series in ``1/(np+q)`` with central
moments of ``n - 1`` trials.  With ``t = 1/(np)`` one has
``np + q = (1 + q t)/t``, so

    f_r (np)^r = sum_k (-1)^k C(r+k, r) mu_k(n-1) t^k (1 + q t)^-(r+k+1).

Every ``n**j`` in ``mu_k(n-1)`` comes with at least ``p**j``, so
``n**j p**a t**k = p**(a-j) t**(k-j)`` and the coefficients are polynomials
in ``q`` and ``r`` only.  The Poisson case is the same with ``t = 1/m`` and
``m + 1 = (1 + t)/t``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Union

from .moments import binomial_moment_poly, poisson_moment_poly
from .poly import PolyError, RationalPoly, const, parse_poly, sym
from .series import PowerSeries, binomial_series

__all__ = [
    "binomial_np_series",
    "poisson_m_series",
    "rising_binomial_poly",
    "GOLDEN_BINOMIAL",
    "GOLDEN_POISSON",
    "golden_series",
    "check_against_golden",
]

Order = Union[int, Fraction, None]

_n, _p, _q, _r = sym("n"), sym("p"), sym("q"), sym("r")


class NegativePowerError(PolyError):
    """A term n^j p^a with a < j would leave a negative power of p."""


def _r_poly(r: Order) -> RationalPoly:
    if r is None:
        return _r
    if isinstance(r, float):
        if not r.is_integer():
            raise PolyError("non-integer r must be given as a Fraction for exact work")
        r = int(r)
    r = Fraction(r)
    if r <= 0:
        raise PolyError(f"r must be positive, got {r}")
    return const(r)


def rising_binomial_poly(r: RationalPoly, k: int) -> RationalPoly:
    """``C(r+k, r) = (r+1)(r+2)...(r+k)/k!`` as a polynomial in ``r``."""
    out = const(1)
    for i in range(1, k + 1):
        out = out * (r + i) / i
    return out


def _moment_as_series(mu: RationalPoly, k: int, big: str, small: str | None,
                      symbol: str, order: int) -> PowerSeries:
    """Rewrite ``mu * t**k`` with ``big*small = 1/t`` (or ``big = 1/t``)."""
    coeffs = [RationalPoly() for _ in range(order + 1)]
    for mono, c in mu.terms.items():
        exps = dict(mono)
        j = exps.pop(big, 0)
        if small is not None:
            a = exps.get(small, 0)
            if a < j:
                raise NegativePowerError(
                    f"monomial {mono} has {big}^{j} but only {small}^{a}")
            exps[small] = a - j
        power = k - j
        if power < 0:
            raise NegativePowerError(f"monomial {mono} outgrows t^{k}")
        if power <= order:
            coeffs[power] = coeffs[power] + RationalPoly({tuple(exps.items()): c})
    return PowerSeries(symbol, tuple(coeffs), order)


def _assemble(moment, big, small, x, r, symbol, K) -> PowerSeries:
    r_poly = _r_poly(r)
    total = PowerSeries.from_coefficients(symbol, [], K)
    # terms with k > 2K start at t^(k - floor(k/2)) > K
    for k in range(0, 2 * K + 1):
        mu = moment(k)
        if mu.is_zero():
            continue
        series = _moment_as_series(mu, k, big, small, symbol, K)
        weight = rising_binomial_poly(r_poly, k) * (-1) ** k
        total = total + series * binomial_series(r_poly + (k + 1), x, symbol, K) * weight
    return total


@lru_cache(maxsize=None)
def _binomial_np_series_cached(r: Order, K: int) -> PowerSeries:
    shifted = lambda k: binomial_moment_poly(k).substitute({"n": _n - 1})
    return _assemble(shifted, "n", "p", _q, r, "1/(np)", K).to_q_form()


def binomial_np_series(r: Order = None, K: int = 5) -> PowerSeries:
    """Series of ``(np)**r * f_r(n)`` in ``t = 1/(np)``, coefficients in ``q`` (and ``r``).

    ``r=None`` keeps ``r`` symbolic; integers and Fractions are substituted.
    """
    if K < 0:
        raise PolyError(f"truncation order must be >= 0, got {K}")
    if isinstance(r, float) and r.is_integer():
        r = int(r)
    return _binomial_np_series_cached(r if r is None else Fraction(r), K)


@lru_cache(maxsize=None)
def _poisson_m_series_cached(r: Order, K: int) -> PowerSeries:
    return _assemble(poisson_moment_poly, "m", None, const(1), r, "1/m", K)


def poisson_m_series(r: Order = None, K: int = 2) -> PowerSeries:
    """Series of ``m**r * g_r`` in ``t = 1/m`` with coefficients in ``r``."""
    if K < 0:
        raise PolyError(f"truncation order must be >= 0, got {K}")
    if isinstance(r, float) and r.is_integer():
        r = int(r)
    return _poisson_m_series_cached(r if r is None else Fraction(r), K)


# Coefficients of 1/(np)^k, k = 1, 2, ... for r = 1, 2, 3 and
# for general r; and of 1/m^k for the Poisson law.
GOLDEN_BINOMIAL: dict[object, tuple[str, ...]] = {
    1: ("q", "q*(1+q)", "q*(1+4*q+q^2)", "q*(1+q)*(1+10*q+q^2)",
        "q*(1+26*q+66*q^2+26*q^3+q^4)"),
    2: ("3*q", "q*(4+7*q)", "5*q*(1+6*q+3*q^2)", "q*(6+91*q+146*q^2+31*q^3)"),
    3: ("6*q", "5*q*(2+5*q)", "15*q*(1+8*q+6*q^2)", "7*q*(3+58*q+128*q^2+43*q^3)"),
    None: ("r*(r+1)*q/2", "r*(r+1)*(r+2)*q*(4+q+3*r*q)/24"),
}

GOLDEN_POISSON: tuple[str, ...] = ("r*(r+1)/2", "r*(10+21*r+14*r^2+3*r^3)/24")


def golden_series(distribution: str, r: Order = None) -> tuple[RationalPoly, ...]:
    """Golden coefficients for orders 1, 2, ... (the order-0 coefficient is 1)."""
    if distribution == "binomial":
        key = None if r is None else int(r) if Fraction(r).denominator == 1 else r
        if key not in GOLDEN_BINOMIAL:
            raise KeyError(f"no golden coefficients for binomial r={r}")
        texts = GOLDEN_BINOMIAL[key]
    elif distribution == "poisson":
        if r is not None:
            raise KeyError("golden Poisson coefficients are for symbolic r only")
        texts = GOLDEN_POISSON
    else:
        raise KeyError(f"unknown distribution {distribution!r}")
    return tuple(parse_poly(t) for t in texts)


def check_against_golden(distribution: str, r: Order, K: int) -> list[tuple[int, RationalPoly, RationalPoly | None, bool | None]]:
    """Compare computed coefficients with the golden ones.

    Returns ``(k, computed, golden, passed)`` for ``k = 0..K``; ``golden`` and
    ``passed`` are None past the golden range.
    """
    golden = (const(1),) + golden_series(distribution, r)
    series = binomial_np_series(r, K) if distribution == "binomial" else poisson_m_series(r, K)
    rows = []
    for k, computed in enumerate(series.coefficients):
        expected = golden[k] if k < len(golden) else None
        rows.append((k, computed, expected, None if expected is None else computed == expected))
    return rows
