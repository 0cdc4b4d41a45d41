"""Binomial and Poisson parameters, probability masses and central moments.

Float masses are evaluated in log space with Loader's saddle-point split
``log pmf = stirlerr terms - bd0 terms - log sqrt(2 pi ...)``, which keeps
relative errors at a few ulps even for n in the tens of thousands.  Exact
masses use integer binomials and :class:`fractions.Fraction`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Literal, Union

import numpy as np

from .errors import ConvergenceError, ValidationError
from .symbolic import binomial_moment_poly, poisson_moment_poly

__all__ = [
    "BinomialSpec",
    "PoissonSpec",
    "MomentQuery",
    "binomial_pmf",
    "binomial_logpmf",
    "poisson_pmf",
    "poisson_logpmf",
    "binomial_central_moment",
    "poisson_central_moment",
    "binomial_central_moment_at",
    "binomial_central_moment_direct",
    "poisson_central_moment_direct",
    "stirlerr",
    "bd0",
]

Mode = Literal["float", "rational"]
Real = Union[int, float, Fraction]


def _is_rational(x) -> bool:
    return isinstance(x, (int, Rational)) and not isinstance(x, bool)


def _check_mode(mode: str) -> None:
    if mode not in ("float", "rational"):
        raise ValidationError(f"mode must be 'float' or 'rational', got {mode!r}")


@dataclass(frozen=True)
class BinomialSpec:
    """Binomial(n, p).  ``q = 1 - p`` is computed once and stored.

    Pass ``p`` as a Fraction (or int) to enable exact arithmetic.
    """

    n: int
    p: Real
    q: Real = field(init=False)

    def __post_init__(self):
        if isinstance(self.n, bool) or not isinstance(self.n, (int, np.integer)) or self.n < 1:
            raise ValidationError(f"n must be a positive integer, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))
        p = self.p
        if _is_rational(p):
            p = Fraction(p)
        elif isinstance(p, (float, np.floating)):
            p = float(p)
        else:
            raise ValidationError(f"p must be a real number, got {p!r}")
        if not (0 < p <= 1) or (isinstance(p, float) and not math.isfinite(p)):
            raise ValidationError(f"p must lie in (0, 1], got {p!r}")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", 1 - p)

    @property
    def is_exact(self) -> bool:
        return isinstance(self.p, Fraction)

    @property
    def mean(self) -> Real:
        return self.n * self.p

    def exact_p(self) -> Fraction:
        return Fraction(self.p)


@dataclass(frozen=True)
class PoissonSpec:
    m: Real

    def __post_init__(self):
        m = self.m
        if _is_rational(m):
            m = Fraction(m)
        elif isinstance(m, (float, np.floating)):
            m = float(m)
        else:
            raise ValidationError(f"m must be a real number, got {m!r}")
        if not (m > 0) or (isinstance(m, float) and not math.isfinite(m)):
            raise ValidationError(f"m must be positive and finite, got {m!r}")
        object.__setattr__(self, "m", m)

    @property
    def is_exact(self) -> bool:
        return isinstance(self.m, Fraction)

    @property
    def mean(self) -> Real:
        return self.m


@dataclass(frozen=True)
class MomentQuery:
    """Which inverse moment ``E(1/x**r)`` to compute, and how.

    ``tol`` is a relative tolerance for float work that truncates an infinite
    sum or refines a quadrature.
    """

    r: Real
    mode: Mode = "float"
    tol: float = 1e-15

    def __post_init__(self):
        _check_mode(self.mode)
        r = self.r
        if isinstance(r, bool):
            raise ValidationError("r must be a number")
        if _is_rational(r):
            r = Fraction(r)
            if r.denominator == 1:
                r = int(r)
        elif isinstance(r, (float, np.floating)):
            r = float(r)
            if self.mode == "rational":
                if not r.is_integer():
                    raise ValidationError("rational mode needs r as an int or Fraction")
                r = int(r)
        else:
            raise ValidationError(f"r must be a real number, got {r!r}")
        if not (r > 0) or (isinstance(r, float) and not math.isfinite(r)):
            raise ValidationError(f"r must be positive and finite, got {r!r}")
        if not (self.tol > 0 and math.isfinite(self.tol)):
            raise ValidationError(f"tol must be positive, got {self.tol!r}")
        object.__setattr__(self, "r", r)

    @property
    def r_float(self) -> float:
        return float(self.r)


# Loader's saddle-point pieces -------------------------------------------------

# stirlerr(n) = log(n!) - log(sqrt(2 pi n) (n/e)^n), n = 0..15, to full precision
_STIRLERR_TABLE = np.array([
    0.0,
    0.08106146679532726,
    0.0413406959554093,
    0.02767792568499834,
    0.020790672103765093,
    0.016644691189821193,
    0.013876128823070748,
    0.01189670994589177,
    0.010411265261972096,
    0.009255462182712733,
    0.00833056343336287,
    0.007573675487951841,
    0.00694284010720953,
    0.006408994188004207,
    0.0059513701127588475,
    0.005554733551962801,
])
_S0, _S1, _S2, _S3, _S4 = 1 / 12, 1 / 360, 1 / 1260, 1 / 1680, 1 / 1188
_LOG_2PI = math.log(2 * math.pi)


def stirlerr(n):
    """Error of Stirling's formula for log(n!), for integer ``n >= 0`` (array ok)."""
    n = np.asarray(n, dtype=float)
    small = n <= 15
    out = np.empty_like(n)
    out[small] = _STIRLERR_TABLE[n[small].astype(int)]
    big = n[~small]
    nn = big * big
    series = np.where(
        big > 500, (_S0 - _S1 / nn) / big,
        np.where(big > 80, (_S0 - (_S1 - _S2 / nn) / nn) / big,
                 np.where(big > 35, (_S0 - (_S1 - (_S2 - _S3 / nn) / nn) / nn) / big,
                          (_S0 - (_S1 - (_S2 - (_S3 - _S4 / nn) / nn) / nn) / nn) / big)))
    out[~small] = series
    return out


def bd0(x, mu):
    """``x log(x/mu) + mu - x`` without cancellation when ``x`` is near ``mu``."""
    x, mu = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(mu, dtype=float))
    out = np.empty(x.shape)
    near = np.abs(x - mu) < 0.1 * (x + mu)
    far = ~near
    with np.errstate(divide="ignore", invalid="ignore"):
        out[far] = x[far] * np.log(x[far] / mu[far]) + mu[far] - x[far]
    if near.any():
        xn, mn = x[near], mu[near]
        v = (xn - mn) / (xn + mn)
        s = (xn - mn) * v
        ej = 2 * xn * v
        v2 = v * v
        j = 1
        while True:
            ej = ej * v2
            s1 = s + ej / (2 * j + 1)
            if np.array_equal(s1, s):
                break
            s = s1
            j += 1
        out[near] = s
    return out


def binomial_logpmf(n: int, p: float, q: float, i) -> np.ndarray:
    """Log of C(n,i) p^i q^(n-i) for integer ``i`` in [0, n] (array ok)."""
    i = np.atleast_1d(np.asarray(i, dtype=float))
    out = np.empty(i.shape)
    lo, hi = i == 0, i == n
    mid = ~(lo | hi)
    log_q = math.log1p(-p) if p < 0.5 else (math.log(q) if q > 0 else -math.inf)
    out[lo] = n * log_q if n > 0 else 0.0
    out[hi] = n * math.log(p)
    if n == 0:
        out[:] = 0.0
    x = i[mid]
    if x.size:
        lc = (stirlerr(n) - stirlerr(x) - stirlerr(n - x)
              - bd0(x, n * p) - bd0(n - x, n * q))
        out[mid] = lc + 0.5 * (math.log(n) - _LOG_2PI - np.log(x) - np.log(n - x))
    return out


def poisson_logpmf(m: float, s) -> np.ndarray:
    """Log of e^-m m^s / s! for integer ``s >= 0`` (array ok)."""
    s = np.atleast_1d(np.asarray(s, dtype=float))
    out = np.empty(s.shape)
    zero = s == 0
    out[zero] = -m
    x = s[~zero]
    if x.size:
        out[~zero] = -stirlerr(x) - bd0(x, m) - 0.5 * (_LOG_2PI + np.log(x))
    return out


# pmfs -------------------------------------------------------------------------

def binomial_pmf(spec: BinomialSpec, i: int, mode: Mode = "float", positive: bool = False):
    """C(n,i) p^i q^(n-i).

    The weight of the zero-truncated law, divided by ``1 - q**n``, is returned
    only when ``positive=True`` (and then ``i = 0`` is rejected).
    """
    _check_mode(mode)
    if isinstance(i, bool) or not isinstance(i, (int, np.integer)) or not 0 <= i <= spec.n:
        raise ValidationError(f"i must be an integer in [0, {spec.n}], got {i!r}")
    i = int(i)
    if positive and i == 0:
        raise ValidationError("the positive law has no mass at 0")
    n = spec.n
    if mode == "rational":
        p = spec.exact_p()
        q = 1 - p
        value = math.comb(n, i) * p**i * q ** (n - i)
        if positive:
            value /= 1 - q**n
        return value
    p, q = float(spec.p), float(spec.q)
    value = float(np.exp(binomial_logpmf(n, p, q, i)[0]))
    if positive:
        value /= -math.expm1(n * math.log(q)) if q > 0 else 1.0
    if not math.isfinite(value):
        raise ValidationError(f"nonfinite pmf at i={i}")
    return value


def poisson_pmf(spec: PoissonSpec, s: int) -> float:
    if isinstance(s, bool) or not isinstance(s, (int, np.integer)) or s < 0:
        raise ValidationError(f"s must be a nonnegative integer, got {s!r}")
    value = float(np.exp(poisson_logpmf(float(spec.m), int(s))[0]))
    if not math.isfinite(value):
        raise ValidationError(f"nonfinite pmf at s={s}")
    return value


# central moments --------------------------------------------------------------

def binomial_central_moment_at(n: int, p: Real, k: int, mode: Mode = "float"):
    """mu_k(n) from the recursion polynomial; ``n = 0`` is allowed (mu_k(0) = [k == 0]).

    Float mode evaluates exactly at the binary value of ``p`` and rounds once.
    """
    _check_mode(mode)
    if k < 0:
        raise ValidationError(f"k must be >= 0, got {k}")
    value = binomial_moment_poly(k).evaluate({"n": n, "p": Fraction(p)})
    return value if mode == "rational" else float(value)


def binomial_central_moment(spec: BinomialSpec, k: int, mode: Mode = "float"):
    """k-th central moment of Binomial(n, p), including the i = 0 outcome."""
    return binomial_central_moment_at(spec.n, spec.p, k, mode)


def poisson_central_moment(spec: PoissonSpec, k: int, mode: Mode = "float"):
    _check_mode(mode)
    if k < 0:
        raise ValidationError(f"k must be >= 0, got {k}")
    value = poisson_moment_poly(k).evaluate({"m": Fraction(spec.m)})
    return value if mode == "rational" else float(value)


def binomial_central_moment_direct(spec: BinomialSpec, k: int, mode: Mode = "rational"):
    """sum_{i=0..n} C(n,i) p^i q^(n-i) (i - np)^k straight from the definition."""
    _check_mode(mode)
    if mode == "rational":
        p = spec.exact_p()
        q = 1 - p
        mean = spec.n * p
        return sum((math.comb(spec.n, i) * p**i * q ** (spec.n - i) * (i - mean) ** k
                    for i in range(spec.n + 1)), Fraction(0))
    i = np.arange(spec.n + 1)
    w = np.exp(binomial_logpmf(spec.n, float(spec.p), float(spec.q), i))
    return math.fsum(w * (i - spec.n * float(spec.p)) ** k)


def poisson_central_moment_direct(spec: PoissonSpec, k: int, tol: float = 1e-15,
                                  max_terms: int | None = None) -> tuple[float, float]:
    """Truncated sum over s of pmf(s) (s - m)^k; returns ``(value, tail_bound)``.

    Stops at the first ``S > m`` where the remaining tail, bounded by a
    geometric series, is below ``tol`` (absolute).
    """
    m = float(spec.m)
    cap = max_terms or max(1000, math.ceil(m + 40 * math.sqrt(m) + 2 * k + 50))
    s = np.arange(cap + 1, dtype=float)
    terms = np.exp(poisson_logpmf(m, s)) * (s - m) ** k
    for S in range(int(math.floor(m)) + 1, cap):
        # successive tail ratio past S is at most m/(S+2) * (1 + 1/(S+1-m))^k
        rho = m / (S + 2) * (1 + 1 / (S + 1 - m)) ** k
        if rho < 1:
            bound = abs(terms[S + 1]) / (1 - rho)
            if bound < tol:
                return math.fsum(terms[: S + 1]), bound
    raise ConvergenceError(f"tail not below {tol} within {cap} terms")
