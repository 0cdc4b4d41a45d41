"""Reference values of inverse moments, independent of the asymptotic series.

Two routes: direct summation of the defining series (exact in rational
arithmetic, or log-space terms plus correctly rounded summation in floats)
and quadrature of the integral representation

    f_r(n) = np / Gamma(r+1) * int_0^inf x^r e^-x (q + p e^-x)^(n-1) dx.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal, Union

import numpy as np
from scipy import integrate

from .distributions import (BinomialSpec, MomentQuery, PoissonSpec, binomial_logpmf,
                            poisson_logpmf)
from .errors import ConvergenceError, ValidationError

__all__ = [
    "OracleResult",
    "binomial_inverse_moment_exact",
    "poisson_inverse_moment_exact",
    "binomial_inverse_moment_quadrature",
    "poisson_max_terms",
]

EPS = np.finfo(float).eps


@dataclass(frozen=True)
class OracleResult:
    value: Union[float, Fraction]
    method: Literal["direct_sum", "quadrature"]
    bound: float
    terms_or_nodes: int

    def __post_init__(self):
        if not self.bound >= 0:
            raise ValueError(f"bound must be >= 0, got {self.bound}")
        if isinstance(self.value, float) and not math.isfinite(self.value):
            raise ConvergenceError("nonfinite oracle value")


def _fsum_ascending(terms: np.ndarray) -> float:
    return math.fsum(np.sort(terms))


def _roundoff_bound(terms: np.ndarray, logs: np.ndarray, value: float) -> float:
    # exp(L) inherits |L|*eps relative error from the log-space evaluation
    live = terms > 0
    return float(np.sum(terms[live] * (8.0 + np.abs(logs[live]))) * EPS + EPS * abs(value))


def binomial_inverse_moment_exact(spec: BinomialSpec, query: MomentQuery) -> OracleResult:
    """f_r(n) = sum_{i=1..n} C(n,i) p^i q^(n-i) / i^r.

    Rational mode needs an integer ``r`` and returns a Fraction with zero bound.
    """
    n = spec.n
    if query.mode == "rational":
        if not isinstance(query.r, int):
            raise ValidationError("exact summation needs an integer r")
        p = spec.exact_p()
        q = 1 - p
        value = sum((Fraction(math.comb(n, i)) * p**i * q ** (n - i) / i**query.r
                     for i in range(1, n + 1)), Fraction(0))
        return OracleResult(value, "direct_sum", 0.0, n)
    i = np.arange(1, n + 1, dtype=float)
    logs = binomial_logpmf(n, float(spec.p), float(spec.q), i) - query.r_float * np.log(i)
    terms = np.exp(logs)
    value = _fsum_ascending(terms)
    return OracleResult(value, "direct_sum", _roundoff_bound(terms, logs, value), n)


def poisson_max_terms(m: float) -> int:
    return max(1000, math.ceil(80 * math.sqrt(m) + 40))


def _poisson_start(m: float) -> tuple[int, float]:
    """First summed index and a bound on the skipped left mass.

    Chernoff: ``P(X <= a) <= exp(-m) (e m / a)^a`` for ``0 < a < m``; each skipped
    term is at most its mass because ``s^-r <= 1``.
    """
    start = max(1, math.floor(m - 40 * math.sqrt(m)))
    a = start - 1
    if a < 1:
        return 1, 0.0
    return start, math.exp(-m + a * (1 + math.log(m / a)))


def poisson_inverse_moment_exact(spec: PoissonSpec, query: MomentQuery,
                                 max_terms: int | None = None) -> OracleResult:
    """g_r = sum_{s>=1} e^-m m^s / s! / s^r, truncated with a certified tail.

    Summation starts near ``m - 40 sqrt(m)``; the skipped left mass is bounded
    by a Chernoff estimate.  Past ``S > m - 2`` the masses fall geometrically
    with ratio at most ``m/(S+2)``, and ``1/s^r <= 1/(S+1)^r``, so the tail
    after ``S`` is below ``pmf(S+1) (S+1)^-r / (1 - m/(S+2))``.  Summation
    stops at the first ``S`` where that is under ``tol`` times the partial sum.
    """
    if query.mode != "float":
        raise ValidationError("the Poisson inverse moment is transcendental; use float mode")
    m = float(spec.m)
    cap = max_terms or poisson_max_terms(m)
    start, left = _poisson_start(m)
    s = np.arange(start, start + cap + 1, dtype=float)
    logs = poisson_logpmf(m, s) - query.r_float * np.log(s)
    terms = np.exp(logs)
    partial = np.cumsum(terms)
    # tail after index j (s = S) is bounded through the next term s = S+1
    S = s[:-1]
    ratio = m / (S + 2)
    with np.errstate(divide="ignore"):
        tail = np.where(ratio < 1, terms[1:] / (1 - ratio), np.inf)
    ok = np.nonzero(tail + left <= query.tol * partial[:-1])[0]
    if ok.size == 0:
        raise ConvergenceError(
            f"Poisson tail not below tol={query.tol:g} within {cap} terms (m={m:g})")
    j = int(ok[0])
    kept, kept_logs = terms[: j + 1], logs[: j + 1]
    value = _fsum_ascending(kept)
    bound = float(tail[j]) + left + _roundoff_bound(kept, kept_logs, value)
    return OracleResult(value, "direct_sum", bound, j + 1)


def binomial_inverse_moment_quadrature(spec: BinomialSpec, query: MomentQuery,
                                       rtol: float = 1e-10) -> OracleResult:
    """f_r(n) by adaptive quadrature of the once-integrated-by-parts form.

    With ``c = np + q`` and ``x = y/c`` the bulk of the integrand sits at
    ``y ~ r`` for every n.  ``[0, Y]`` is integrated with QUADPACK's algebraic
    weight ``y**r`` (so non-integer r costs nothing at the origin) and
    ``[Y, inf)`` by the infinite-range rule.  The bound is heuristic: the
    change between the last two refinement levels plus QUADPACK's own
    estimate.
    """
    n, p, q, r = spec.n, float(spec.p), float(spec.q), query.r_float
    c = n * p + q

    def smooth(y):
        u = y / c
        # log(q + p e^-u) = log1p(-p (1 - e^-u))
        return math.exp(-u + (n - 1) * math.log1p(p * math.expm1(-u)))

    def full(y):
        return y**r * smooth(y)

    cut = r + 40.0 + 8.0 * math.sqrt(r + 1.0)
    log_pref = math.log(n * p) - math.lgamma(r + 1.0) - (r + 1.0) * math.log(c)

    levels = []
    evaluations = 0
    for epsrel, limit in ((1e-8, 100), (1e-11, 200), (1e-13, 400)):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            head, head_err, info_h = integrate.quad(smooth, 0.0, cut, weight="alg", wvar=(r, 0.0),
                                                    epsabs=0.0, epsrel=epsrel, limit=limit,
                                                    full_output=True)[:3]
            tail, tail_err, info_t = integrate.quad(full, cut, math.inf, epsabs=0.0,
                                                    epsrel=epsrel, limit=limit,
                                                    full_output=True)[:3]
        evaluations += info_h["neval"] + info_t["neval"]
        levels.append((head + tail, head_err + tail_err))

    scale = math.exp(log_pref)
    value = levels[-1][0] * scale
    bound = (abs(levels[-1][0] - levels[-2][0]) + levels[-1][1]) * scale
    bound += 4 * EPS * abs(value)
    if not math.isfinite(value) or bound > rtol * abs(value):
        raise ConvergenceError(
            f"quadrature refinement did not settle: value={value!r}, bound={bound:.3g}")
    return OracleResult(value, "quadrature", float(bound), evaluations)
