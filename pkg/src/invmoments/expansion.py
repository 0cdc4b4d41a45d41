"""Asymptotic series for inverse moments in terms of central moments.

Binomial:  f_r(n) ~ np/(np+q)^(r+1) * sum_k (-1)^k mu_k(n-1) C(r+k, r) / (np+q)^k
Poisson:   g_r    ~ m/(m+1)^(r+1)   * sum_k (-1)^k mu_k(m)   C(r+k, r) / (m+1)^k
General:   sum_s P(s)/s^r ~ 1/xbar^(r+1) * sum_k (-1)^k mu_k C(r+k, r) / xbar^k
                               * E[phi'(-Y/xbar)],  Y ~ Gamma(r+k+1)

In the general form ``phi = log M`` is the cumulant generating function.
Written with the raw integral ``int_0^inf y^(r+k) e^-y phi'(-y/xbar) dy`` the
bracket carries ``1/(Gamma(r+1) k!)``; the change of variables ``y = xbar x``
contributes the extra ``1/xbar`` in the prefactor.

Terms ``mu_k / base^k`` are O(base^-ceil(k/2)), so the odd term ``k = 2j-1``
and the even term ``k = 2j`` share one order.  Error estimates and the
growth test in :func:`auto_truncate` therefore look at these pairs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence, Union

import numpy as np
from scipy import special

from .distributions import (BinomialSpec, MomentQuery, PoissonSpec, binomial_central_moment_at,
                            poisson_central_moment)
from .errors import ConvergenceError, ValidationError

__all__ = [
    "ExpansionReport",
    "GeneralDistributionDescriptor",
    "QuadratureConfig",
    "real_binomial_symbol",
    "binomial_expansion",
    "poisson_expansion",
    "general_expansion",
    "binomial_descriptor",
    "poisson_descriptor",
    "auto_truncate",
    "SMALL_PARAMETER",
]

Number = Union[float, Fraction]

# expansion parameter at or below which a validity warning is attached
SMALL_PARAMETER = 2


@dataclass(frozen=True)
class ExpansionReport:
    """Truncated series ``value = prefactor * sum(terms)``.

    ``terms`` are the bracketed summands ``(k, t_k)`` for ``k < order_used``;
    ``lookahead`` holds the first omitted ones that feed ``error_estimate``.
    """

    value: Number
    terms: tuple[tuple[int, Number], ...]
    order_used: int
    error_estimate: float
    warnings: tuple[str, ...]
    prefactor: Number
    expansion_parameter: Number
    method: str
    lookahead: tuple[tuple[int, Number], ...] = ()

    def contributions(self) -> list[float]:
        """Each retained term with the prefactor applied."""
        return [float(self.prefactor * t) for _, t in self.terms]


@dataclass(frozen=True)
class QuadratureConfig:
    """Gauss-Laguerre refinement for the general expansion.

    Node counts double from ``start_nodes`` until two successive rules agree
    to ``rtol``.
    """

    rtol: float = 1e-13
    start_nodes: int = 16
    max_nodes: int = 512


@dataclass(frozen=True)
class GeneralDistributionDescriptor:
    """Mean, central moments and cumulant-generating-function derivative of a law on 1, 2, ...

    ``central_moments`` is a callable ``k -> mu_k`` or a sequence indexed by k.
    ``cumulant_derivative`` must accept numpy arrays of nonpositive arguments.
    """

    mean: float
    central_moments: Union[Callable[[int], float], Sequence[float]]
    cumulant_derivative: Callable[[np.ndarray], np.ndarray]
    name: str = "general"

    def __post_init__(self):
        if not (self.mean > 0 and math.isfinite(self.mean)):
            raise ValidationError(f"mean must be positive and finite, got {self.mean!r}")
        if self.moment(0) != 1:
            raise ValidationError(f"descriptor has mu_0 = {self.moment(0)!r}, expected 1")
        if self.moment(1) != 0:
            raise ValidationError(f"descriptor has mu_1 = {self.moment(1)!r}, expected 0")

    def moment(self, k: int) -> float:
        if callable(self.central_moments):
            return self.central_moments(k)
        if k >= len(self.central_moments):
            raise ValidationError(f"descriptor supplies no central moment of order {k}")
        return self.central_moments[k]


def real_binomial_symbol(r, k: int, mode: str = "float") -> Number:
    """C(r+k, r) = (r+1)(r+2)...(r+k)/k! for real ``r``."""
    if k < 0:
        raise ValidationError(f"k must be >= 0, got {k}")
    if mode == "rational":
        r = Fraction(r)
        out = Fraction(1)
    else:
        r = float(r)
        out = 1.0
    for i in range(1, k + 1):
        out = out * (r + i) / i
    return out


def _check_order(order) -> int:
    if isinstance(order, bool) or not isinstance(order, (int, np.integer)) or order < 1:
        raise ValidationError(f"order must be an integer >= 1, got {order!r}")
    return int(order)


def _pair_magnitude(terms: Sequence[Number], order: int) -> float:
    """Size of the omitted terms of the leading omitted order.

    For even ``order`` that is ``|t_order|``; for odd ``order`` the companion
    ``t_{order+1}`` is of the same order in the large parameter and is added.
    """
    est = abs(float(terms[order]))
    if order % 2 == 1:
        est += abs(float(terms[order + 1]))
    return est


def _report(prefactor, all_terms, order, parameter, method, warns, exact=False) -> ExpansionReport:
    retained = all_terms[:order]
    if exact:
        value = prefactor * sum(retained, Fraction(0))
    else:
        value = prefactor * math.fsum(float(t) for t in retained)
    estimate = abs(float(prefactor)) * _pair_magnitude(all_terms, order)
    look_end = order + (2 if order % 2 == 1 else 1)
    return ExpansionReport(
        value=value,
        terms=tuple(enumerate(retained)),
        order_used=order,
        error_estimate=estimate,
        warnings=tuple(warns),
        prefactor=prefactor,
        expansion_parameter=parameter,
        method=method,
        lookahead=tuple((k, all_terms[k]) for k in range(order, look_end)),
    )


def _exact_mode(query: MomentQuery) -> bool:
    if query.mode != "rational":
        return False
    if not isinstance(query.r, int):
        raise ValidationError("rational expansions need an integer r")
    return True


def _small_parameter_warning(name: str, value) -> list[str]:
    if value <= SMALL_PARAMETER:
        return [f"expansion parameter {name} = {float(value):.6g} <= {SMALL_PARAMETER}; "
                "the asymptotic series is not expected to be accurate"]
    return []


def _binomial_terms(spec: BinomialSpec, query: MomentQuery, count: int, exact: bool):
    p = spec.exact_p()
    base = spec.n * p + (1 - p)
    out = []
    for k in range(count):
        # exact ratio first: mu_k(n-1) and base^k can each overflow a float
        ratio = binomial_central_moment_at(spec.n - 1, p, k, "rational") / base**k
        sign = -1 if k % 2 and ratio != 0 else 1
        if exact:
            out.append(sign * ratio * real_binomial_symbol(query.r, k, "rational"))
        else:
            out.append(sign * float(ratio) * real_binomial_symbol(query.r, k))
    return base, out


def binomial_expansion(spec: BinomialSpec, query: MomentQuery, order: int) -> ExpansionReport:
    """Keep ``order`` terms of the (np+q)-series for f_r(n)."""
    order = _check_order(order)
    exact = _exact_mode(query)
    base, terms = _binomial_terms(spec, query, order + 2, exact)
    if exact:
        prefactor = spec.n * spec.exact_p() / base ** (query.r + 1)
    else:
        prefactor = math.exp(math.log(spec.n * float(spec.p)) - (query.r_float + 1) * math.log(base))
    warns = _small_parameter_warning("np+q", base)
    return _report(prefactor, terms, order, base if exact else float(base), "binomial", warns, exact)


def _poisson_terms(spec: PoissonSpec, query: MomentQuery, count: int, exact: bool):
    m = Fraction(spec.m)
    base = m + 1
    out = []
    for k in range(count):
        ratio = poisson_central_moment(spec, k, "rational") / base**k
        sign = -1 if k % 2 and ratio != 0 else 1
        if exact:
            out.append(sign * ratio * real_binomial_symbol(query.r, k, "rational"))
        else:
            out.append(sign * float(ratio) * real_binomial_symbol(query.r, k))
    return base, out


def poisson_expansion(spec: PoissonSpec, query: MomentQuery, order: int) -> ExpansionReport:
    """Keep ``order`` terms of the (m+1)-series for g_r."""
    order = _check_order(order)
    exact = _exact_mode(query)
    base, terms = _poisson_terms(spec, query, order + 2, exact)
    if exact:
        prefactor = Fraction(spec.m) / base ** (query.r + 1)
    else:
        prefactor = math.exp(math.log(float(spec.m)) - (query.r_float + 1) * math.log(float(base)))
    warns = _small_parameter_warning("m+1", base)
    return _report(prefactor, terms, order, base if exact else float(base), "poisson", warns, exact)


@lru_cache(maxsize=256)
def _laguerre_rule(nodes: int, alpha: float):
    x, w = special.roots_genlaguerre(nodes, alpha)
    keep = w > 0
    x, w = x[keep], w[keep]
    return x, w / math.fsum(w)


def _gamma_average(fn, alpha: float, config: QuadratureConfig) -> tuple[float, int]:
    """E[fn(Y)] for Y ~ Gamma(alpha + 1) by refined Gauss-Laguerre rules."""
    nodes = config.start_nodes
    x, w = _laguerre_rule(nodes, alpha)
    prev = math.fsum(w * fn(x))
    while nodes < config.max_nodes:
        nodes *= 2
        x, w = _laguerre_rule(nodes, alpha)
        cur = math.fsum(w * fn(x))
        if abs(cur - prev) <= config.rtol * max(abs(cur), 1e-300):
            return cur, nodes
        prev = cur
    raise ConvergenceError(
        f"Gauss-Laguerre averages did not agree to {config.rtol:g} with {config.max_nodes} nodes "
        f"(alpha={alpha:g})")


def general_expansion(desc: GeneralDistributionDescriptor, query: MomentQuery, order: int,
                      quadrature: QuadratureConfig | None = None) -> ExpansionReport:
    """Keep ``order`` terms of the cumulant-derivative series in powers of 1/mean.

    Terms with ``mu_k = 0`` are exactly zero and skip the quadrature.
    """
    order = _check_order(order)
    if query.mode != "float":
        raise ValidationError("the general expansion is float-only")
    config = quadrature or QuadratureConfig()
    xbar = float(desc.mean)
    r = query.r_float

    def phi_prime(y):
        return np.asarray(desc.cumulant_derivative(-np.asarray(y) / xbar), dtype=float)

    terms = []
    for k in range(order + 2):
        mu = float(desc.moment(k))
        if mu == 0.0:
            terms.append(0.0)
            continue
        average, _ = _gamma_average(phi_prime, r + k, config)
        sign = -1.0 if k % 2 else 1.0
        terms.append(sign * mu / xbar**k * real_binomial_symbol(r, k) * average)
    prefactor = xbar ** -(r + 1)
    warns = _small_parameter_warning("mean", xbar)
    return _report(prefactor, terms, order, xbar, f"general:{desc.name}", warns)


def poisson_descriptor(spec: PoissonSpec) -> GeneralDistributionDescriptor:
    """phi(t) = m (e^t - 1), so phi'(t) = m e^t."""
    m = float(spec.m)
    return GeneralDistributionDescriptor(
        mean=m,
        central_moments=lambda k: poisson_central_moment(spec, k),
        cumulant_derivative=lambda t: m * np.exp(t),
        name="poisson",
    )


def binomial_descriptor(spec: BinomialSpec) -> GeneralDistributionDescriptor:
    """phi(t) = n log(q + p e^t), so phi'(t) = np e^t / (q + p e^t)."""
    n, p, q = spec.n, float(spec.p), float(spec.q)
    return GeneralDistributionDescriptor(
        mean=n * p,
        central_moments=lambda k: binomial_central_moment_at(n, spec.p, k),
        # np / (p + q e^-t), written to stay finite for very negative t
        cumulant_derivative=lambda t: n * p / (p + q * np.exp(-t)),
        name="binomial",
    )


def _pair_magnitudes(terms: Sequence[Number]) -> list[float]:
    groups = [abs(float(terms[0]))]
    for g in range(1, (len(terms) + 1) // 2):
        groups.append(abs(float(terms[2 * g - 1])) + abs(float(terms[2 * g])))
    return groups


def auto_truncate(target, query: MomentQuery, max_order: int, **kwargs) -> ExpansionReport:
    """Stop the series where it starts to grow, or at ``max_order`` terms.

    Growth is judged on same-order pairs ``(t_{2g-1}, t_{2g})``: the series is
    cut just before the first pair whose combined magnitude exceeds the
    previous pair's (the leading term counts as pair 0).
    """
    max_order = _check_order(max_order)
    if isinstance(target, BinomialSpec):
        run = lambda order: binomial_expansion(target, query, order)
    elif isinstance(target, PoissonSpec):
        run = lambda order: poisson_expansion(target, query, order)
    elif isinstance(target, GeneralDistributionDescriptor):
        run = lambda order: general_expansion(target, query, order, **kwargs)
    else:
        raise ValidationError(f"cannot expand {type(target).__name__}")

    full = run(max_order)
    all_terms = [t for _, t in full.terms] + [t for _, t in full.lookahead]
    groups = _pair_magnitudes(all_terms)
    cut = None
    for g in range(1, len(groups)):
        if groups[g] > groups[g - 1]:
            cut = 2 * g - 1
            break
    if cut is None or cut >= max_order:
        return full
    report = run(cut)
    note = (f"series terms grow from k={cut} on; truncated after {cut} of {max_order} "
            "requested terms")
    return ExpansionReport(**{**report.__dict__, "warnings": report.warnings + (note,)})
