"""Central moments of the binomial and Poisson laws as exact polynomials."""

from __future__ import annotations

import threading
from dataclasses import dataclass

from .poly import RationalPoly, sym

__all__ = [
    "binomial_moment_poly",
    "poisson_moment_poly",
    "DegreeReport",
    "degree_report",
    "double_factorial",
]

_n, _p, _m = sym("n"), sym("p"), sym("m")


class _RecursionCache:
    """Memo of ``mu_0, mu_1, ...`` grown on demand by a three-term recursion."""

    def __init__(self, step):
        self._step = step
        self._values = [RationalPoly.constant(1), RationalPoly()]
        self._lock = threading.Lock()

    def get(self, k: int) -> RationalPoly:
        if k < 0:
            raise ValueError(f"moment order must be >= 0, got {k}")
        with self._lock:
            while len(self._values) <= k:
                j = len(self._values) - 1
                self._values.append(self._step(j, self._values[j], self._values[j - 1]))
            return self._values[k]


def _binomial_step(k, mu_k, mu_km1):
    # mu_{k+1} = p(1-p) (d mu_k/dp + n k mu_{k-1})
    return _p * (1 - _p) * (mu_k.differentiate("p") + _n * k * mu_km1)


def _poisson_step(k, mu_k, mu_km1):
    # mu_{k+1} = m (d mu_k/dm + k mu_{k-1})
    return _m * (mu_k.differentiate("m") + k * mu_km1)


_BINOMIAL = _RecursionCache(_binomial_step)
_POISSON = _RecursionCache(_poisson_step)


def binomial_moment_poly(k: int) -> RationalPoly:
    """k-th central moment of Binomial(n, p) as a polynomial in ``n`` and ``p``."""
    return _BINOMIAL.get(k)


def poisson_moment_poly(k: int) -> RationalPoly:
    """k-th central moment of Poisson(m) as a polynomial in ``m``."""
    return _POISSON.get(k)


def double_factorial(k: int) -> int:
    out = 1
    while k > 1:
        out *= k
        k -= 2
    return out


@dataclass(frozen=True)
class DegreeReport:
    k: int
    is_zero: bool
    deg_p: int
    deg_n: int
    leading_n_coefficient: RationalPoly
    leading_law_holds: bool | None  # None for odd k, where no closed form is claimed

    @property
    def expected_deg_n(self) -> int:
        return self.k // 2


def degree_report(k: int) -> DegreeReport:
    """Degrees of the binomial central moment and its top coefficient in ``n``.

    For even ``k = 2j`` the coefficient of ``n**j`` should be
    ``(2j-1)!! (p(1-p))**j``.
    """
    mu = binomial_moment_poly(k)
    deg_n = mu.degree("n")
    lead = mu.coefficient("n", k // 2)
    law = None
    if k % 2 == 0:
        j = k // 2
        law = lead == double_factorial(2 * j - 1) * (_p * (1 - _p)) ** j
    return DegreeReport(k=k, is_zero=mu.is_zero(), deg_p=mu.degree("p"), deg_n=deg_n,
                        leading_n_coefficient=lead, leading_law_holds=law)

