"""Truncated power series in a single expansion variable."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .poly import PolyError, RationalPoly, Scalar

__all__ = ["PowerSeries", "TruncationError", "binomial_series"]

EXPANSION_SYMBOLS = ("1/(np)", "1/m", "1/(np+q)", "1/(m+1)")


class TruncationError(PolyError):
    pass


@dataclass(frozen=True)
class PowerSeries:
    """``sum_k coefficients[k] * t**k + O(t**(truncation_order+1))``.

    ``t`` is named by ``expansion_symbol``; coefficients are polynomials in
    the remaining symbols.
    """

    expansion_symbol: str
    coefficients: tuple[RationalPoly, ...]
    truncation_order: int

    def __post_init__(self):
        if self.expansion_symbol not in EXPANSION_SYMBOLS:
            raise PolyError(f"unknown expansion symbol {self.expansion_symbol!r}")
        coeffs = tuple(RationalPoly._coerce(c) for c in self.coefficients)
        if len(coeffs) != self.truncation_order + 1:
            raise TruncationError(
                f"{len(coeffs)} coefficients for truncation order {self.truncation_order}")
        object.__setattr__(self, "coefficients", coeffs)

    @classmethod
    def from_coefficients(cls, symbol: str, coeffs: Sequence, order: int) -> PowerSeries:
        coeffs = list(coeffs)[: order + 1]
        coeffs += [RationalPoly()] * (order + 1 - len(coeffs))
        return cls(symbol, tuple(coeffs), order)

    def _check(self, other: PowerSeries) -> None:
        if other.expansion_symbol != self.expansion_symbol:
            raise PolyError("series in different expansion symbols")
        if other.truncation_order != self.truncation_order:
            raise TruncationError("series truncated at different orders")

    def __getitem__(self, k: int) -> RationalPoly:
        return self.coefficients[k]

    def __add__(self, other: PowerSeries) -> PowerSeries:
        self._check(other)
        return PowerSeries(self.expansion_symbol,
                           tuple(a + b for a, b in zip(self.coefficients, other.coefficients)),
                           self.truncation_order)

    def __mul__(self, other) -> PowerSeries:
        if not isinstance(other, PowerSeries):
            return self.scale(other)
        self._check(other)
        K = self.truncation_order
        out = [RationalPoly() for _ in range(K + 1)]
        for i, a in enumerate(self.coefficients):
            if a.is_zero():
                continue
            for j in range(K + 1 - i):
                b = other.coefficients[j]
                if not b.is_zero():
                    out[i + j] = out[i + j] + a * b
        return PowerSeries(self.expansion_symbol, tuple(out), K)

    __rmul__ = __mul__

    def scale(self, factor: RationalPoly | Scalar) -> PowerSeries:
        return PowerSeries(self.expansion_symbol,
                           tuple(c * factor for c in self.coefficients),
                           self.truncation_order)

    def shift(self, j: int) -> PowerSeries:
        """Multiply by ``t**j``, dropping what falls past the truncation order."""
        if j < 0:
            raise TruncationError("negative shift would need a Laurent series")
        K = self.truncation_order
        out = [RationalPoly()] * j + list(self.coefficients[: K + 1 - j])
        return PowerSeries(self.expansion_symbol, tuple(out[: K + 1]), K)

    def map_coefficients(self, fn) -> PowerSeries:
        return PowerSeries(self.expansion_symbol,
                           tuple(fn(c) for c in self.coefficients),
                           self.truncation_order)

    def substitute(self, mapping) -> PowerSeries:
        return self.map_coefficients(lambda c: c.substitute(mapping))

    def to_q_form(self) -> PowerSeries:
        return self.map_coefficients(RationalPoly.to_q_form)

    def evaluate(self, t, bindings=None):
        """Sum the truncated series at expansion variable ``t`` (Horner)."""
        bindings = dict(bindings or {})
        total = 0
        for c in reversed(self.coefficients):
            total = total * t + c.evaluate(bindings)
        return total

    def to_text(self) -> str:
        """Canonical text, one ``k: coefficient`` line per order."""
        lines = [f"# series in t = {self.expansion_symbol}, truncated after t^{self.truncation_order}"]
        lines += [f"{k}: {c}" for k, c in enumerate(self.coefficients)]
        return "\n".join(lines)

    @classmethod
    def from_text(cls, text: str) -> PowerSeries:
        from .poly import parse_poly

        lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
        header = lines[0]
        if not header.startswith("# series in t = "):
            raise PolyError("missing series header")
        symbol = header[len("# series in t = "):].split(",")[0].strip()
        coeffs = []
        for k, ln in enumerate(lines[1:]):
            idx, body = ln.split(":", 1)
            if int(idx) != k:
                raise PolyError(f"series line {ln!r} out of order")
            coeffs.append(parse_poly(body))
        return cls(symbol, tuple(coeffs), len(coeffs) - 1)


def binomial_series(exponent: RationalPoly | Scalar, x: RationalPoly | Scalar,
                    symbol: str, order: int) -> PowerSeries:
    """``(1 + x*t)**(-exponent)`` truncated at ``t**order``.

    Uses ``1/(1+y)**a = sum_j (-y)**j (a)(a+1)...(a+j-1)/j!``, valid for a
    symbolic exponent ``a``.
    """
    a = RationalPoly._coerce(exponent)
    x = RationalPoly._coerce(x)
    coeffs = [RationalPoly.constant(1)]
    rising = RationalPoly.constant(1)
    xpow = RationalPoly.constant(1)
    for j in range(1, order + 1):
        rising = rising * (a + (j - 1)) / j
        xpow = xpow * (-x)
        coeffs.append(rising * xpow)
    return PowerSeries(symbol, tuple(coeffs), order)
