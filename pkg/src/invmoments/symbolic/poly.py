"""Exact multivariate polynomials with rational coefficients.

A :class:`RationalPoly` is an immutable mapping from monomials to
:class:`fractions.Fraction` coefficients.  Monomials are tuples of
``(symbol, exponent)`` pairs sorted by a fixed symbol rank, so two equal
polynomials always have identical term tables.

The success probability ``p`` and its complement ``q`` are tied by
``p + q = 1``.  Whenever an operation would leave both in one polynomial,
``q`` is rewritten as ``1 - p``; a polynomial in ``q`` alone is kept as is so
results can be presented the way they are usually printed.  Equality and
hashing compare the ``p``-forms.
"""

from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Iterator, Mapping, Union

__all__ = [
    "RationalPoly",
    "PolyError",
    "MissingBindingError",
    "SubstitutionCycleError",
    "parse_poly",
    "sym",
    "const",
]

SYMBOL_RANK = {"n": 0, "p": 1, "q": 2, "m": 3, "r": 4}

Monomial = tuple  # tuple[tuple[str, int], ...]
Scalar = Union[int, Fraction]


class PolyError(ValueError):
    pass


class MissingBindingError(PolyError, KeyError):
    pass


class SubstitutionCycleError(PolyError):
    pass


def _rank(name: str) -> tuple:
    return (SYMBOL_RANK.get(name, len(SYMBOL_RANK)), name)


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    exps = dict(a)
    for s, e in b:
        exps[s] = exps.get(s, 0) + e
    return tuple(sorted(exps.items(), key=lambda item: _rank(item[0])))


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, Rational)):
        return Fraction(c)
    raise TypeError(f"coefficients must be rational, got {type(c).__name__}")


class RationalPoly:
    """Immutable polynomial over named symbols with exact rational coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Scalar] | None = None):
        clean: dict[Monomial, Fraction] = {}
        for mono, c in (terms or {}).items():
            c = _as_fraction(c)
            if c == 0:
                continue
            mono = tuple(sorted(((s, e) for s, e in mono if e != 0), key=lambda it: _rank(it[0])))
            if any(e < 0 for _, e in mono):
                raise PolyError(f"negative exponent in monomial {mono}")
            c = clean.get(mono, 0) + c
            if c == 0:
                clean.pop(mono, None)
            else:
                clean[mono] = c
        self._terms = clean
        self._hash = None
        if "p" in self.symbols and "q" in self.symbols:
            self._terms = self._eliminate("q", RationalPoly({(): 1, (("p", 1),): -1}))._terms

    # construction helpers

    @classmethod
    def constant(cls, c: Scalar) -> RationalPoly:
        return cls({(): c})

    @classmethod
    def symbol(cls, name: str) -> RationalPoly:
        if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", name):
            raise PolyError(f"bad symbol name {name!r}")
        return cls({((name, 1),): 1})

    @classmethod
    def _coerce(cls, other) -> RationalPoly:
        if isinstance(other, RationalPoly):
            return other
        return cls.constant(_as_fraction(other))

    # inspection

    @property
    def terms(self) -> dict[Monomial, Fraction]:
        return dict(self._terms)

    @property
    def symbols(self) -> tuple[str, ...]:
        names = {s for mono in self._terms for s, _ in mono}
        return tuple(sorted(names, key=_rank))

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(not mono for mono in self._terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise PolyError("polynomial is not constant")
        return self._terms.get((), Fraction(0))

    def degree(self, name: str | None = None) -> int:
        """Degree in ``name``, or total degree.  The zero polynomial has degree -1."""
        if not self._terms:
            return -1
        if name is None:
            return max(sum(e for _, e in mono) for mono in self._terms)
        return max(dict(mono).get(name, 0) for mono in self._terms)

    def coefficient(self, name: str, power: int) -> RationalPoly:
        """Coefficient of ``name**power`` as a polynomial in the other symbols."""
        out: dict[Monomial, Fraction] = {}
        for mono, c in self._terms.items():
            exps = dict(mono)
            if exps.get(name, 0) == power:
                exps.pop(name, None)
                out[tuple(exps.items())] = c
        return RationalPoly(out)

    def content(self) -> Fraction:
        """Positive rational content: gcd of numerators over lcm of denominators."""
        from math import gcd, lcm

        if not self._terms:
            return Fraction(0)
        num = 0
        den = 1
        for c in self._terms.values():
            num = gcd(num, c.numerator)
            den = lcm(den, c.denominator)
        return Fraction(num, den)

    # arithmetic

    def __add__(self, other) -> RationalPoly:
        other = self._coerce(other)
        out = dict(self._terms)
        for mono, c in other._terms.items():
            out[mono] = out.get(mono, 0) + c
        return RationalPoly(out)

    __radd__ = __add__

    def __neg__(self) -> RationalPoly:
        return RationalPoly({mono: -c for mono, c in self._terms.items()})

    def __sub__(self, other) -> RationalPoly:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> RationalPoly:
        return self._coerce(other) - self

    def __mul__(self, other) -> RationalPoly:
        other = self._coerce(other)
        out: dict[Monomial, Fraction] = {}
        for ma, ca in self._terms.items():
            for mb, cb in other._terms.items():
                mono = _mono_mul(ma, mb)
                out[mono] = out.get(mono, 0) + ca * cb
        return RationalPoly(out)

    __rmul__ = __mul__

    def __truediv__(self, other) -> RationalPoly:
        if isinstance(other, RationalPoly):
            other = other.constant_value()
        other = _as_fraction(other)
        if other == 0:
            raise ZeroDivisionError("polynomial division by zero")
        return RationalPoly({mono: c / other for mono, c in self._terms.items()})

    def __pow__(self, k: int) -> RationalPoly:
        if not isinstance(k, int) or k < 0:
            raise PolyError("only nonnegative integer powers are supported")
        result = RationalPoly.constant(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def differentiate(self, name: str) -> RationalPoly:
        out: dict[Monomial, Fraction] = {}
        for mono, c in self._terms.items():
            exps = dict(mono)
            e = exps.get(name, 0)
            if e == 0:
                continue
            exps[name] = e - 1
            key = tuple(exps.items())
            out[key] = out.get(key, 0) + c * e
        return RationalPoly(out)

    def substitute(self, mapping: Mapping[str, RationalPoly | Scalar]) -> RationalPoly:
        """Simultaneously replace symbols by polynomials.

        A replacement may mention the symbol it replaces (``n -> n - 1``), but
        not another symbol that is itself being replaced.
        """
        repl = {s: self._coerce(v) for s, v in mapping.items()}
        for s, v in repl.items():
            clash = (set(v.symbols) & set(repl)) - {s}
            if clash:
                raise SubstitutionCycleError(
                    f"replacement for {s!r} refers to {sorted(clash)}, which are also substituted")
        return self._substitute(repl)

    def _eliminate(self, name: str, value: RationalPoly) -> RationalPoly:
        # bypasses the constructor's p/q normalisation to avoid recursion
        result: dict[Monomial, Fraction] = {}
        cache: dict[int, dict[Monomial, Fraction]] = {0: {(): Fraction(1)}}
        for mono, c in self._terms.items():
            exps = dict(mono)
            e = exps.pop(name, 0)
            rest = tuple(exps.items())
            if e not in cache:
                acc = {(): Fraction(1)}
                for _ in range(e):
                    nxt: dict[Monomial, Fraction] = {}
                    for ma, ca in acc.items():
                        for mb, cb in value._terms.items():
                            mm = _mono_mul(ma, mb)
                            nxt[mm] = nxt.get(mm, 0) + ca * cb
                    acc = nxt
                cache[e] = acc
            for mb, cb in cache[e].items():
                mm = _mono_mul(rest, mb)
                result[mm] = result.get(mm, 0) + c * cb
        out = RationalPoly.__new__(RationalPoly)
        out._terms = {m: c for m, c in result.items() if c != 0}
        out._hash = None
        return out

    def _substitute(self, repl: dict[str, RationalPoly]) -> RationalPoly:
        total = RationalPoly()
        powers: dict[tuple[str, int], RationalPoly] = {}
        for mono, c in self._terms.items():
            term = RationalPoly({(): c})
            keep = []
            for s, e in mono:
                if s in repl:
                    key = (s, e)
                    if key not in powers:
                        powers[key] = repl[s] ** e
                    term = term * powers[key]
                else:
                    keep.append((s, e))
            total = total + term * RationalPoly({tuple(keep): 1})
        return total

    def evaluate(self, bindings: Mapping[str, object]):
        """Evaluate at concrete values.

        Exact when every bound value is an ``int`` or ``Fraction``; otherwise
        the result is whatever the bound values' arithmetic yields (``float``).
        """
        missing = [s for s in self.symbols if s not in bindings]
        if missing:
            raise MissingBindingError(f"no value bound for {missing}")
        total = 0
        for mono, c in self._terms.items():
            val = c
            for s, e in mono:
                val = val * bindings[s] ** e
            total = total + val
        if isinstance(total, int):
            return Fraction(total)
        return total

    # q-form / p-form presentation

    def to_p_form(self) -> RationalPoly:
        if "q" not in self.symbols:
            return self
        return self._eliminate("q", RationalPoly({(): 1, (("p", 1),): -1}))

    def to_q_form(self) -> RationalPoly:
        if "p" not in self.symbols:
            return self
        return self._eliminate("p", RationalPoly({(): 1, (("q", 1),): -1}))

    # comparison, hashing, text

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = RationalPoly.constant(other)
        if not isinstance(other, RationalPoly):
            return NotImplemented
        return self.to_p_form()._terms == other.to_p_form()._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.to_p_form()._terms.items()))
        return self._hash

    def _sorted_terms(self) -> Iterator[tuple[Monomial, Fraction]]:
        names = self.symbols

        def key(item):
            exps = dict(item[0])
            return tuple(exps.get(s, 0) for s in names)

        return iter(sorted(self._terms.items(), key=key, reverse=True))

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for mono, c in self._sorted_terms():
            factors = [s if e == 1 else f"{s}^{e}" for s, e in mono]
            mag = abs(c)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(mag)] + factors)
            parts.append(("-" if c < 0 else "+", body))
        text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self) -> str:
        return f"RationalPoly('{self}')"


def sym(name: str) -> RationalPoly:
    return RationalPoly.symbol(name)


def const(c: Scalar) -> RationalPoly:
    return RationalPoly.constant(c)


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


def _tokens(text: str) -> list[str]:
    out = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise PolyError(f"cannot parse {text!r} at position {pos}")
        out.append(m.group(m.lastindex))
        pos = m.end()
    return out


def parse_poly(text: str) -> RationalPoly:
    """Parse the canonical text form (and factored forms such as ``q*(1+q)^2``).

    Grammar: sums and differences of products; factors are integers, symbols
    or parenthesised expressions, optionally raised by ``^`` (or ``**``) to a
    nonnegative integer; ``/`` divides by an integer constant.
    """
    toks = _tokens(text)
    pos = 0

    def peek():
        return toks[pos] if pos < len(toks) else None

    def take():
        nonlocal pos
        tok = toks[pos]
        pos += 1
        return tok

    def expr() -> RationalPoly:
        sign = 1
        if peek() in ("+", "-"):
            sign = -1 if take() == "-" else 1
        acc = term() * sign
        while peek() in ("+", "-"):
            op = take()
            rhs = term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term() -> RationalPoly:
        acc = power()
        while peek() in ("*", "/") or (peek() is not None and peek() not in ("+", "-", ")")):
            op = take() if peek() in ("*", "/") else "*"
            rhs = power()
            if op == "*":
                acc = acc * rhs
            else:
                acc = acc / rhs.constant_value()
        return acc

    def power() -> RationalPoly:
        base = atom()
        if peek() in ("^", "**"):
            take()
            tok = take()
            if not tok.isdigit():
                raise PolyError(f"exponent must be a nonnegative integer, got {tok!r}")
            base = base ** int(tok)
        return base

    def atom() -> RationalPoly:
        tok = peek()
        if tok is None:
            raise PolyError(f"unexpected end of input in {text!r}")
        take()
        if tok == "(":
            inner = expr()
            if peek() != ")":
                raise PolyError(f"unbalanced parentheses in {text!r}")
            take()
            return inner
        if tok.isdigit():
            return RationalPoly.constant(int(tok))
        if re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", tok):
            return RationalPoly.symbol(tok)
        raise PolyError(f"unexpected token {tok!r} in {text!r}")

    if not toks:
        raise PolyError("empty polynomial text")
    result = expr()
    if pos != len(toks):
        raise PolyError(f"trailing input {toks[pos:]} in {text!r}")
    return result


def poly_sum(items: Iterable[RationalPoly]) -> RationalPoly:
    total = RationalPoly()
    for item in items:
        total = total + item
    return total
