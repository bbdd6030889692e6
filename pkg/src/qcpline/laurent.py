"""Exact Laurent polynomials over Q in three invertible symbols.

The symbols are

    P = 1/q,   S = sqrt(c),   T = t1  (a point on the unit circle)

so that q**2 = P**-2, c = S**2 and conj(t1) = t2 = T**-1.  Coefficients are
``fractions.Fraction`` values, so every identity checked with these objects is
exact.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from typing import Iterable, Mapping, Union

Exponent = tuple[int, int, int]
Scalar = Union[int, Fraction]

_SYMBOLS = ("P", "S", "T")
_EXP_LIMIT = 2**62


def _check_exponent(e: Exponent) -> Exponent:
    if any(abs(x) >= _EXP_LIMIT for x in e):
        raise OverflowError(f"Laurent exponent out of range: {e}")
    return e


class LaurentPoly:
    """Immutable element of Q[P, 1/P, S, 1/S, T, 1/T].

    Terms are kept in canonical form: a mapping from exponent triples
    ``(eP, eS, eT)`` to nonzero rationals.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Exponent, Scalar] | None = None):
        clean: dict[Exponent, Fraction] = {}
        for exp, coef in (terms or {}).items():
            coef = Fraction(coef)
            if coef:
                clean[_check_exponent(tuple(int(x) for x in exp))] = coef
        self._terms = clean
        self._hash: int | None = None

    # constructors -------------------------------------------------------

    @classmethod
    def const(cls, value: Scalar) -> "LaurentPoly":
        return cls({(0, 0, 0): value})

    @classmethod
    def monomial(cls, eP: int = 0, eS: int = 0, eT: int = 0, coef: Scalar = 1) -> "LaurentPoly":
        return cls({(eP, eS, eT): coef})

    @classmethod
    def coerce(cls, value: "LaurentPoly | Scalar") -> "LaurentPoly":
        if isinstance(value, LaurentPoly):
            return value
        if isinstance(value, (int, Fraction)):
            return cls.const(value)
        raise TypeError(f"cannot coerce {type(value).__name__} to LaurentPoly")

    # inspection ---------------------------------------------------------

    @property
    def terms(self) -> dict[Exponent, Fraction]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.const(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # ring operations ----------------------------------------------------

    def __add__(self, other: "LaurentPoly | Scalar") -> "LaurentPoly":
        try:
            other = LaurentPoly.coerce(other)
        except TypeError:
            return NotImplemented
        out = dict(self._terms)
        for exp, coef in other._terms.items():
            out[exp] = out.get(exp, 0) + coef
        return LaurentPoly(out)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly({e: -v for e, v in self._terms.items()})

    def __sub__(self, other: "LaurentPoly | Scalar") -> "LaurentPoly":
        try:
            other = LaurentPoly.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Scalar) -> "LaurentPoly":
        return LaurentPoly.coerce(other) - self

    def __mul__(self, other: "LaurentPoly | Scalar") -> "LaurentPoly":
        try:
            other = LaurentPoly.coerce(other)
        except TypeError:
            return NotImplemented
        out: dict[Exponent, Fraction] = {}
        for (a1, b1, c1), v1 in self._terms.items():
            for (a2, b2, c2), v2 in other._terms.items():
                key = (a1 + a2, b1 + b2, c1 + c2)
                out[key] = out.get(key, 0) + v1 * v2
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "LaurentPoly":
        if n < 0:
            if len(self._terms) != 1:
                raise ValueError("only monomials are invertible")
            ((exp, coef),) = self._terms.items()
            inv = LaurentPoly({tuple(-x for x in exp): 1 / coef})
            return inv ** (-n)
        result = LaurentPoly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conj(self) -> "LaurentPoly":
        """Complex conjugation: P and S are real, T lies on the unit circle."""
        return LaurentPoly({(a, b, -c): v for (a, b, c), v in self._terms.items()})

    def evaluate(self, q: float, c: float, t1: complex = 1.0) -> complex:
        """Substitute P = 1/q, S = sqrt(c), T = t1."""
        if not q > 1:
            raise ValueError(f"q must exceed 1, got {q}")
        if not c > 0:
            raise ValueError(f"c must be positive, got {c}")
        if abs(abs(t1) - 1.0) > 1e-12:
            raise ValueError(f"t1 must have modulus 1, got |t1| = {abs(t1)}")
        logP, logS = -math.log(q), 0.5 * math.log(c)
        total = 0j
        for (a, b, e), coef in self._terms.items():
            total += float(coef) * math.exp(a * logP + b * logS) * complex(t1) ** e
        return total

    # rendering ----------------------------------------------------------

    def _sorted_items(self) -> list[tuple[Exponent, Fraction]]:
        return sorted(self._terms.items())

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        pieces = []
        for i, (exp, coef) in enumerate(self._sorted_items()):
            mono = "*".join(
                s if e == 1 else f"{s}^{e}" for s, e in zip(_SYMBOLS, exp) if e
            )
            mag = abs(coef)
            if mono:
                body = mono if mag == 1 else f"{mag}*{mono}"
            else:
                body = str(mag)
            sign = "-" if coef < 0 else "+"
            if i == 0:
                pieces.append(("-" if coef < 0 else "") + body)
            else:
                pieces.append(f" {sign} {body}")
        return "".join(pieces)

    def __repr__(self) -> str:
        return f"LaurentPoly({self})"


def lp_sum(items: Iterable[LaurentPoly]) -> LaurentPoly:
    total = LaurentPoly()
    for item in items:
        total = total + item
    return total


ZERO = LaurentPoly()
ONE = LaurentPoly.const(1)
P = LaurentPoly.monomial(eP=1)
S = LaurentPoly.monomial(eS=1)
T = LaurentPoly.monomial(eT=1)


def unit_circle(angle: float) -> complex:
    return cmath.exp(1j * angle)
