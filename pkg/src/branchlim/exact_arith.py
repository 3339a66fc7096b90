"""Exact rationals and univariate polynomials over QQ.

Rationals are ``gmpy2.mpq`` values; they are always stored in lowest terms
with a positive denominator, so no extra normalisation is done here.
"""

from __future__ import annotations

from functools import reduce
from math import lcm

import gmpy2
import sympy

mpq = gmpy2.mpq
Rational = type(mpq(0))

ZERO = mpq(0)
ONE = mpq(1)


def to_rational(value) -> Rational:
    """Coerce ints, strings like ``"3/2"``, Fractions and mpq to mpq."""
    if isinstance(value, Rational):
        return value
    if isinstance(value, str):
        return mpq(value.strip())
    if hasattr(value, "numerator") and hasattr(value, "denominator"):
        return mpq(int(value.numerator), int(value.denominator))
    return mpq(value)


def format_rational(value) -> str:
    """Render as ``"p"`` or ``"p/q"``."""
    value = to_rational(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


class UniPoly:
    """Dense univariate polynomial with rational coefficients.

    ``coeffs[i]`` is the coefficient of ``q**i``; trailing zeros are stripped so
    the zero polynomial has an empty coefficient list.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [to_rational(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def monomial(cls, degree: int, coeff=1) -> "UniPoly":
        return cls([0] * degree + [coeff])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def lc(self) -> Rational:
        return self.coeffs[-1] if self.coeffs else ZERO

    def __eq__(self, other):
        if isinstance(other, int):
            other = UniPoly([other])
        return isinstance(other, UniPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"UniPoly({[format_rational(c) for c in self.coeffs]})"

    def __call__(self, x):
        acc = ZERO if not isinstance(x, UniPoly) else UniPoly()
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other):
        other = _as_unipoly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (ZERO,) * (n - len(self.coeffs))
        b = other.coeffs + (ZERO,) * (n - len(other.coeffs))
        return UniPoly([x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self):
        return UniPoly([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-_as_unipoly(other))

    def __rsub__(self, other):
        return _as_unipoly(other) - self

    def __mul__(self, other):
        other = _as_unipoly(other)
        if self.is_zero() or other.is_zero():
            return UniPoly()
        out = [ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return UniPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result = UniPoly([1])
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def divmod(self, other: "UniPoly"):
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        rem = list(self.coeffs)
        quot = [ZERO] * max(len(rem) - len(other.coeffs) + 1, 0)
        lc = other.coeffs[-1]
        d = other.degree
        for i in range(len(rem) - 1, d - 1, -1):
            c = rem[i]
            if c == 0:
                continue
            f = c / lc
            quot[i - d] = f
            for j, oc in enumerate(other.coeffs):
                rem[i - d + j] -= f * oc
        return UniPoly(quot), UniPoly(rem)

    def __floordiv__(self, other):
        return self.divmod(_as_unipoly(other))[0]

    def __mod__(self, other):
        return self.divmod(_as_unipoly(other))[1]

    def monic(self) -> "UniPoly":
        if self.is_zero():
            return self
        lc = self.coeffs[-1]
        return UniPoly([c / lc for c in self.coeffs])

    def derivative(self) -> "UniPoly":
        return UniPoly([i * c for i, c in enumerate(self.coeffs)][1:])

    def to_sympy(self, symbol):
        return sympy.Poly(
            [sympy.Rational(int(c.numerator), int(c.denominator)) for c in reversed(self.coeffs)],
            symbol,
            domain="QQ",
        )

    @classmethod
    def from_sympy(cls, poly: sympy.Poly) -> "UniPoly":
        cs = [to_rational(sympy.Rational(c)) for c in reversed(poly.all_coeffs())]
        return cls(cs)


def _as_unipoly(x) -> UniPoly:
    return x if isinstance(x, UniPoly) else UniPoly([x])


def gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    """Monic gcd by the Euclidean algorithm (gcd(0, 0) = 0)."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def squarefree_part(p: UniPoly) -> UniPoly:
    """Return ``p / gcd(p, p')`` made monic."""
    if p.is_zero():
        raise ValueError("zero polynomial")
    if p.degree == 0:
        return UniPoly([1])
    g = gcd(p, p.derivative())
    return (p // g).monic()


def is_squarefree(p: UniPoly) -> bool:
    return squarefree_part(p).degree == p.degree


_Q = sympy.Symbol("q")


def factor_rational(p: UniPoly) -> list[tuple[UniPoly, int]]:
    """Factor ``p`` into monic irreducibles over QQ with multiplicities.

    The product of the factors recovers ``p`` up to its leading coefficient.
    Factors are sorted by (degree, coefficients) for determinism.
    """
    if p.is_zero():
        raise ValueError("zero polynomial")
    if p.degree == 0:
        return []
    _, factors = p.to_sympy(_Q).factor_list()
    out = [(UniPoly.from_sympy(f).monic(), int(k)) for f, k in factors]
    out.sort(key=lambda fk: (fk[0].degree, fk[0].coeffs, fk[1]))
    return out


def expand_factors(factors: list[tuple[UniPoly, int]]) -> UniPoly:
    return reduce(lambda acc, fk: acc * fk[0] ** fk[1], factors, UniPoly([1]))


def binomial_poly(k: int, shift: int = 0) -> UniPoly:
    """The polynomial ``C(d + shift, k)`` in ``d`` (``k >= 0``)."""
    acc = UniPoly([1])
    for i in range(k):
        acc = acc * UniPoly([shift - i, 1])
    fact = 1
    for i in range(2, k + 1):
        fact *= i
    return UniPoly([c / fact for c in acc.coeffs])


def common_denominator(values) -> int:
    return reduce(lcm, (int(to_rational(v).denominator) for v in values), 1)
