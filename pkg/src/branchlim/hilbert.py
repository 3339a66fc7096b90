"""Hilbert series and Hilbert polynomials of weighted graded quotients.

The series of ``S/I`` is read off the lead-term ideal of ``I`` with the pivot
recursion ``HN(M) = HN(M + (p)) + q^deg(p) HN(M : p)``.  With weights the raw
series is ``N(q) / prod(1 - q^w)``; common factors are cancelled so that the
remaining denominator is a power of ``1 - q``.  That always succeeds for rings
that are finite over their degree-one part, which covers every algebra this
package builds.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .exact_arith import ONE, UniPoly, ZERO, binomial_poly, format_rational, gcd, mpq
from .groebner import Ideal, saturate, specialize
from .multipoly import PolyRing


class HilbertError(ValueError):
    """Input is not graded, or the Hilbert function is not eventually polynomial."""


# --------------------------------------------------------------------------
# numerator of a monomial ideal


def _minimalize(gens):
    gens = sorted(set(gens), key=lambda e: (sum(e), e))
    out = []
    for g in gens:
        if not any(all(a <= b for a, b in zip(h, g)) for h in out):
            out.append(g)
    return out


def _coprime(gens) -> bool:
    seen = set()
    for g in gens:
        sup = {i for i, x in enumerate(g) if x}
        if sup & seen:
            return False
        seen |= sup
    return True


def _one_minus(deg: int) -> UniPoly:
    return UniPoly([1] + [0] * (deg - 1) + [-1]) if deg else UniPoly()


def hilbert_numerator(gens, weights) -> UniPoly:
    """Numerator ``N`` with ``HS(S/M) = N / prod(1 - q^w)`` for a monomial ideal ``M``."""
    gens = _minimalize(tuple(g) for g in gens)
    return _numerator(gens, tuple(weights))


def _numerator(gens, weights) -> UniPoly:
    if not gens:
        return UniPoly([1])
    if not any(gens[0]):
        return UniPoly()

    def wdeg(e):
        return sum(w * x for w, x in zip(weights, e))

    if _coprime(gens):
        acc = UniPoly([1])
        for g in gens:
            acc = acc * _one_minus(wdeg(g))
        return acc
    # pivot on the variable occurring in the most non-pure-power generators
    counts = [0] * len(weights)
    for g in gens:
        if sum(1 for x in g if x) > 1:
            for i, x in enumerate(g):
                if x:
                    counts[i] += 1
    i = max(range(len(weights)), key=lambda j: (counts[j], -j))
    exps = sorted(g[i] for g in gens if g[i] and sum(1 for x in g if x) > 1)
    e = exps[(len(exps) - 1) // 2]
    pivot = tuple(e if j == i else 0 for j in range(len(weights)))
    added = _minimalize(gens + [pivot])
    colon = _minimalize(
        tuple(max(x - e, 0) if j == i else x for j, x in enumerate(g)) for g in gens
    )
    shift = UniPoly.monomial(weights[i] * e)
    return _numerator(added, weights) + shift * _numerator(colon, weights)


# --------------------------------------------------------------------------
# Hilbert data


@dataclass
class HilbertData:
    """Hilbert series and polynomial of a graded quotient ``S/I``.

    ``series_numerator`` is the raw numerator over ``prod(1 - q^w)``;
    ``reduced_numerator`` is the numerator over ``(1 - q)^pole_order``.
    ``regularity_witness`` is a degree from which on the Hilbert function and
    polynomial agree.
    """

    series_numerator: UniPoly
    weights: tuple
    reduced_numerator: UniPoly
    pole_order: int
    polynomial: list
    dimension: int
    degree: int
    euler_char: int
    regularity_witness: int
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def is_polynomial(self) -> bool:
        return self.polynomial is not None

    def value(self, d: int):
        """``P(d)`` as an exact rational."""
        require_polynomial(self)
        acc = ZERO
        for c in reversed(self.polynomial):
            acc = acc * d + c
        return acc

    def series_coefficients(self, count: int) -> list[int]:
        """Hilbert function values in degrees ``0 .. count-1``."""
        num = self.series_numerator.coeffs
        out = [ZERO] * count
        for j, c in enumerate(num[:count]):
            out[j] = c
        # divide by each (1 - q^w) in turn: a running prefix sum with stride w
        for w in self.weights:
            for d in range(w, count):
                out[d] += out[d - w]
        return [int(c) for c in out]

    def hilbert_function(self, d: int) -> int:
        return self.series_coefficients(d + 1)[d]

    def polynomial_text(self) -> str:
        if self.polynomial is None:
            return "quasi-polynomial"
        return poly_text(self.polynomial)

    def to_json(self) -> dict:
        if self.polynomial is None:
            return {
                "polynomial": None,
                "series_numerator": [json_rational(c) for c in self.series_numerator.coeffs],
                "weights": list(self.weights),
                "dimension": self.dimension,
                "degree": json_rational(self.degree),
                "euler_char": None,
            }
        return {
            "polynomial": [json_rational(c) for c in self.polynomial],
            "dimension": self.dimension,
            "degree": self.degree,
            "euler_char": self.euler_char,
        }

    def same_series(self, other: "HilbertData", upto: int | None = None) -> bool:
        upto = upto if upto is not None else max(self.regularity_witness, other.regularity_witness) + 5
        return self.series_coefficients(upto + 1) == other.series_coefficients(upto + 1)


def json_rational(c):
    c = mpq(c)
    return int(c) if c.denominator == 1 else format_rational(c)


def poly_text(coeffs, var: str = "d") -> str:
    terms = []
    for k in reversed(range(len(coeffs))):
        c = mpq(coeffs[k])
        if c == 0:
            continue
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        mag = abs(c)
        if mono and mag == 1:
            body = mono
        elif mono:
            body = f"{format_rational(mag)}*{mono}"
        else:
            body = format_rational(mag)
        sign = "-" if c < 0 else "+"
        terms.append((sign, body))
    if not terms:
        return "0"
    first_sign, first = terms[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out


def hilbert_from_numerator(numerator: UniPoly, weights) -> HilbertData:
    """Reduce ``N / prod(1 - q^w)`` and extract the Hilbert polynomial.

    When the reduced denominator keeps a factor other than ``1 - q`` the
    Hilbert function is only quasi-polynomial; then ``polynomial`` and
    ``euler_char`` are ``None`` and ``degree`` is the normalised leading
    coefficient ``lim (1 - q)^k HS(q)``, which may be a fraction.
    """
    weights = tuple(weights)
    if numerator.is_zero():
        return HilbertData(numerator, weights, UniPoly(), 0, [], -1, 0, 0, 0)
    den = UniPoly([1])
    for w in weights:
        den = den * _one_minus(w)
    g = gcd(numerator, den)
    num, den = numerator // g, den // g
    k = 0
    line = _one_minus(1)
    while True:
        quo, rem = den.divmod(line)
        if not rem.is_zero():
            break
        den, k = quo, k + 1
    lead = num(ONE) / den(ONE)
    if den.degree > 0:
        degree = int(lead) if lead.denominator == 1 else lead
        return HilbertData(numerator, weights, num, k, None, k - 1, degree, None, max(0, numerator.degree + 1))
    num = UniPoly([c / den.coeffs[0] for c in num.coeffs])
    if k == 0:
        poly: list = []
    else:
        acc = UniPoly()
        for j, c in enumerate(num.coeffs):
            if c:
                acc = acc + binomial_poly(k - 1, k - 1 - j) * c
        poly = list(acc.coeffs)
    degree = num(ONE) if k else ZERO
    euler = poly[0] if poly else ZERO
    witness = max(0, num.degree - k + 1)
    if degree.denominator != 1 or euler.denominator != 1:
        raise HilbertError("non-integral degree or Euler characteristic")
    return HilbertData(numerator, weights, num, k, poly, k - 1, int(degree), int(euler), witness)


def require_polynomial(data: HilbertData) -> HilbertData:
    if data.polynomial is None:
        raise HilbertError(
            "Hilbert function is only quasi-polynomial in this grading; "
            "the algebra is not finite over its degree-one part"
        )
    return data


# --------------------------------------------------------------------------
# ideals


def _graded_leads(I: Ideal, treat_parameter_as_coefficient: bool):
    ring = I.ring
    graded = ring.graded_indices()
    base = ring.base_parameter
    if base is not None and not treat_parameter_as_coefficient:
        if any(base in g.variables_used() for g in I.generators):
            raise HilbertError(
                f"generators involve the parameter {base!r}; specialize it or ask for a fiber"
            )
    for g in I.generators:
        if not g.is_homogeneous():
            raise HilbertError(f"non-homogeneous generator: {g}")
    leads = []
    for lm in I.leading_exponents():
        leads.append(tuple(lm[i] for i in graded))
    return leads, tuple(ring.weights[i] for i in graded)


def hilbert_series(I: Ideal, fiberwise: bool = False) -> HilbertData:
    """Hilbert data of ``S/I`` for ``I`` homogeneous in the ring's weights.

    A weight-zero parameter ``t`` is allowed only with ``fiberwise=True``, in
    which case ``t`` is a coefficient and the result describes the fiber over
    the generic point.  The default term order compares ``t`` last, so the lead
    monomials with ``t`` stripped are those of the generic fiber.
    """
    key = ("hilbert", fiberwise)
    hit = I._cache.get(key)
    if hit is not None:
        return hit
    leads, weights = _graded_leads(I, fiberwise)
    data = hilbert_from_numerator(hilbert_numerator(leads, weights), weights)
    I._cache[key] = data
    return data


def _family_ideal(family) -> Ideal:
    return family.ideal if hasattr(family, "ideal") else family


def special_fiber_ideal(family) -> Ideal:
    """Ideal of the fiber over ``t = 0``, in the ring without ``t``."""
    I = _family_ideal(family)
    t = I.ring.base_parameter
    if t is None:
        return I
    J = I + [I.ring.var(t)]
    return specialize(Ideal(I.ring, J.groebner()), t, 0)


def hilbert_polynomial_of_fiber(family, at: str = "special") -> HilbertData:
    """Hilbert data of the generic (``t`` invertible) or special (``t = 0``) fiber."""
    I = _family_ideal(family)
    if at == "generic":
        t = I.ring.base_parameter
        if t is not None:
            I, _ = saturate(I, I.ring.var(t))
        return hilbert_series(I, fiberwise=True)
    if at == "special":
        return hilbert_series(special_fiber_ideal(I))
    raise ValueError(f"unknown fiber {at!r}; use 'generic' or 'special'")


def standard_monomial_counts(I: Ideal, max_degree: int) -> list[int]:
    """Count standard monomials degree by degree (direct check of the series)."""
    ring = I.ring
    graded = ring.graded_indices()
    weights = [ring.weights[i] for i in graded]
    leads = [tuple(lm[i] for i in graded) for lm in I.leading_exponents()]
    counts = [0] * (max_degree + 1)

    def rec(pos, exps, deg):
        if pos == len(weights):
            if not any(all(a <= b for a, b in zip(l, exps)) for l in leads):
                counts[deg] += 1
            return
        w = weights[pos]
        k = 0
        while deg + k * w <= max_degree:
            rec(pos + 1, exps + (k,), deg + k * w)
            k += 1

    rec(0, (), 0)
    return counts


def projective_space(n: int, names: str = "x") -> tuple[PolyRing, Ideal]:
    ring = PolyRing(tuple(f"{names}{i}" for i in range(n + 1)))
    return ring, Ideal(ring, [])
