"""Minimal primes by factor splitting, components, degrees and reducedness.

The splitting loop works on a list of ideals whose radicals intersect to the
radical of the input.  Each ideal is either split (a Groebner basis element
factors, a leading coefficient is a zero divisor, or an eliminant factors),
shrunk to fewer variables (a variable occurs only linearly with a constant
coefficient in some basis element), or certified prime.  Primality
certificates are exact: linear ideals, principal ideals with an irreducible
generator, and ideals that are zero-dimensional over a field of rational
functions with an irreducible eliminant whose degree matches the vector-space
dimension.  Anything else is left in the output flagged as unverified.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache
from math import lcm

import sympy

from .exact_arith import UniPoly, squarefree_part, to_rational
from .groebner import (
    Ideal,
    _fresh,
    eliminate,
    intersect_all,
    krull_dimension,
    max_independent_set,
    saturate,
)
from .hilbert import hilbert_series
from .multipoly import Poly, PolyRing, TermOrder

RANDOM_BOUND = 100
MAX_PRIMITIVE_TRIALS = 6


class DecompositionError(RuntimeError):
    """A certificate could not be produced (incomplete splitting, bad multiplicity)."""


# --------------------------------------------------------------------------
# factorisation of multivariate polynomials


@lru_cache(maxsize=4096)
def _factor_terms(variables, items):
    n = len(variables)
    gens = sympy.symbols([f"v{i}" for i in range(n)])
    data = {e: sympy.Rational(int(c.numerator), int(c.denominator)) for e, c in items}
    sp = sympy.Poly.from_dict(data, *gens, domain="QQ")
    _, factors = sp.factor_list()
    out = []
    for f, k in factors:
        d = {tuple(int(x) for x in e): to_rational(sympy.Rational(c)) for e, c in f.as_dict().items()}
        out.append((d, int(k)))
    return tuple(out)


def factor_polynomial(p: Poly) -> list[tuple[Poly, int]]:
    """Irreducible factors over QQ (monic, constants dropped) with multiplicities."""
    if p.is_zero():
        raise ValueError("zero polynomial")
    if p.is_constant():
        return []
    items = tuple(sorted(p.terms.items()))
    out = [(Poly(p.ring, d).monic(), k) for d, k in _factor_terms(p.ring.variables, items)]
    out = [(f, k) for f, k in out if not f.is_constant()]
    out.sort(key=lambda fk: (fk[0].total_degree(), str(fk[0])))
    return out


# --------------------------------------------------------------------------
# data types


@dataclass
class Decomposition:
    """Minimal primes of an ideal; ``complete`` is False if some entry is unverified."""

    minimal_primes: list
    complete: bool = True
    primary_hulls: list | None = None
    unverified: list = field(default_factory=list)


@dataclass
class DegreeSequence:
    """``b[i]`` is the degree of the union of the ``i``-dimensional components."""

    b: list

    def __eq__(self, other):
        if isinstance(other, DegreeSequence):
            other = other.b
        a, c = list(self.b), list(other)
        while a and a[-1] == 0:
            a.pop()
        while c and c[-1] == 0:
            c.pop()
        return a == c


@dataclass
class ReducedVerdict:
    verdict: str  # "reduced", "not_reduced" or "unknown"
    witness: Poly | None = None
    route: str = ""

    def __bool__(self):
        return self.verdict == "reduced"


# --------------------------------------------------------------------------
# primality machinery


def _is_linear(basis) -> bool:
    return all(g.total_degree() <= 1 for g in basis)


def _pivot(basis):
    """A basis element ``c*v + r`` with ``c`` constant and ``r`` free of ``v``."""
    best = None
    for g in basis:
        ring = g.ring
        for v in sorted(g.variables_used(), key=ring.index):
            i = ring.index(v)
            if g.degree_in(v) != 1:
                continue
            with_v = [e for e in g.terms if e[i]]
            if len(with_v) != 1 or any(x for j, x in enumerate(with_v[0]) if j != i):
                continue
            cand = (len(g.terms), g.total_degree(), ring.index(v), g, v)
            if best is None or cand[:3] < best[:3]:
                best = cand
    if best is None:
        return None
    return best[3], best[4]


def _leading_coefficient_product(basis, ring: PolyRing, z_idx):
    """Product of the Q[U]-coefficients of the leading Z-monomials."""
    order = TermOrder.elimination(z_idx)
    key = ring.key(order)
    acc = ring.one()
    factors = []
    for g in basis:
        lm = max(g.terms, key=key)
        zpart = tuple(x if i in z_idx else 0 for i, x in enumerate(lm))
        coeff = {}
        for e, c in g.terms.items():
            if tuple(x if i in z_idx else 0 for i, x in enumerate(e)) == zpart:
                coeff[tuple(0 if i in z_idx else x for i, x in enumerate(e))] = c
        lc = Poly(ring, coeff)
        if not lc.is_constant():
            factors.append(lc)
    distinct: dict = {}
    for f in factors:
        for p, _ in factor_polynomial(f):
            distinct[str(p)] = p
    for p in distinct.values():
        acc = acc * p
    return acc


def _standard_count(leads, z_idx) -> int | None:
    """Number of monomials in the Z variables outside the projected lead ideal."""
    zl = [tuple(lm[i] for i in z_idx) for lm in leads]
    n = len(z_idx)
    bounds = []
    for k in range(n):
        pure = [m[k] for m in zl if m[k] and all(x == 0 for j, x in enumerate(m) if j != k)]
        if not pure:
            return None
        bounds.append(min(pure))
    count = 0

    def rec(pos, exps):
        nonlocal count
        if pos == n:
            if not any(all(a <= b for a, b in zip(m, exps)) for m in zl):
                count += 1
            return
        for x in range(bounds[pos]):
            rec(pos + 1, exps + (x,))

    rec(0, ())
    return count


def _eliminant(J: Ideal, keep_idx, target: Poly | None = None):
    """Generator of the contraction of ``J`` (+ ``z - target``) to the kept variables.

    Returns ``(F, ring)`` where ``ring`` is the ring of the kept variables (plus
    ``z`` when ``target`` is given).
    """
    ring = J.ring
    if target is None:
        drop = [v for i, v in enumerate(ring.variables) if i not in keep_idx]
        E = eliminate(J, drop)
    else:
        z = _fresh(ring, "z")
        big = ring.extend([z], [max(target.weighted_degree(), 1)])
        gens = [g.to_ring(big) for g in J.groebner()] + [big.var(z) - target.to_ring(big)]
        drop = [v for i, v in enumerate(ring.variables) if i not in keep_idx]
        E = eliminate(Ideal(big, gens), drop)
    gens = E.groebner()
    return gens, E.ring


class _Splitter:
    def __init__(self, seed: int):
        self.rng = random.Random(seed)

    def random_form(self, ring: PolyRing, idx) -> Poly:
        acc = ring.zero()
        for i in idx:
            c = 0
            while c == 0:
                c = self.rng.randint(-RANDOM_BOUND, RANDOM_BOUND)
            acc = acc + ring.var(ring.variables[i]) * c
        return acc

    def run(self, I: Ideal) -> Decomposition:
        primes: list = []
        unverified: list = []
        work = [I]
        seen: set = set()
        while work:
            J = work.pop()
            basis = J.groebner()
            sig = tuple(str(g) for g in basis)
            if sig in seen:
                continue
            seen.add(sig)
            if J.is_unit():
                continue
            outcome = self.step(J, basis)
            kind = outcome[0]
            if kind == "prime":
                primes.append(outcome[1])
            elif kind == "split":
                work.extend(outcome[1])
            elif kind == "sub":
                for P in outcome[1].minimal_primes:
                    primes.append(P)
                for P in outcome[1].unverified:
                    unverified.append(P)
            else:
                unverified.append(J)
        everything = _minimal(primes + unverified)
        bad = [P for P in everything if any(_same(P, U) for U in unverified)]
        return Decomposition(everything, complete=not bad, unverified=bad)

    def step(self, J: Ideal, basis):
        ring = J.ring
        if not basis:
            return ("prime", J)
        if _is_linear(basis):
            return ("prime", Ideal(ring, basis))
        # factor splitting
        for g in sorted(basis, key=lambda g: (len(g.terms), g.total_degree())):
            fs = factor_polynomial(g)
            if len(fs) > 1 or (fs and fs[0][1] > 1):
                return ("split", [Ideal(ring, basis + [f]) for f, _ in fs])
        # drop a variable that is a polynomial in the others
        piv = _pivot(basis)
        if piv is not None:
            g, v = piv
            i = ring.index(v)
            c = next(c for e, c in g.terms.items() if e[i])
            rest = g - ring.var(v) * c
            image = rest * (-1 / c)
            sub = ring.drop([v])
            gens = []
            for h in basis:
                if h is g:
                    continue
                hh = h.substitute({v: image})
                if not hh.is_zero():
                    gens.append(hh.to_ring(sub))
            inner = _Splitter(self.rng.randint(0, 2**31)).run(Ideal(sub, gens))
            lift = ring.var(v) - image
            return (
                "sub",
                Decomposition(
                    [Ideal(ring, [lift] + [p.to_ring(ring) for p in P.groebner()]) for P in inner.minimal_primes],
                    inner.complete,
                    unverified=[
                        Ideal(ring, [lift] + [p.to_ring(ring) for p in P.groebner()]) for P in inner.unverified
                    ],
                ),
            )
        if len(basis) == 1:
            return ("prime", J)  # irreducible: factor splitting found nothing
        return self.zero_dimensional_step(J, basis)

    def zero_dimensional_step(self, J: Ideal, basis):
        ring = J.ring
        u_idx = max_independent_set(J)
        z_idx = [i for i in range(ring.nvars) if i not in u_idx]
        order = TermOrder.elimination(z_idx)
        block = J.groebner(order)
        h = _leading_coefficient_product(block, ring, set(z_idx))
        if not h.is_constant():
            sat, k = saturate(J, h)
            if k > 0:
                return ("split", [sat, J + [h]])
        delta = _standard_count(J.leading_exponents(order), z_idx)
        if delta is None:
            return ("unknown",)
        # Seidenberg: per-variable eliminants over Q(U)
        for zi in z_idx:
            split = self._eliminant_split(J, basis, u_idx, zi, None)
            if split is not None:
                return split
        # primitive element
        for _ in range(MAX_PRIMITIVE_TRIALS):
            ell = self.random_form(ring, z_idx)
            res = self._eliminant_split(J, basis, u_idx, None, ell)
            if res is not None:
                return res
            F, zname = self._last
            if F.degree_in(zname) == delta:
                return ("prime", J)
        return ("unknown",)

    def _eliminant_split(self, J, basis, u_idx, zi, ell):
        ring = J.ring
        if ell is None:
            gens, sub = _eliminant(J, list(u_idx) + [zi])
            zname = ring.variables[zi]
            back = lambda f: f.to_ring(ring)  # noqa: E731
        else:
            gens, sub = _eliminant(J, list(u_idx), ell)
            zname = sub.variables[-1]
            back = lambda f: f.substitute({zname: ell.to_ring(sub)}).to_ring(ring)  # noqa: E731
        cands = [g for g in gens if g.degree_in(zname) > 0]
        if not cands:
            return None
        F = min(cands, key=lambda g: (g.degree_in(zname), len(g.terms)))
        self._last = (F, zname)
        fs = [(f, k) for f, k in factor_polynomial(F) if f.degree_in(zname) > 0]
        if len(fs) > 1 or (fs and fs[0][1] > 1):
            return ("split", [Ideal(ring, basis + [back(f)]) for f, _ in fs])
        return None


def _minimal(ideals):
    """Drop duplicates and non-minimal members (by containment)."""
    ideals = sorted(ideals, key=lambda P: (len(P.groebner()), [str(g) for g in P.groebner()]))
    out: list = []
    for P in ideals:
        if any(P.contains_ideal(Q) for Q in out):
            continue
        out = [Q for Q in out if not Q.contains_ideal(P)]
        out.append(P)
    out = [Ideal(P.ring, P.groebner()) for P in out]
    out.sort(key=lambda P: [str(g) for g in P.groebner()])
    return out


def _monomial_primes(I: Ideal):
    supports = [frozenset(i for i, x in enumerate(lm) if x) for lm in I.leading_exponents()]
    ring = I.ring
    covers: list = []

    def rec(k, chosen):
        if any(c <= chosen for c in covers):
            return
        for s in supports:
            if not (s & chosen):
                for i in sorted(s):
                    rec(k + 1, chosen | {i})
                return
        covers[:] = [c for c in covers if not chosen <= c]
        covers.append(chosen)

    rec(0, frozenset())
    out = [Ideal(ring, [ring.var(ring.variables[i]) for i in sorted(c)]) for c in covers]
    out.sort(key=lambda P: [str(g) for g in P.groebner()])
    return out


def minimal_primes(I: Ideal, seed: int = 0, hulls: bool = False) -> Decomposition:
    """Minimal primes of ``I`` over QQ.

    Set ``hulls=True`` to also get the primary component of ``I`` at each
    minimal prime.
    """
    key = ("minimal_primes", seed)
    dec = I._cache.get(key)
    if dec is None:
        basis = I.groebner()
        if basis and all(g.is_monomial() for g in basis):
            dec = Decomposition(_monomial_primes(I), True)
        else:
            dec = _Splitter(seed).run(Ideal(I.ring, basis))
        I._cache[key] = dec
    if hulls and dec.primary_hulls is None:
        dec.primary_hulls = [primary_hull(I, P, dec) for P in dec.minimal_primes]
    return dec


def radical(I: Ideal, seed: int = 0) -> Ideal:
    dec = minimal_primes(I, seed)
    if not dec.complete:
        raise DecompositionError("cannot certify radical")
    if not dec.minimal_primes:
        return Ideal(I.ring, [I.ring.one()])
    return intersect_all(dec.minimal_primes)


# --------------------------------------------------------------------------
# components and degrees


def is_projective(I: Ideal) -> bool:
    return all(g.is_homogeneous() for g in I.generators)


def _meet(P: Ideal, Q: Ideal, projective: bool) -> bool:
    S = P + Q
    if projective:
        return krull_dimension(S) >= 1
    return not S.is_unit()


def component_groups(primes, projective: bool):
    """Group primes into connected components (union-find over pairwise meets)."""
    n = len(primes)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if find(i) != find(j) and _meet(primes[i], primes[j], projective):
                parent[find(i)] = find(j)
    groups: dict = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(primes[i])
    return list(groups.values())


def relevant_primes(primes, projective: bool):
    if not projective:
        return list(primes)
    return [P for P in primes if krull_dimension(P) >= 1]


def connected_components(I: Ideal, seed: int = 0, projective: bool | None = None) -> list[Ideal]:
    """Radical ideals of the connected components of ``V(I)``."""
    projective = is_projective(I) if projective is None else projective
    dec = minimal_primes(I, seed)
    if not dec.complete:
        raise DecompositionError("cannot certify components")
    primes = relevant_primes(dec.minimal_primes, projective)
    groups = component_groups(primes, projective)
    out = [intersect_all(g) for g in groups]
    out.sort(key=lambda J: [str(g) for g in J.groebner()])
    return out


def projective_closure(I: Ideal) -> Ideal:
    """Homogenize a degree-compatible Groebner basis with a new variable."""
    ring = I.ring
    if is_projective(I):
        return I
    h = _fresh(ring, "h")
    big = ring.extend([h], [1])
    hv = big.var(h)
    gens = []
    for g in I.groebner():
        d = g.weighted_degree()
        acc = big.zero()
        for e, c in g.terms.items():
            de = sum(w * x for w, x in zip(ring.weights, e))
            acc = acc + big.monomial(tuple(e) + (0,), c) * hv ** (d - de)
        gens.append(acc)
    return Ideal(big, gens)


def degree(I: Ideal):
    """Degree (projective, or of the projective closure for affine ideals).

    Under non-standard weights this is the normalised leading coefficient of
    the Hilbert series and can be a fraction; ratios of such degrees are still
    lengths.
    """
    return hilbert_series(projective_closure(I)).degree


def dimension(I: Ideal, projective: bool | None = None) -> int:
    projective = is_projective(I) if projective is None else projective
    k = krull_dimension(I)
    if k < 0:
        return -1
    return k - 1 if projective else k


def equidimensional_parts(I: Ideal, seed: int = 0, projective: bool | None = None) -> dict:
    """Map dimension ``i`` to (intersection of the i-dimensional primes, their total degree)."""
    projective = is_projective(I) if projective is None else projective
    dec = minimal_primes(I, seed)
    if not dec.complete:
        raise DecompositionError("cannot certify components")
    by_dim: dict = {}
    for P in relevant_primes(dec.minimal_primes, projective):
        by_dim.setdefault(dimension(P, projective), []).append(P)
    out = {}
    for i in sorted(by_dim):
        ps = by_dim[i]
        out[i] = (intersect_all(ps), sum(degree(P) for P in ps))
    return out


def degree_sequence(I: Ideal, seed: int = 0, projective: bool | None = None) -> DegreeSequence:
    parts = equidimensional_parts(I, seed, projective)
    if not parts:
        return DegreeSequence([])
    b = [0] * (max(parts) + 1)
    for i, (_, d) in parts.items():
        b[i] = d
    return DegreeSequence(b)


def _separator(P: Ideal, others) -> Poly:
    ring = P.ring
    acc = ring.one()
    for Q in others:
        g = next((g for g in Q.groebner() if not P.contains(g)), None)
        if g is None:
            raise DecompositionError("prime is not minimal")
        acc = acc * g
    return acc


def primary_hull(I: Ideal, P: Ideal, dec: Decomposition | None = None) -> Ideal:
    """The component of ``I`` at the minimal prime ``P`` (saturate away the other primes)."""
    dec = dec or minimal_primes(I)
    others = [Q for Q in dec.minimal_primes if Q is not P and not _same(Q, P)]
    g = _separator(P, others)
    if g.is_constant():
        return I
    hull, _ = saturate(I, g)
    return hull


def _same(P: Ideal, Q: Ideal) -> bool:
    return [str(g) for g in P.groebner()] == [str(g) for g in Q.groebner()]


def multiplicity_of_component(I: Ideal, P: Ideal, dec: Decomposition | None = None) -> int:
    """Length of ``I`` at the generic point of ``P``: deg(hull) / deg(P)."""
    hull = primary_hull(I, P, dec)
    a, b = to_rational(degree(hull)), to_rational(degree(P))
    if b == 0 or (a / b).denominator != 1:
        raise DecompositionError("multiplicity undefined - decomposition suspect")
    return int(a / b)


def multiplicities(I: Ideal, seed: int = 0) -> list[tuple[Ideal, int]]:
    dec = minimal_primes(I, seed)
    if not dec.complete:
        raise DecompositionError("cannot certify components")
    projective = is_projective(I)
    primes = relevant_primes(dec.minimal_primes, projective)
    return [(P, multiplicity_of_component(I, P, dec)) for P in primes]


# --------------------------------------------------------------------------
# reducedness


def _affine_chart(I: Ideal, rng: random.Random) -> Ideal:
    """Dehomogenize a projective ideal on a random chart ``L = 1``."""
    ring = I.ring
    coeffs = []
    for _ in range(ring.nvars):
        c = 0
        while c == 0:
            c = rng.randint(-RANDOM_BOUND, RANDOM_BOUND)
        coeffs.append(c)
    v = ring.variables[0]
    rest = ring.one()
    for name, c in zip(ring.variables[1:], coeffs[1:]):
        rest = rest - ring.var(name) * c
    image = rest * to_rational(1) / coeffs[0]
    sub = ring.drop([v])
    return Ideal(sub, [g.substitute({v: image}).to_ring(sub) for g in I.groebner()])


def _zero_dim_reduced(J: Ideal, rng: random.Random):
    """Seidenberg test; returns (verdict, witness-in-J.ring)."""
    ring = J.ring
    if J.is_unit():
        return "reduced", None
    for i, v in enumerate(ring.variables):
        gens, sub = _eliminant(J, [i])
        cands = [g for g in gens if g.degree_in(v) > 0]
        if not cands:
            return "unknown", None
        f = cands[0]
        F = UniPoly([f.terms.get((k,), 0) for k in range(f.degree_in(v) + 1)])
        sq = squarefree_part(F)
        if sq.degree < F.degree:
            witness = ring.zero()
            for k, c in enumerate(sq.coeffs):
                witness = witness + ring.var(v) ** k * c
            return "not_reduced", witness
    leads = J.leading_exponents()
    delta = _standard_count(leads, list(range(ring.nvars)))
    for _ in range(2):
        ell = ring.zero()
        for v in ring.variables:
            c = 0
            while c == 0:
                c = rng.randint(-RANDOM_BOUND, RANDOM_BOUND)
            ell = ell + ring.var(v) * c
        gens, sub = _eliminant(J, [], ell)
        z = sub.variables[-1]
        cands = [g for g in gens if g.degree_in(z) > 0]
        if cands and cands[0].degree_in(z) == delta:
            return "reduced", None
    return "unknown", None


def is_reduced(I: Ideal, seed: int = 0, pipeline_fiber: bool = False) -> ReducedVerdict:
    """Decide whether ``I`` is radical, with a nilpotent witness when it is not.

    Routes: zero-dimensional ideals (and projective point sets, on a random
    chart) use the Seidenberg eliminant test; special fibers produced by the
    limit pipeline only need generic reducedness; everything else is compared
    exactly with the intersection of its minimal primes.
    """
    rng = random.Random(seed)
    if I.is_unit():
        return ReducedVerdict("reduced", None, "unit")
    projective = is_projective(I)
    k = krull_dimension(I)
    if k == 0 or (projective and k == 1 and I.ring.nvars > 1):
        if k == 0:
            verdict, w = _zero_dim_reduced(I, rng)
            if verdict != "unknown":
                return ReducedVerdict(verdict, w, "zero-dimensional")
        else:
            sat = I
            for trial in range(2):
                chart = _affine_chart(sat, rng)
                verdict, w = _zero_dim_reduced(chart, rng)
                if verdict == "reduced":
                    return _confirm_radical(I, seed, "points")
                if verdict == "not_reduced":
                    return _confirm_radical(I, seed, "points")
    dec = minimal_primes(I, seed)
    if not dec.complete:
        return ReducedVerdict("unknown", None, "incomplete decomposition")
    primes = relevant_primes(dec.minimal_primes, projective)
    if pipeline_fiber:
        for P in primes:
            if multiplicity_of_component(I, P, dec) > 1:
                return _confirm_radical(I, seed, "generic multiplicity")
        return ReducedVerdict("reduced", None, "generically reduced and S1")
    return _confirm_radical(I, seed, "radical comparison")


def _confirm_radical(I: Ideal, seed: int, route: str) -> ReducedVerdict:
    """Exact check ``I == intersection of minimal primes`` (saturated when projective)."""
    dec = minimal_primes(I, seed)
    if not dec.complete:
        return ReducedVerdict("unknown", None, route)
    projective = is_projective(I)
    primes = relevant_primes(dec.minimal_primes, projective)
    if not primes:
        return ReducedVerdict("reduced", None, route)
    rad = intersect_all(primes)
    missing = [g for g in rad.groebner() if not I.contains(g)]
    if missing and projective:
        # nilpotents supported on the irrelevant ideal are invisible on Proj
        sat = _saturate_irrelevant(I)
        missing = [g for g in missing if not sat.contains(g)]
    if missing:
        return ReducedVerdict("not_reduced", missing[0], route)
    return ReducedVerdict("reduced", None, route)


def _saturate_irrelevant(I: Ideal) -> Ideal:
    from .groebner import saturate_ideal

    ring = I.ring
    irr = Ideal(ring, [ring.var(ring.variables[i]) for i in ring.graded_indices()])
    return saturate_ideal(I, irr)


def lcm_of(values) -> int:
    out = 1
    for v in values:
        out = lcm(out, int(v))
    return out
