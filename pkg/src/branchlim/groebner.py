"""Buchberger's algorithm and the ideal operations built on it.

Everything is exact over QQ.  Pairs are selected by the normal strategy
(smallest lcm first), both Buchberger criteria are applied through the
Gebauer-Moeller update, and the output is always the reduced basis, so results
do not depend on how the generators were listed.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .exact_arith import ONE, ZERO
from .multipoly import Poly, PolyRing, TermOrder


# --------------------------------------------------------------------------
# raw dict-level machinery


def _divides(a, b) -> bool:
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def _lcm(a, b):
    return tuple(x if x > y else y for x, y in zip(a, b))


def _disjoint(a, b) -> bool:
    for x, y in zip(a, b):
        if x and y:
            return False
    return True


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


class _Engine:
    """Reduction engine for one (ring, order) pair."""

    def __init__(self, ring: PolyRing, order: TermOrder):
        self.ring = ring
        self.order = order
        raw = ring.key(order)
        cache: dict = {}

        def key(e):
            k = cache.get(e)
            if k is None:
                k = raw(e)
                cache[e] = k
            return k

        self.key = key

    def lead(self, f: dict):
        return max(f, key=self.key)

    def monic(self, f: dict):
        lm = self.lead(f)
        c = f[lm]
        if c == 1:
            return lm, f
        inv = ONE / c
        return lm, {e: v * inv for e, v in f.items()}

    def reduce(self, f: dict, basis, full: bool = True) -> dict:
        """Reduce ``f`` modulo ``basis`` (list of ``(lead, monic dict)``)."""
        f = dict(f)
        rem: dict = {}
        key = self.key
        while f:
            m = max(f, key=key)
            c = f[m]
            for lm, g in basis:
                if _divides(lm, m):
                    shift = _sub(m, lm)
                    for e, v in g.items():
                        ne = tuple(x + y for x, y in zip(e, shift))
                        nv = f.get(ne, ZERO) - c * v
                        if nv:
                            f[ne] = nv
                        else:
                            del f[ne]
                    break
            else:
                if not full:
                    rem.update(f)
                    return rem
                rem[m] = c
                del f[m]
        return rem

    def spoly(self, a, b):
        la, fa = a
        lb, fb = b
        l = _lcm(la, lb)
        sa, sb = _sub(l, la), _sub(l, lb)
        out: dict = {}
        for e, v in fa.items():
            ne = tuple(x + y for x, y in zip(e, sa))
            out[ne] = v
        for e, v in fb.items():
            ne = tuple(x + y for x, y in zip(e, sb))
            nv = out.get(ne, ZERO) - v
            if nv:
                out[ne] = nv
            else:
                del out[ne]
        return out

    def interreduce(self, basis):
        """Turn a Groebner basis into the reduced one (sorted by lead, descending)."""
        basis = [b for b in basis]
        minimal = []
        for i, (lm, g) in enumerate(basis):
            redundant = False
            for j, (lm2, _) in enumerate(basis):
                if i == j:
                    continue
                if _divides(lm2, lm) and (lm2 != lm or j < i):
                    redundant = True
                    break
            if not redundant:
                minimal.append((lm, g))
        out = []
        for i, (lm, g) in enumerate(minimal):
            others = [b for j, b in enumerate(minimal) if j != i]
            tail = {e: v for e, v in g.items() if e != lm}
            red = self.reduce(tail, others) if tail else {}
            red[lm] = ONE
            out.append((lm, red))
        out.sort(key=lambda b: self.key(b[0]), reverse=True)
        return out

    def buchberger(self, polys):
        """Reduced Groebner basis of the ideal generated by ``polys`` (dicts)."""
        basis: list = []
        pairs: list = []  # (counter, i, j, lcm)
        counter = itertools.count()
        active: list[int] = []

        def add(poly_lm, poly):
            h = len(basis)
            basis.append((poly_lm, poly))
            lh = poly_lm
            # Gebauer-Moeller update
            cand = [(g, _lcm(basis[g][0], lh)) for g in active]
            kept = []
            for idx, (g, l) in enumerate(cand):
                if not _disjoint(basis[g][0], lh):
                    rest = cand[idx + 1:]
                    if any(_divides(l2, l) for _, l2 in rest) or any(
                        _divides(l2, l) for _, l2, _ in kept
                    ):
                        continue
                kept.append((g, l, _disjoint(basis[g][0], lh)))
            new_pairs = []
            for p in pairs:
                _, i, j, l = p
                if _divides(lh, l) and _lcm(basis[i][0], lh) != l and _lcm(basis[j][0], lh) != l:
                    continue
                new_pairs.append(p)
            for g, l, coprime in kept:
                if coprime:
                    continue
                new_pairs.append((next(counter), g, h, l))
            pairs[:] = new_pairs
            active[:] = [g for g in active if not _divides(lh, basis[g][0])] + [h]
            # keep tails reduced; stale tails make rational coefficients explode
            for g in active[:-1]:
                lg, fg = basis[g]
                if any(_divides(lh, e) for e in fg if e != lg):
                    tail = self.reduce({e: v for e, v in fg.items() if e != lg}, [basis[k] for k in active])
                    tail[lg] = ONE
                    basis[g] = (lg, tail)

        # seed with inter-reduced input, in input order
        for f in polys:
            if not f:
                continue
            r = self.reduce(f, [basis[g] for g in active])
            if r:
                lm, r = self.monic(r)
                add(lm, r)
        while pairs:
            # normal strategy; sugar selection blew up coefficients on inhomogeneous input
            best = min(range(len(pairs)), key=lambda k: (self.key(pairs[k][3]), pairs[k][0]))
            _, i, j, _ = pairs.pop(best)
            sp = self.spoly(basis[i], basis[j])
            if not sp:
                continue
            r = self.reduce(sp, [basis[g] for g in active])
            if r:
                lm, r = self.monic(r)
                add(lm, r)
        return self.interreduce([basis[g] for g in active])

    def linear_basis(self, polys):
        """Reduced basis of an ideal of polynomials of degree <= 1 (Gauss-Jordan)."""
        rows = []
        for f in polys:
            f = dict(f)
            for lm, g in rows:
                c = f.get(lm)
                if c:
                    for e, v in g.items():
                        nv = f.get(e, ZERO) - c * v
                        if nv:
                            f[e] = nv
                        else:
                            del f[e]
            if not f:
                continue
            lm, f = self.monic(f)
            new_rows = []
            for lm2, g in rows:
                c = g.get(lm)
                if c:
                    g = dict(g)
                    for e, v in f.items():
                        nv = g.get(e, ZERO) - c * v
                        if nv:
                            g[e] = nv
                        else:
                            del g[e]
                new_rows.append((lm2, g))
            rows = new_rows + [(lm, f)]
            if not any(lm):
                return [(lm, f)]
        rows.sort(key=lambda b: self.key(b[0]), reverse=True)
        return rows


def _engine(ring: PolyRing, order: TermOrder) -> _Engine:
    return _Engine(ring, order)


def _is_linear(polys) -> bool:
    return all(sum(e) <= 1 for f in polys for e in f)


def groebner_basis_raw(ring: PolyRing, polys, order: TermOrder):
    eng = _engine(ring, order)
    polys = [f for f in polys if f]
    if not polys:
        return []
    if _is_linear(polys):
        return eng.linear_basis(polys)
    return eng.buchberger(polys)


# --------------------------------------------------------------------------
# public API


@dataclass
class Ideal:
    """Ideal of a polynomial ring given by generators; Groebner bases are cached per order."""

    ring: PolyRing
    generators: list
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        gens = []
        for g in self.generators:
            if isinstance(g, str):
                g = self.ring.parse(g)
            elif not isinstance(g, Poly):
                g = self.ring.constant(g)
            elif g.ring.variables != self.ring.variables:
                g = g.to_ring(self.ring)
            else:
                g = Poly(self.ring, g.terms)
            if not g.is_zero():
                gens.append(g)
        self.generators = gens

    # Groebner data ------------------------------------------------------------
    def _raw_basis(self, order: TermOrder | None = None):
        order = order or self.ring.order
        hit = self._cache.get(order)
        if hit is None:
            hit = groebner_basis_raw(self.ring, [g.terms for g in self.generators], order)
            self._cache[order] = hit
        return hit

    def groebner(self, order: TermOrder | None = None) -> list[Poly]:
        return [Poly(self.ring, dict(g)) for _, g in self._raw_basis(order)]

    def leading_exponents(self, order: TermOrder | None = None):
        return [lm for lm, _ in self._raw_basis(order)]

    def reduce(self, p: Poly, order: TermOrder | None = None) -> Poly:
        if p.ring.variables != self.ring.variables:
            p = p.to_ring(self.ring)
        order = order or self.ring.order
        basis = self._raw_basis(order)
        return Poly(self.ring, _engine(self.ring, order).reduce(p.terms, basis))

    def contains(self, p) -> bool:
        if not isinstance(p, Poly):
            p = self.ring.parse(p) if isinstance(p, str) else self.ring.constant(p)
        return self.reduce(p).is_zero()

    def contains_ideal(self, other: "Ideal") -> bool:
        return all(self.contains(g) for g in other.generators)

    def is_unit(self) -> bool:
        basis = self._raw_basis()
        return len(basis) == 1 and not any(basis[0][0])

    def is_zero(self) -> bool:
        return not self.generators

    # constructors ---------------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, Ideal):
            return Ideal(self.ring, self.generators + [g.to_ring(self.ring) for g in other.generators])
        if isinstance(other, (list, tuple)):
            return Ideal(self.ring, self.generators + list(other))
        return Ideal(self.ring, self.generators + [other])

    def __mul__(self, other: "Ideal") -> "Ideal":
        return Ideal(self.ring, [f * g for f in self.generators for g in other.generators])

    def power(self, n: int) -> "Ideal":
        acc = Ideal(self.ring, [self.ring.one()])
        for _ in range(n):
            acc = Ideal(acc.ring, acc.minimal_generators()) * self
        return acc

    def minimal_generators(self) -> list[Poly]:
        """The reduced Groebner basis (a generating set without redundancy of leads)."""
        return self.groebner()

    def with_ring(self, ring: PolyRing) -> "Ideal":
        return Ideal(ring, [g.to_ring(ring) for g in self.generators])

    def map(self, fn) -> "Ideal":
        return Ideal(self.ring, [fn(g) for g in self.generators])

    def is_homogeneous(self) -> bool:
        return all(g.is_homogeneous() for g in self.generators)

    def __repr__(self):
        gens = ", ".join(str(g) for g in self.generators)
        return f"Ideal({self.ring.describe()}: [{gens}])"


def groebner_basis(I: Ideal, order: TermOrder | None = None) -> list[Poly]:
    """Reduced Groebner basis of ``I`` (empty for the zero ideal)."""
    if I.ring.nvars < 1:
        raise ValueError("ring has no variables")
    return I.groebner(order)


def normal_form(p: Poly, I: Ideal, order: TermOrder | None = None) -> Poly:
    return I.reduce(p, order)


def ideal_equal(I: Ideal, J: Ideal, order: TermOrder | None = None) -> bool:
    if I.ring.variables != J.ring.variables:
        raise ValueError("ideals live in different rings")
    J = J if J.ring == I.ring else J.with_ring(I.ring)
    a = I._raw_basis(order)
    b = J._raw_basis(order)
    return len(a) == len(b) and all(x[1] == y[1] for x, y in zip(a, b))


def _fresh(ring: PolyRing, stem: str) -> str:
    name = stem
    k = 0
    while name in ring.variables:
        k += 1
        name = f"{stem}{k}"
    return name


def eliminate(I: Ideal, names) -> Ideal:
    """``I`` intersected with the subring in the remaining variables (generators in that subring)."""
    names = list(names)
    for n in names:
        I.ring.index(n)
    idx = [I.ring.index(n) for n in names]
    order = TermOrder.elimination(idx)
    sub = I.ring.drop(names)
    gens = [g for g in I.groebner(order) if not (g.variables_used() & set(names))]
    return Ideal(sub, [g.to_ring(sub) for g in gens])


def intersect(I: Ideal, J: Ideal) -> Ideal:
    """``I`` ∩ ``J`` via a new variable ``u``: eliminate ``u`` from ``uI + (1-u)J``."""
    ring = I.ring
    if J.ring.variables != ring.variables:
        raise ValueError("ideals live in different rings")
    if I.is_unit():
        return J
    if J.is_unit():
        return I
    if I.is_zero() or J.is_zero():
        return Ideal(ring, [])
    gi, gj = I.groebner(), J.groebner()
    if all(g.is_monomial() for g in gi + gj):
        gens = []
        for f in gi:
            for g in gj:
                (ef,) = f.terms
                (eg,) = g.terms
                gens.append(ring.monomial(_lcm(ef, eg)))
        return Ideal(ring, gens)
    u = _fresh(ring, "u_")
    big = ring.extend([u], [1], front=True)
    uu = big.var(u)
    gens = [uu * f.to_ring(big) for f in gi] + [(1 - uu) * g.to_ring(big) for g in gj]
    out = eliminate(Ideal(big, gens), [u])
    return Ideal(ring, [g.to_ring(ring) for g in out.generators])


def intersect_all(ideals) -> Ideal:
    ideals = list(ideals)
    if not ideals:
        raise ValueError("empty intersection")
    acc = ideals[0]
    for J in ideals[1:]:
        acc = intersect(acc, J)
    return acc


def _divide_exact(p: Poly, f: Poly) -> Poly:
    """Exact multivariate division ``p / f``; raises if not exact."""
    eng = _engine(p.ring, p.ring.order)
    lm, fm = eng.monic(f.terms)
    c = f.terms[lm]
    q: dict = {}
    rem = dict(p.terms)
    while rem:
        m = eng.lead(rem)
        if not _divides(lm, m):
            raise ArithmeticError("inexact division")
        shift = _sub(m, lm)
        coef = rem[m]
        q[shift] = q.get(shift, ZERO) + coef
        for e, v in fm.items():
            ne = tuple(x + y for x, y in zip(e, shift))
            nv = rem.get(ne, ZERO) - coef * v
            if nv:
                rem[ne] = nv
            else:
                del rem[ne]
    return Poly(p.ring, {e: v / c for e, v in q.items() if v})


def quotient_by_element(I: Ideal, f: Poly) -> Ideal:
    """``I : f``."""
    if f.is_zero():
        return Ideal(I.ring, [I.ring.one()])
    inter = intersect(I, Ideal(I.ring, [f]))
    return Ideal(I.ring, [_divide_exact(g, f) for g in inter.groebner()])


def ideal_quotient(I: Ideal, J: Ideal) -> Ideal:
    """``(I : J) = {p : pJ ⊆ I}``."""
    gens = J.groebner()
    if not gens:
        return Ideal(I.ring, [I.ring.one()])
    parts = [quotient_by_element(I, g) for g in gens]
    return intersect_all(parts)


def _saturation_exponent(I: Ideal, sat: Ideal, f: Poly, limit: int = 200) -> int:
    k = 0
    pending = [g for g in sat.groebner() if not I.contains(g)]
    fk = I.ring.one()
    while pending:
        k += 1
        if k > limit:
            raise RuntimeError("saturation exponent did not stabilise")
        fk = fk * f
        pending = [g for g in pending if not I.contains(fk * g)]
    return k


def saturate(I: Ideal, f: Poly, with_exponent: bool = True):
    """Return ``(I : f^∞, k)`` with ``k`` the least exponent with ``f^k (I:f^∞) ⊆ I``.

    The saturation is computed with an extra variable ``w`` by eliminating
    ``w`` from ``I + (1 - w f)``.
    """
    if f.is_zero():
        raise ValueError("cannot saturate by zero")
    ring = I.ring
    f = f.to_ring(ring) if f.ring.variables != ring.variables else f
    if I.is_zero():
        return (I, 0) if with_exponent else I
    if f.is_constant():
        return (I, 0) if with_exponent else I
    w = _fresh(ring, "w_")
    big = ring.extend([w], [1], front=True)
    ww = big.var(w)
    gens = [g.to_ring(big) for g in I.groebner()] + [1 - ww * f.to_ring(big)]
    sat = eliminate(Ideal(big, gens), [w])
    sat = Ideal(ring, [g.to_ring(ring) for g in sat.generators])
    if not with_exponent:
        return sat
    return sat, _saturation_exponent(I, sat, f)


def saturate_ideal(I: Ideal, J: Ideal) -> Ideal:
    """``I : J^∞`` as the intersection of saturations by the generators of ``J``."""
    parts = [saturate(I, g, with_exponent=False) for g in J.groebner()]
    if not parts:
        return I
    return intersect_all(parts)


def krull_dimension(I: Ideal, order: TermOrder | None = None) -> int:
    """Krull dimension of ``R/I`` from the lead-term ideal (``-1`` for the unit ideal)."""
    n = I.ring.nvars
    if I.is_unit():
        return -1
    supports = []
    for lm in I.leading_exponents(order):
        supports.append(frozenset(i for i, x in enumerate(lm) if x))
    return max_independent_size(n, supports)


def max_independent_size(n: int, supports) -> int:
    """Largest set of variables containing no generator support."""
    supports = [s for s in supports]
    best = [0]

    def rec(i, chosen, size):
        if size + (n - i) <= best[0]:
            return
        if i == n:
            best[0] = max(best[0], size)
            return
        new = chosen | {i}
        if not any(s <= new for s in supports):
            rec(i + 1, new, size + 1)
        rec(i + 1, chosen, size)

    rec(0, frozenset(), 0)
    return best[0]


def max_independent_set(I: Ideal, order: TermOrder | None = None) -> list[int]:
    """A lexicographically-first maximal independent set of variables for ``I``."""
    n = I.ring.nvars
    supports = [frozenset(i for i, x in enumerate(lm) if x) for lm in I.leading_exponents(order)]
    target = max_independent_size(n, supports)
    chosen: set = set()
    # greedily prefer variables late in the order (cheap to treat as parameters)
    for i in reversed(range(n)):
        trial = chosen | {i}
        if any(s <= trial for s in supports):
            continue
        chosen = trial
        if len(chosen) == target:
            break
    if len(chosen) != target:
        # fall back to exhaustive search
        for combo in itertools.combinations(range(n), target):
            cs = set(combo)
            if not any(s <= cs for s in supports):
                return sorted(cs)
    return sorted(chosen)


def specialize(I: Ideal, name: str, value=0) -> Ideal:
    """Substitute ``name = value`` and drop the variable."""
    sub = I.ring.drop([name])
    gens = []
    for g in I.generators:
        h = g.substitute({name: value})
        gens.append(h.to_ring(sub))
    return Ideal(sub, gens)
