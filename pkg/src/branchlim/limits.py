"""Flat limits, integral closure along ``t`` and the branch-limit pipeline.

A family over the DVR ``Q[t]_(t)`` is a graded quotient of ``Q[t][x, y]``
in which ``t`` is a nonzerodivisor.  Localisation at ``(t)`` is never
materialised: every test the algorithms need (membership in ``(t)``,
saturation by ``t``) is done with polynomials.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import PresentedAlgebra
from .decompose import (
    DecompositionError,
    ReducedVerdict,
    is_reduced,
    lcm_of,
    minimal_primes,
    multiplicities,
)
from .groebner import Ideal, _fresh, ideal_quotient, intersect_all, saturate
from .hilbert import HilbertData, hilbert_polynomial_of_fiber, hilbert_series, special_fiber_ideal
from .multipoly import Poly, PolyRing, RingMap, to_text

DEFAULT_MAX_ROUNDS = 20


class LimitError(RuntimeError):
    """The pipeline could not finish or certify its result."""

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial


# --------------------------------------------------------------------------
# families


@dataclass
class FamilyOverDVR:
    """A flat graded family over ``Q[t]_(t)``.

    ``structure_map`` goes from ``Q[t][x_0..x_n]`` into ``ring``; ``history``
    lists the base changes applied so far as ``{"t": "s^m"}`` records (the old
    parameter equals the new one to the power ``m``; the new parameter keeps
    the name of the old one).
    """

    ring: PolyRing
    ideal: Ideal
    structure_map: RingMap
    history: list = field(default_factory=list)

    @property
    def t(self) -> str:
        return self.ring.base_parameter

    @property
    def tvar(self) -> Poly:
        return self.ring.var(self.t)

    def describe(self) -> dict:
        return {
            "ring": self.ring.describe(),
            "weights": {v: w for v, w in zip(self.ring.variables, self.ring.weights)},
            "ideal": [to_text(g) for g in self.ideal.groebner()],
            "structure_map": {
                v: to_text(img)
                for v, img in zip(self.structure_map.source.variables, self.structure_map.images)
            },
            "history": list(self.history),
        }

    def total_ramification(self) -> int:
        out = 1
        for rec in self.history:
            out *= int(rec["t"].split("^")[1])
        return out


def make_family(ideal: Ideal, structure_map: RingMap | None = None, history=None) -> FamilyOverDVR:
    """Complete a family flatly: saturate by ``t`` (the flat closure of the generic fiber)."""
    ring = ideal.ring
    if ring.base_parameter is None:
        raise ValueError("the ring has no base parameter")
    sat, _ = saturate(ideal, ring.var(ring.base_parameter))
    sat = Ideal(ring, sat.groebner())
    return FamilyOverDVR(ring, sat, structure_map or RingMap.identity(ring), list(history or []))


def is_flat(F: FamilyOverDVR) -> bool:
    """``t`` is a nonzerodivisor modulo the ideal."""
    sat, k = saturate(F.ideal, F.tvar)
    return k == 0


def flatness_witness(F: FamilyOverDVR, extra: int = 5) -> bool:
    """Generic and special fiber have the same Hilbert series up to the witness bound."""
    gen = hilbert_polynomial_of_fiber(F, "generic")
    spe = hilbert_polynomial_of_fiber(F, "special")
    bound = max(gen.regularity_witness, spe.regularity_witness) + extra
    return gen.series_coefficients(bound + 1) == spe.series_coefficients(bound + 1)


def special_fiber(F: FamilyOverDVR) -> PresentedAlgebra:
    """The fiber over ``t = 0`` with its induced structure map."""
    fib = special_fiber_ideal(F.ideal)
    ring = fib.ring
    src = F.structure_map.source
    tsrc = src.base_parameter
    src0 = src.drop([tsrc]) if tsrc else src
    images = []
    for v in src0.variables:
        img = F.structure_map.images[src.index(v)]
        images.append(img.substitute({F.t: 0}).to_ring(ring))
    return PresentedAlgebra(ring, fib, RingMap(src0, ring, tuple(images)))


def hilbert_limit(F, saturate_irrelevant: bool = False) -> Ideal:
    """Flat limit of the generic fiber: saturate by ``t`` and set ``t = 0``."""
    I = F.ideal if isinstance(F, FamilyOverDVR) else F
    t = I.ring.base_parameter
    sat, _ = saturate(I, I.ring.var(t))
    fib = special_fiber_ideal(sat)
    if saturate_irrelevant:
        from .decompose import _saturate_irrelevant

        fib = _saturate_irrelevant(fib)
    return Ideal(fib.ring, fib.groebner())


# --------------------------------------------------------------------------
# integral closure along t


def _fiber_radical(F: FamilyOverDVR, seed: int):
    fib = special_fiber_ideal(F.ideal)
    dec = minimal_primes(fib, seed)
    if not dec.complete:
        raise LimitError("cannot certify radical")
    rad = intersect_all(dec.minimal_primes) if dec.minimal_primes else Ideal(fib.ring, [1])
    return fib, rad


def _new_fractions(F: FamilyOverDVR, seed: int) -> list[Poly]:
    """Numerators ``h`` with ``h/t`` in Hom(J, J) but not in R, for ``J = sqrt(tR)``."""
    ring, I, t = F.ring, F.ideal, F.tvar
    fib, rad = _fiber_radical(F, seed)
    if all(fib.contains(g) for g in rad.groebner()):
        return []  # reduced special fiber: R is already closed in R[1/t]
    J = Ideal(ring, [t] + [g.to_ring(ring) for g in rad.groebner()])
    tJ = Ideal(ring, I.groebner() + [t * g for g in J.groebner()])
    U = ideal_quotient(tJ, J)
    base = Ideal(ring, I.groebner() + [t])
    chosen: list[Poly] = []
    for h in U.groebner():
        hp = base.reduce(h)
        if hp.is_zero():
            continue
        if chosen and Ideal(ring, base.groebner() + chosen).contains(hp):
            continue
        chosen.append(hp.monic())
    return chosen


def _adjoin(F: FamilyOverDVR, numerators: list[Poly]) -> FamilyOverDVR:
    ring = F.ring
    names, weights = [], []
    probe = ring
    for h in numerators:
        name = _fresh(probe, "y")
        names.append(name)
        weights.append(max(h.weighted_degree(), 1) if h.is_homogeneous() else 1)
        probe = probe.extend([name], [1])
    big = ring.extend(names, weights)
    t = big.var(F.t)
    gens = [g.to_ring(big) for g in F.ideal.groebner()]
    gens += [t * big.var(n) - h.to_ring(big) for n, h in zip(names, numerators)]
    sat, _ = saturate(Ideal(big, gens), t)
    smap = RingMap(F.structure_map.source, big, tuple(img.to_ring(big) for img in F.structure_map.images))
    return FamilyOverDVR(big, Ideal(big, sat.groebner()), smap, list(F.history))


def _prune(F: FamilyOverDVR) -> FamilyOverDVR:
    """Drop adjoined variables that are polynomials in the other variables."""
    protected = {F.t}
    for img in F.structure_map.images:
        protected |= img.variables_used()
    ring, ideal = F.ring, F.ideal
    while True:
        best = None
        for g in ideal.groebner():
            for v in g.variables_used() - protected:
                i = ring.index(v)
                with_v = [e for e in g.terms if e[i]]
                if len(with_v) != 1 or with_v[0][i] != 1 or sum(with_v[0]) != 1:
                    continue
                cand = (-ring.weights[i], len(g.terms), -i)
                if best is None or cand < best[0]:
                    best = (cand, g, v)
        if best is None:
            break
        _, g, v = best
        c = g.terms[tuple(1 if j == ring.index(v) else 0 for j in range(ring.nvars))]
        image = (g - ring.var(v) * c) * (-1 / c)
        sub = ring.drop([v])
        gens = []
        for h in ideal.groebner():
            if h is g:
                continue
            hh = h.substitute({v: image})
            if not hh.is_zero():
                gens.append(hh.to_ring(sub))
        ring, ideal = sub, Ideal(sub, gens)
    if ring is F.ring:
        return F
    smap = RingMap(F.structure_map.source, ring, tuple(img.to_ring(ring) for img in F.structure_map.images))
    return FamilyOverDVR(ring, Ideal(ring, ideal.groebner()), smap, list(F.history))


def normalize_along_t(F: FamilyOverDVR, max_rounds: int = DEFAULT_MAX_ROUNDS, seed: int = 0) -> FamilyOverDVR:
    """Integral closure of ``R`` in ``R[1/t]``.

    Each round takes ``J = sqrt(tR)``, computes ``(tJ : J)`` and adjoins
    ``y = h/t`` for every ``h`` in it that is not already in ``(t)``; the new
    relations are ``t*y - h`` saturated by ``t``.  The loop stops when
    ``Hom(J, J) = R``.
    """
    current = F
    for _ in range(max_rounds):
        fresh = _new_fractions(current, seed)
        if not fresh:
            return current
        current = _prune(_adjoin(current, fresh))
    raise LimitError(f"normalization did not stabilise within {max_rounds} rounds", partial=current)


def base_change(F: FamilyOverDVR, m: int) -> FamilyOverDVR:
    """Pull back along ``t = s^m``; the new parameter keeps the name ``t``."""
    if not isinstance(m, int) or m <= 0:
        raise ValueError("base change degree must be a positive integer")
    if m == 1:
        return FamilyOverDVR(F.ring, F.ideal, F.structure_map, list(F.history))
    t = F.tvar
    sub = {F.t: t**m}
    gens = [g.substitute(sub) for g in F.ideal.groebner()]
    images = tuple(img.substitute(sub) for img in F.structure_map.images)
    smap = RingMap(F.structure_map.source, F.ring, images)
    return FamilyOverDVR(F.ring, Ideal(F.ring, gens), smap, list(F.history) + [{"t": f"s^{m}"}])


# --------------------------------------------------------------------------
# the pipeline


@dataclass
class LimitReport:
    final_family: FamilyOverDVR
    base_change_degree: int
    multiplicities: list
    special_fiber: PresentedAlgebra
    reducedness: ReducedVerdict
    fiber_hilbert: HilbertData
    fiber_forest: object = None
    extras: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {
            "base_change_degree": self.base_change_degree,
            "multiplicities": list(self.multiplicities),
            "history": list(self.final_family.history),
            "fiber": self.special_fiber.to_json(),
            "reduced": self.reducedness.verdict,
            "hilbert": self.fiber_hilbert.to_json(),
        }
        if self.fiber_forest is not None:
            out["forest"] = self.fiber_forest.to_json()
        for k, v in self.extras.items():
            if not k.startswith("_"):
                out[k] = v
        return out


def fiber_multiplicities(F: FamilyOverDVR, seed: int = 0) -> list[int]:
    fib = special_fiber_ideal(F.ideal)
    try:
        pairs = multiplicities(fib, seed)
    except DecompositionError as exc:
        raise LimitError(str(exc)) from exc
    return sorted(m for _, m in pairs)


def branch_limit(
    F: FamilyOverDVR,
    seed: int = 0,
    max_rounds: int = DEFAULT_MAX_ROUNDS,
    with_forest: bool = False,
) -> LimitReport:
    """Normalize, read fiber multiplicities, base change by their lcm, normalize again."""
    first = normalize_along_t(F, max_rounds, seed)
    mults = fiber_multiplicities(first, seed)
    m = lcm_of(mults) if mults else 1
    final = first
    if m > 1:
        final = normalize_along_t(base_change(first, m), max_rounds, seed)
    fiber = special_fiber(final)
    verdict = is_reduced(fiber.ideal, seed, pipeline_fiber=True)
    if verdict.verdict != "reduced":
        raise LimitError("pipeline failed - special fiber is not reduced", partial=final)
    report = LimitReport(final, m, mults, fiber, verdict, hilbert_series(fiber.ideal))
    if with_forest:
        from .forest import compute_forest

        report.fiber_forest = compute_forest(fiber, seed)
    return report


def further_base_change_stability(report: LimitReport, k: int, seed: int = 0) -> bool:
    """Base change the final family by ``t = s^k`` and rerun; the fiber must not change."""
    from .forest import compute_forest

    again = branch_limit(base_change(report.final_family, k), seed)
    old_forest = report.fiber_forest or compute_forest(report.special_fiber, seed)
    new_forest = compute_forest(again.special_fiber, seed)
    same_series = report.fiber_hilbert.same_series(again.fiber_hilbert)
    return (
        same_series
        and report.reducedness.verdict == again.reducedness.verdict
        and old_forest.canonical() == new_forest.canonical()
    )


def k_equivalence_data(F: FamilyOverDVR, degree_bound: int | None = None, seed: int = 0) -> tuple[bool, int]:
    """Compare special-fiber Hilbert series of ``F`` and its closure; returns the verdict and bound used."""
    closed = normalize_along_t(F, seed=seed)
    a = hilbert_series(special_fiber_ideal(F.ideal))
    b = hilbert_series(special_fiber_ideal(closed.ideal))
    if degree_bound is None:
        degree_bound = max(a.regularity_witness, b.regularity_witness) + 5
    same = a.series_coefficients(degree_bound + 1) == b.series_coefficients(degree_bound + 1)
    return same, degree_bound


def k_equivalence_check(F: FamilyOverDVR, degree_bound: int | None = None, seed: int = 0) -> bool:
    """Special fibers of ``F`` and of its closure along ``t`` have equal Hilbert series."""
    return k_equivalence_data(F, degree_bound, seed)[0]


# --------------------------------------------------------------------------
# Rees algebras and balanced normal cones


@dataclass
class ReesPresentation:
    base: Ideal
    center: Ideal
    rees_family: FamilyOverDVR


def rees_family(Q: Ideal, I: Ideal, parameter: str = "t") -> ReesPresentation:
    """Extended Rees algebra ``Q[t, t^-1 I]`` with one variable per generator of ``I``."""
    ring = Q.ring
    gens = [g for g in I.generators if not g.is_zero()]
    if parameter in ring.variables:
        raise ValueError(f"parameter {parameter!r} clashes with a variable of Q")
    names: list = []
    for _ in gens:
        taken = PolyRing(ring.variables + tuple(names)) if names else ring
        names.append(_fresh(taken, "U"))
    big = PolyRing(
        (parameter,) + ring.variables + tuple(names),
        (0,) + ring.weights + tuple(max(g.weighted_degree(), 1) for g in gens),
        base_parameter=parameter,
    )
    t = big.var(parameter)
    rels = [g.to_ring(big) for g in Q.groebner()]
    rels += [t * big.var(n) - g.to_ring(big) for n, g in zip(names, gens)]
    fam = make_family(Ideal(big, rels), RingMap.identity(big))
    return ReesPresentation(Q, I, fam)


def balanced_normal_cone(Q: Ideal, I: Ideal, seed: int = 0, max_rounds: int = DEFAULT_MAX_ROUNDS) -> LimitReport:
    """Branch limit of the Rees family; ``base_change_degree`` is the denominator bound ``N``.

    ``Q`` is assumed reduced and ``I`` to satisfy ``\\bigcap I^n = 0``.
    """
    rees = rees_family(Q, I)
    gr = special_fiber_ideal(rees.rees_family.ideal)
    gr_verdict = is_reduced(gr, seed)
    report = branch_limit(rees.rees_family, seed, max_rounds)
    gr_h = hilbert_series(gr)
    report.extras = {
        "normal_cone": [to_text(g) for g in gr.groebner()],
        "normal_cone_reduced": gr_verdict.verdict,
        "normal_cone_witness": to_text(gr_verdict.witness) if gr_verdict.witness is not None else None,
        "denominator_bound": report.base_change_degree,
        "series_agree": gr_h.same_series(report.fiber_hilbert),
    }
    report.extras["_gr"] = gr
    report.extras["_gr_verdict"] = gr_verdict
    report.extras["_gr_hilbert"] = gr_h
    return report


@dataclass
class SamuelValue:
    value: Fraction
    stabilized: bool
    orders: list
    infinite: bool = False


def _power_plus(Q: Ideal, I: Ideal, n: int, cache: dict) -> Ideal:
    if n not in cache:
        if n == 0:
            cache[n] = Ideal(Q.ring, [1])
        else:
            prev = _power_plus(Q, I, n - 1, cache)
            gens = [g * f for g in prev.generators for f in I.generators]
            cache[n] = Ideal(Q.ring, Ideal(Q.ring, Q.groebner() + gens).groebner())
    return cache[n]


def _affine_period(orders):
    """Slope ``a/p`` if ``n_{k+p} - n_k`` is constant over the second half of the window."""
    K = len(orders)
    start = K // 2
    for p in range(1, max(1, K - start)):
        diffs = {orders[k + p] - orders[k] for k in range(start - 1, K - p)}
        if len(diffs) == 1:
            return Fraction(diffs.pop(), p)
    return None


def samuel_order(Q: Ideal, I: Ideal, q: Poly, k_max: int = 8, n_cap: int | None = None) -> SamuelValue:
    """Homogenised order ``lim f(q^k)/k`` with ``f(g) = max{n : g in I^n}`` modulo ``Q``."""
    ring = Q.ring
    q = q if isinstance(q, Poly) else ring.parse(str(q))
    cache: dict = {}
    if Q.contains(q):
        return SamuelValue(Fraction(0), True, [], infinite=True)
    n_cap = n_cap or 8 * k_max * max(1, q.total_degree()) + 8
    orders = []
    n = 0
    qk = ring.one()
    for k in range(1, k_max + 1):
        qk = Q.reduce(qk * q)
        while n < n_cap and _power_plus(Q, I, n + 1, cache).contains(qk):
            n += 1
        if n >= n_cap:
            return SamuelValue(Fraction(0), False, orders, infinite=True)
        orders.append(n)
    slope = _affine_period(orders)
    if slope is None:
        best = max(Fraction(o, k + 1) for k, o in enumerate(orders))
        return SamuelValue(best, False, orders)
    return SamuelValue(slope, True, orders)
