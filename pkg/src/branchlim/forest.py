"""Labeled rooted forests of branchvarieties.

The forest of ``X`` has one tree per connected component; a root is labeled
with ``P(0)`` of that component and its children are the trees of a general
hyperplane section.  Sections are cut with a random integer combination of
the coordinate images (the pull-back of a hyperplane through the structure
map), and every forest is recomputed with a second seed before it is
returned.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass

from .algebra import PresentedAlgebra, disjoint_union
from .decompose import (
    RANDOM_BOUND,
    DegreeSequence,
    _minimal,
    component_groups,
    minimal_primes,
    relevant_primes,
)
from .exact_arith import UniPoly, binomial_poly
from .groebner import Ideal, eliminate, intersect, intersect_all, krull_dimension
from .hilbert import hilbert_series, require_polynomial
from .multipoly import PolyRing, RingMap


class ForestError(RuntimeError):
    """The forest could not be certified (seed disagreement, incomplete splitting)."""


# --------------------------------------------------------------------------
# the Forest type


def _canon(tree):
    label, children = tree
    kids = tuple(sorted((_canon(c) for c in children), key=_sort_key))
    return (int(label), kids)


def _nested(tree):
    label, children = tree
    return [label, [_nested(c) for c in children]]


def _sort_key(tree):
    return (tree[0], json.dumps(_nested(tree), separators=(",", ":")))


@dataclass(frozen=True)
class Forest:
    """A labeled rooted forest stored canonically as nested ``(label, children)`` tuples."""

    trees: tuple

    @classmethod
    def from_trees(cls, trees) -> "Forest":
        canon = [_canon(t) for t in trees]
        canon.sort(key=_sort_key)
        return cls(tuple(canon))

    @classmethod
    def from_nested(cls, data) -> "Forest":
        """Parse ``[label, [children]]`` (one tree) or a list of such trees."""
        if data and isinstance(data[0], int):
            data = [data]

        def build(node):
            if not isinstance(node, list) or len(node) != 2 or not isinstance(node[0], int):
                raise ValueError(f"malformed forest node {node!r}")
            return (node[0], tuple(build(c) for c in node[1]))

        return cls.from_trees([build(t) for t in data])

    def canonical(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"))

    def to_json(self) -> list:
        return [_nested(t) for t in self.trees]

    @property
    def vertices(self) -> list[dict]:
        """Vertices as ``{id, rank, label, parent}`` in preorder."""
        out: list = []

        def walk(tree, rank, parent):
            vid = len(out)
            out.append({"id": vid, "rank": rank, "label": tree[0], "parent": parent})
            for c in tree[1]:
                walk(c, rank + 1, vid)

        for t in self.trees:
            walk(t, 0, None)
        return out

    def relabel(self, label: int) -> "Forest":
        def go(tree):
            return (label, tuple(go(c) for c in tree[1]))

        return Forest.from_trees([go(t) for t in self.trees])

    def root_labels(self) -> list[int]:
        return [t[0] for t in self.trees]

    def __len__(self):
        return len(self.vertices)

    def __str__(self):
        return self.canonical()


def forest_hilbert_polynomial(F: Forest) -> list:
    """``sum_v label(v) * C(d + rk(v) - 1, rk(v))`` as ascending coefficients."""
    acc = UniPoly()
    for v in F.vertices:
        r = v["rank"]
        acc = acc + binomial_poly(r, r - 1) * v["label"]
    return list(acc.coeffs)


def _leaf_counts(tree) -> int:
    if not tree[1]:
        return 1
    return sum(_leaf_counts(c) for c in tree[1])


def forest_degree_sequence(F: Forest) -> DegreeSequence:
    counts: dict = {}

    def walk(tree, rank):
        if not tree[1]:
            counts[rank] = counts.get(rank, 0) + 1
        for c in tree[1]:
            walk(c, rank + 1)

    for t in F.trees:
        walk(t, 0)
    if not counts:
        return DegreeSequence([])
    b = [0] * (max(counts) + 1)
    for r, n in counts.items():
        b[r] = n
    return DegreeSequence(b)


def validate_forest_labels(F: Forest) -> list[dict]:
    """Vertices breaking the one-leaf rule (label 1) or the top-fork rule (label at most 1)."""
    out = []

    def walk(tree, rank, path):
        leaves = _leaf_counts(tree)
        if leaves == 1 and tree[0] != 1:
            out.append({"rule": "single-leaf", "rank": rank, "label": tree[0], "path": path})
        if leaves > 1 and all(_leaf_counts(c) == 1 for c in tree[1]) and tree[0] > 1:
            out.append({"rule": "top-fork", "rank": rank, "label": tree[0], "path": path})
        for i, c in enumerate(tree[1]):
            walk(c, rank + 1, path + [i])

    for i, t in enumerate(F.trees):
        walk(t, 0, [i])
    return out


# --------------------------------------------------------------------------
# computing forests


def _random_section(images, rng: random.Random):
    ring = images[0].ring
    acc = ring.zero()
    for img in images:
        c = 0
        while c == 0:
            c = rng.randint(-RANDOM_BOUND, RANDOM_BOUND)
        acc = acc + img * c
    return acc


def _primes_of(I: Ideal, seed: int):
    dec = minimal_primes(I, seed)
    if not dec.complete:
        raise ForestError("cannot certify components: decomposition incomplete")
    return relevant_primes(dec.minimal_primes, True)


def _label(primes) -> int:
    J = primes[0] if len(primes) == 1 else intersect_all(primes)
    return require_polynomial(hilbert_series(J)).euler_char


def _trees(primes, images, rng: random.Random, seed: int):
    out = []
    for group in component_groups(primes, True):
        if len(group) == 1 and krull_dimension(group[0]) == 1:
            # a closed point over Q of degree e is e reduced geometric points
            h = require_polynomial(hilbert_series(group[0]))
            if h.euler_char % h.degree:
                raise ForestError("point component with non-integral geometric label")
            out += [(h.euler_char // h.degree, ())] * h.degree
            continue
        label = _label(group)
        ell = _random_section(images, rng)
        section = []
        for P in group:
            section += _primes_of(P + [ell], seed)
        section = _minimal(section)
        out.append((label, tuple(_trees(section, images, rng, seed))))
    return out


def _as_algebra(X) -> PresentedAlgebra:
    if isinstance(X, PresentedAlgebra):
        return X
    if isinstance(X, Ideal):
        return PresentedAlgebra.embedded(X)
    raise TypeError("expected a PresentedAlgebra or an Ideal")


def compute_forest(X, seed: int = 0, check: bool = True) -> Forest:
    """Forest of the reduced scheme ``X``; re-checked with ``seed + 1``."""
    X = _as_algebra(X)
    images = [img for img in X.coordinate_images() if not img.is_zero()]
    primes = _primes_of(X.ideal, seed)
    if not primes:
        return Forest(())
    forest = Forest.from_trees(_trees(primes, images, random.Random(seed), seed))
    if check:
        other = Forest.from_trees(_trees(primes, images, random.Random(seed + 1), seed + 1))
        if other != forest:
            raise ForestError("non-generic section suspected - rerun with new seed")
    return forest


def section_image_multiplicities(X, keep, seed: int = 0) -> list[int]:
    """Push a general hyperplane section forward to the subring in ``keep``.

    Section points are grouped by their image prime in ``Q[keep]``; each image
    point gets the total degree lying over it divided by its own degree.
    """
    X = _as_algebra(X)
    rng = random.Random(seed)
    images = [img for img in X.coordinate_images() if not img.is_zero()]
    ell = _random_section(images, rng)
    section = []
    for P in _primes_of(X.ideal, seed):
        section += _primes_of(P + [ell], seed)
    section = _minimal(section)
    drop = [v for v in X.ring.variables if v not in keep]
    groups: list = []
    for P in section:
        Q = eliminate(P, drop) if drop else P
        dP = hilbert_series(P).degree
        for entry in groups:
            if _same_ideal(entry[0], Q):
                entry[1] += dP
                break
        else:
            groups.append([Q, dP])
    out = []
    for Q, total in groups:
        dQ = hilbert_series(Q).degree
        out.append(int(total // dQ))
    return sorted(out, reverse=True)


def _same_ideal(P: Ideal, Q: Ideal) -> bool:
    return P.contains_ideal(Q) and Q.contains_ideal(P)


# --------------------------------------------------------------------------
# fixture generators


def stanley_reisner_from_forest(F: Forest) -> Ideal:
    """Ideal of the order complex of ``F``: products of incomparable vertex pairs."""
    verts = F.vertices
    ring = PolyRing(tuple(f"v{v['id']}" for v in verts))
    ancestors: dict = {}
    for v in verts:
        anc = set()
        p = v["parent"]
        while p is not None:
            anc.add(p)
            p = verts[p]["parent"]
        ancestors[v["id"]] = anc
    gens = []
    for a in verts:
        for b in verts:
            i, j = a["id"], b["id"]
            if i < j and i not in ancestors[j] and j not in ancestors[i]:
                gens.append(ring.var(f"v{i}") * ring.var(f"v{j}"))
    return Ideal(ring, gens)


def _difference(poly, k):
    """Apply ``(Δg)(d) = g(d) - g(d - 1)`` ``k`` times to ascending coefficients."""
    p = UniPoly(poly)
    for _ in range(k):
        p = p - p(UniPoly([-1, 1]))
    return p


@dataclass
class KollarDouble:
    algebra: PresentedAlgebra
    forest: Forest
    hilbert_z: list
    predicted_hilbert: list
    label_report: list

    def to_json(self) -> dict:
        from .hilbert import json_rational

        return {
            "forest": self.forest.to_json(),
            "hilbert": [json_rational(c) for c in self.algebra.hilbert().polynomial],
            "predicted_hilbert": [json_rational(c) for c in self.predicted_hilbert],
            "labels": self.label_report,
            "label_formula_discrepancy": any(
                r["stated_formula"] != r["computed"] for r in self.label_report
            ),
        }


def kollar_double(Z: Ideal, seed: int = 0) -> KollarDouble:
    """Two copies of projective space glued along ``Z``.

    The ring is generated by the diagonal coordinates and by ``E_j``, the pair
    ``(g_j, 0)`` for each generator ``g_j`` of ``Z``; its ideal is
    ``(E_j - g_j) ∩ (E_j)``.
    """
    src = Z.ring
    n = src.nvars - 1
    gens = [g for g in Z.groebner()]
    if Z.is_unit():
        part = PresentedAlgebra.embedded(Ideal(src, []))
        alg = disjoint_union([part, part])
    else:
        names = tuple(f"E{j}" for j in range(len(gens)))
        ring = PolyRing(src.variables + names, src.weights + tuple(g.weighted_degree() for g in gens))
        first = Ideal(ring, [ring.var(e) - g.to_ring(ring) for e, g in zip(names, gens)])
        second = Ideal(ring, [ring.var(e) for e in names])
        ideal = intersect(first, second)
        smap = RingMap(src, ring, tuple(ring.var(v) for v in src.variables))
        alg = PresentedAlgebra(ring, Ideal(ring, ideal.groebner()), smap)
    forest = compute_forest(alg, seed)
    hz = hilbert_series(Z)
    hz_poly = hz.polynomial or []
    q = list(binomial_poly(n, n).coeffs)
    size = max(len(q), len(hz_poly))
    pad = lambda p: list(p) + [0] * (size - len(p))  # noqa: E731
    predicted = list(UniPoly([2 * a - b for a, b in zip(pad(q), pad(hz_poly))]).coeffs)
    # compare labels along the stem of the fork with both closed forms
    report = []
    dim_z = hz.dimension
    trees = forest.trees
    stem = trees[0] if len(trees) == 1 else None
    for k in range(max(dim_z, -1) + 1):
        dk = _difference(hz_poly, k)
        val = dk(0) if not dk.is_zero() else 0
        computed = stem[0] if stem is not None else None
        report.append(
            {
                "rank": k,
                "computed": computed,
                "stated_formula": int(1 - val),
                "gluing_formula": int(2 - val),
            }
        )
        if stem is not None:
            stem = stem[1][0] if len(stem[1]) == 1 else None
    return KollarDouble(alg, forest, hz_poly, predicted, report)


def tuning_fork_shape(F: Forest, fork_rank: int, top_rank: int) -> bool:
    """One stem vertex per rank up to ``fork_rank``, then two chains up to ``top_rank``."""
    if len(F.trees) != 1:
        return fork_rank < 0 and len(F.trees) == 2 and all(_chain_length(t) == top_rank + 1 for t in F.trees)
    node = F.trees[0]
    for _ in range(fork_rank):
        if len(node[1]) != 1:
            return False
        node = node[1][0]
    if len(node[1]) != 2:
        return False
    return all(_chain_length(c) == top_rank - fork_rank for c in node[1])


def _chain_length(tree) -> int:
    n = 1
    while tree[1]:
        if len(tree[1]) != 1:
            return -1
        tree = tree[1][0]
        n += 1
    return n
