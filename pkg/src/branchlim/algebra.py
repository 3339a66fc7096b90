"""Graded algebras presented as quotients, with a finite map to projective space."""

from __future__ import annotations

from dataclasses import dataclass, field

from .groebner import Ideal, eliminate
from .hilbert import HilbertData, hilbert_series
from .multipoly import Poly, PolyRing, RingMap, to_text


@dataclass
class PresentedAlgebra:
    """``ring / ideal`` together with the structure map from ``Q[x_0..x_n]``.

    The images of the ambient coordinates must have degree one; they define
    the line bundle ``L`` used for Hilbert polynomials and hyperplane sections.
    """

    ring: PolyRing
    ideal: Ideal
    structure_map: RingMap
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @classmethod
    def embedded(cls, ideal: Ideal) -> "PresentedAlgebra":
        """A subscheme of projective space: the structure map is the identity."""
        return cls(ideal.ring, ideal, RingMap.identity(ideal.ring))

    @property
    def ambient(self) -> PolyRing:
        return self.structure_map.source

    def coordinate_images(self) -> list[Poly]:
        """Images of the graded ambient coordinates."""
        src = self.structure_map.source
        return [self.structure_map.images[i] for i in src.graded_indices()]

    def image_ideal(self) -> Ideal:
        """Kernel of the structure map on the graded ambient coordinates (the image scheme)."""
        src = self.ambient
        graded = [src.variables[i] for i in src.graded_indices()]
        tags = {v: f"_img_{v}" for v in graded}
        big = PolyRing(
            tuple(tags[v] for v in graded) + self.ring.variables,
            tuple(src.weights[src.index(v)] for v in graded) + self.ring.weights,
            self.ring.base_parameter,
        )
        rels = [g.to_ring(big) for g in self.ideal.groebner()]
        for v, img in zip(graded, self.coordinate_images()):
            rels.append(big.var(tags[v]) - img.to_ring(big))
        image = eliminate(Ideal(big, rels), self.ring.variables)
        back = image.ring.rename({tags[v]: v for v in graded})
        return Ideal(back, [Poly(back, g.terms) for g in image.generators])

    def hilbert(self) -> HilbertData:
        return hilbert_series(self.ideal)

    def to_json(self) -> dict:
        return {
            "ring": self.ring.describe(),
            "weights": {v: w for v, w in zip(self.ring.variables, self.ring.weights)},
            "ideal": [to_text(g) for g in self.ideal.groebner()],
            "structure_map": {
                v: to_text(img) for v, img in zip(self.ambient.variables, self.structure_map.images)
            },
        }


def disjoint_union(parts: list[PresentedAlgebra], ambient: PolyRing | None = None) -> PresentedAlgebra:
    """Product ring of the parts: mixed products vanish, coordinates map to sums.

    All parts must map to the same projective space; variables are renamed
    with a ``_k`` suffix per part.
    """
    if not parts:
        raise ValueError("empty union")
    ambient = ambient or parts[0].ambient
    names: list = []
    weights: list = []
    renamed = []
    for k, part in enumerate(parts):
        mapping = {v: f"{v}_{k}" for v in part.ring.variables}
        names += [mapping[v] for v in part.ring.variables]
        weights += list(part.ring.weights)
        renamed.append(mapping)
    ring = PolyRing(tuple(names), tuple(weights))
    gens: list = []
    blocks = []
    for part, mapping in zip(parts, renamed):
        sub = part.ring.rename(mapping)
        gens += [Poly(ring, {}) + Poly(sub, g.terms).to_ring(ring) for g in part.ideal.groebner()]
        blocks.append([ring.var(mapping[v]) for v in part.ring.variables])
    for a in range(len(blocks)):
        for b in range(a + 1, len(blocks)):
            for u in blocks[a]:
                for w in blocks[b]:
                    gens.append(u * w)
    images = []
    for i, v in enumerate(ambient.variables):
        acc = ring.zero()
        for part, mapping in zip(parts, renamed):
            img = part.structure_map.images[i]
            acc = acc + Poly(part.ring.rename(mapping), img.terms).to_ring(ring)
        images.append(acc)
    return PresentedAlgebra(ring, Ideal(ring, gens), RingMap(ambient, ring, tuple(images)))
