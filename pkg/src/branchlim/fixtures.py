"""Named families and branchvarieties used by the tests, demos and CLI examples."""

from __future__ import annotations

from .algebra import PresentedAlgebra, disjoint_union
from .forest import kollar_double
from .groebner import Ideal, intersect_all
from .limits import FamilyOverDVR, make_family
from .multipoly import PolyRing, RingMap, poly_ring


def _family(names: str, gens, ambient: str | None = None, images: dict | None = None) -> FamilyOverDVR:
    ring = poly_ring(names, base_parameter="t")
    ideal = Ideal(ring, list(gens))
    smap = None
    if ambient is not None:
        src = poly_ring(ambient, base_parameter="t")
        smap = RingMap.from_dict(src, ring, images or {})
    return make_family(ideal, smap)


# --------------------------------------------------------------------------
# families over Q[t]_(t)


def conic_family() -> FamilyOverDVR:
    """Smooth conics degenerating to a double line."""
    return _family("t,x0,x1,x2", ["x1^2 - t*x0*x2"])


def two_point_family() -> FamilyOverDVR:
    """The two points ``u = ±sqrt(t)`` on the projective line."""
    return _family("t,x0,u", ["u^2 - t*x0^2"])


def quintic_point_family() -> FamilyOverDVR:
    """Five points on a line collapsing to a quintuple point."""
    return _family("t,x,y", ["(y^2 + t*x^2)*(y^3 - t*x^3)"])


def skew_lines_family() -> FamilyOverDVR:
    """Two skew lines in P^3 moving together until they meet."""
    ring = poly_ring("t,x,y,z,w", base_parameter="t")
    lines = intersect_all([Ideal(ring, ["z", "x"]), Ideal(ring, ["z - t*w", "y"])])
    return make_family(Ideal(ring, lines.groebner()))


def skew_lines_affine_family() -> FamilyOverDVR:
    """The same family in the affine chart ``w = 1``."""
    ring = poly_ring("t,x,y,z", base_parameter="t")
    lines = intersect_all([Ideal(ring, ["z", "x"]), Ideal(ring, ["z - t", "y"])])
    return make_family(Ideal(ring, lines.groebner()))


def three_lines_family() -> FamilyOverDVR:
    """Three concurrent lines in P^2 mapped to P^1; two of them merge in the limit."""
    return _family(
        "t,u0,u1,u2",
        ["u1*u2*((1 + t)*u1 + t*u2)"],
        ambient="t,T0,T1",
        images={"t": "t", "T0": "u0", "T1": "u1 + u2"},
    )


def constant_family() -> FamilyOverDVR:
    """Two crossing lines, independent of ``t``."""
    return _family("t,x0,x1,x2", ["x0*x1"])


LIMIT_FAMILIES = {
    "conic": conic_family,
    "two-point": two_point_family,
    "quintic": quintic_point_family,
    "skew-lines": skew_lines_family,
    "three-lines": three_lines_family,
    "constant": constant_family,
}


# --------------------------------------------------------------------------
# branchvarieties


def _embedded(names: str, gens) -> PresentedAlgebra:
    ring = poly_ring(names)
    return PresentedAlgebra.embedded(Ideal(ring, list(gens)))


def _union_of(names: str, components) -> PresentedAlgebra:
    ring = poly_ring(names)
    ideal = intersect_all([Ideal(ring, list(c)) for c in components])
    return PresentedAlgebra.embedded(Ideal(ring, ideal.groebner()))


def conic() -> PresentedAlgebra:
    return _embedded("x0,x1,x2", ["x1^2 - x0*x2"])


def plane_cubic() -> PresentedAlgebra:
    return _embedded("x0,x1,x2", ["x0^3 + x1^3 + x2^3 - x0*x1*x2"])


def projective_plane() -> PresentedAlgebra:
    return _embedded("x0,x1,x2", [])


def twisted_cubic() -> PresentedAlgebra:
    return _embedded("x,y,z,w", ["x*z - y^2", "y*w - z^2", "x*w - y*z"])


def crossing_lines_and_point() -> PresentedAlgebra:
    return _union_of("x,y,z", [["x"], ["y"], ["x - z", "y - z"]])


def disjoint_lines() -> PresentedAlgebra:
    return _union_of("x,y,z,w", [["z", "x"], ["z - w", "y"]])


def two_crossing_pairs() -> PresentedAlgebra:
    """Two disjoint pairs of crossing lines in P^3: ``h = 4d + 2``, two trees of two leaves."""
    return _union_of(
        "x,y,z,w",
        [["x", "y"], ["x", "z"], ["w", "y - z"], ["w", "y + z - x"]],
    )


def line_and_three_lines() -> PresentedAlgebra:
    """A line disjoint from three non-coplanar concurrent lines: ``h = 4d + 2``, trees of 3 and 1 leaves."""
    return _union_of(
        "x,y,z,w",
        [["x - 2*w", "y - 3*z"], ["x - w", "y - w"], ["x - w", "z - w"], ["y - w", "z - w"]],
    )


def quartic_surface() -> PresentedAlgebra:
    """A smooth quartic surface in P^3 (a K3 surface)."""
    return _embedded("x,y,z,w", ["x^4 + y^4 + z^4 + w^4 + x*y*z*w + 2*x^3*y - 3*z^2*w^2"])


def _double_along(gens) -> PresentedAlgebra:
    ring = poly_ring("x0,x1")
    return kollar_double(Ideal(ring, list(gens))).algebra


def tangent_pairs() -> PresentedAlgebra:
    """Two pairs of tangent lines mapping to P^1: root labels 0 and 0."""
    pair = _double_along(["x0^2"])
    return disjoint_union([pair, pair])


def crossing_and_triple_pairs() -> PresentedAlgebra:
    """A crossing pair and a pair glued along a triple point: root labels 1 and -1."""
    return disjoint_union([_double_along(["x0"]), _double_along(["x0^3"])])


def three_lines_limit() -> PresentedAlgebra:
    """Branch limit of :func:`three_lines_family`, precomputed presentation."""
    ring = PolyRing(("u0", "u1", "u2", "y"), (1, 1, 1, 2))
    src = poly_ring("T0,T1")
    ideal = Ideal(ring, ["u2^2*y + y^2", "u1*y", "u1*u2"])
    return PresentedAlgebra(ring, ideal, RingMap.from_dict(src, ring, {"T0": "u0", "T1": "u1 + u2"}))


FOREST_FIXTURES = {
    "conic": conic,
    "plane-cubic": plane_cubic,
    "projective-plane": projective_plane,
    "twisted-cubic": twisted_cubic,
    "crossing-lines-and-point": crossing_lines_and_point,
    "disjoint-lines": disjoint_lines,
    "two-crossing-pairs": two_crossing_pairs,
    "line-and-three-lines": line_and_three_lines,
    "quartic-surface": quartic_surface,
    "tangent-pairs": tangent_pairs,
    "crossing-and-triple-pairs": crossing_and_triple_pairs,
    "three-lines-limit": three_lines_limit,
}
