"""Hilbert limits versus branch limits on the small families.

Run with ``python demos/limits_walkthrough.py``.
"""

from branchlim.fixtures import conic_family, quintic_point_family, skew_lines_family
from branchlim.limits import branch_limit, hilbert_limit
from branchlim.multipoly import to_text


def show(name, family):
    limit = hilbert_limit(family)
    rep = branch_limit(family, with_forest=True)
    print(f"== {name}")
    print("  Hilbert limit:   ", sorted(to_text(g) for g in limit.groebner()))
    print("  multiplicities:  ", rep.multiplicities)
    print("  base change:      t = s^%d" % rep.base_change_degree)
    print("  branch limit:    ", sorted(to_text(g) for g in rep.special_fiber.ideal.groebner()))
    print("  reduced:         ", rep.reducedness.verdict)
    print("  Hilbert poly:    ", [str(c) for c in rep.fiber_hilbert.polynomial])
    print("  forest:          ", rep.fiber_forest)


if __name__ == "__main__":
    show("conic degenerating to a double line", conic_family())
    show("two skew lines meeting", skew_lines_family())
    show("five points on a line", quintic_point_family())
