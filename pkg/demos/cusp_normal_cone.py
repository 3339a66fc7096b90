"""Normal cone of the cusp ``y^2 = x^3`` at the origin, plain and balanced."""

from branchlim.groebner import Ideal
from branchlim.limits import balanced_normal_cone, samuel_order
from branchlim.multipoly import PolyRing, to_text

if __name__ == "__main__":
    R = PolyRing(("x", "y"), (2, 3))
    Q, I = Ideal(R, ["y^2 - x^3"]), Ideal(R, ["x", "y"])
    rep = balanced_normal_cone(Q, I)
    print("gr_I Q reduced?      ", rep.extras["normal_cone_reduced"])
    print("nilpotent witness:   ", rep.extras["normal_cone_witness"])
    print("base change degree N:", rep.base_change_degree)
    print("balanced cone:       ", sorted(to_text(g) for g in rep.special_fiber.ideal.groebner()))
    print("balanced reduced?    ", rep.reducedness.verdict)
    for q in ("x", "y"):
        print(f"samuel order of {q}:   ", samuel_order(Q, I, R.parse(q)).value)
