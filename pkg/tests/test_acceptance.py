"""Acceptance criteria 1-15, one test each.

Every test records a single ``criterion N: PASS|FAIL`` line, printed in the
terminal summary (see ``conftest.py``).  Run this file directly with
``python tests/test_acceptance.py`` to get only those lines.
"""

import subprocess
import sys
import time
from contextlib import contextmanager
from fractions import Fraction

import pytest

import conftest
from branchlim.cli import Job, emit_report, run
from branchlim.decompose import DegreeSequence, connected_components, degree_sequence, is_reduced, multiplicities
from branchlim.fixtures import (
    FOREST_FIXTURES,
    LIMIT_FAMILIES,
    conic_family,
    crossing_and_triple_pairs,
    line_and_three_lines,
    quartic_surface,
    quintic_point_family,
    skew_lines_family,
    tangent_pairs,
    three_lines_family,
    two_crossing_pairs,
    two_point_family,
)
from branchlim.forest import (
    Forest,
    compute_forest,
    forest_degree_sequence,
    forest_hilbert_polynomial,
    kollar_double,
    section_image_multiplicities,
    stanley_reisner_from_forest,
    tuning_fork_shape,
)
from branchlim.groebner import Ideal, ideal_equal
from branchlim.limits import (
    balanced_normal_cone,
    branch_limit,
    further_base_change_stability,
    hilbert_limit,
    k_equivalence_check,
    normalize_along_t,
    samuel_order,
)
from branchlim.multipoly import PolyRing, poly_ring, to_text


@contextmanager
def criterion(number: int, title: str, seconds: float | None = None):
    start = time.perf_counter()
    detail = ""
    try:
        yield
        elapsed = time.perf_counter() - start
        if seconds is not None and elapsed >= seconds:
            detail = f"took {elapsed:.2f}s, limit {seconds}s"
            raise AssertionError(detail)
        detail = f"{elapsed:.2f}s"
        conftest.ACCEPTANCE_LINES[number] = f"criterion {number:2d}: PASS  {title} ({detail})"
    except BaseException as exc:
        detail = detail or f"{type(exc).__name__}: {exc}"
        conftest.ACCEPTANCE_LINES[number] = f"criterion {number:2d}: FAIL  {title} ({detail})"
        raise


def texts(I):
    return sorted(to_text(g) for g in I.groebner())


def test_01_conic():
    with criterion(1, "conic family: m = 2, reduced, 2d+1, image x1 = 0", 1.0):
        rep = branch_limit(conic_family())
        assert rep.base_change_degree == 2
        assert rep.reducedness.verdict == "reduced"
        assert rep.fiber_hilbert.polynomial == [1, 2]
        assert texts(rep.special_fiber.image_ideal()) == ["x1"]


def test_02_skew_lines():
    with criterion(2, "skew lines: monomial Hilbert limit, no base change, two chains", 1.0):
        F = skew_lines_family()
        assert texts(hilbert_limit(F)) == ["x*y", "x*z", "y*z", "z^2"]
        rep = branch_limit(F)
        assert rep.base_change_degree == 1
        assert len(connected_components(rep.special_fiber.ideal)) == 2
        forest = compute_forest(rep.special_fiber)
        assert forest == Forest.from_nested([[1, [[1, []]]], [1, [[1, []]]]])


def test_03_quintic():
    with criterion(3, "quintic points: multiplicities {2,3}, m = 6, five reduced points", 10.0):
        rep = branch_limit(quintic_point_family())
        assert sorted(rep.multiplicities) == [2, 3]
        assert rep.base_change_degree == 6
        assert rep.fiber_hilbert.polynomial == [5]
        assert rep.reducedness.verdict == "reduced"
        assert is_reduced(rep.special_fiber.ideal).verdict == "reduced"


def test_04_two_points():
    with criterion(4, "two-point family: m = 2, two reduced points", 1.0):
        rep = branch_limit(two_point_family())
        assert rep.base_change_degree == 2
        assert rep.fiber_hilbert.polynomial == [2]
        assert is_reduced(rep.special_fiber.ideal).verdict == "reduced"


def test_05_three_lines():
    with criterion(5, "three lines: connected, h = 3d, root label 0, section pattern 2+1", 10.0):
        rep = branch_limit(three_lines_family())
        fiber = rep.special_fiber
        assert len(connected_components(fiber.ideal)) == 1
        assert rep.fiber_hilbert.polynomial == [0, 3]
        forest = compute_forest(fiber)
        assert forest.root_labels() == [0]
        assert section_image_multiplicities(fiber, ["u0", "u1", "u2"]) == [2, 1]
        # the same pattern on the Hilbert limit, read as multiplicities of a line section
        limit = hilbert_limit(three_lines_family())
        assert texts(limit) == ["u1^2*u2"]
        ring = limit.ring
        section = Ideal(ring, limit.groebner() + [ring.parse("3*u0 - 7*u1 - 7*u2")])
        assert sorted((m for _, m in multiplicities(section)), reverse=True) == [2, 1]


def test_06_forest_identities():
    with criterion(6, "forest identities on the fixture corpus", 60.0):
        corpus = {name: make() for name, make in FOREST_FIXTURES.items()}
        for name in ("conic", "quintic", "skew-lines", "three-lines"):
            corpus[f"limit-{name}"] = branch_limit(LIMIT_FAMILIES[name]()).special_fiber
        assert len(corpus) >= 10
        for name, X in corpus.items():
            F = compute_forest(X)
            assert forest_hilbert_polynomial(F) == X.hilbert().polynomial, name
            assert forest_degree_sequence(F) == degree_sequence(X.ideal), name


def test_07_p3_discrimination():
    with criterion(7, "P^3 pair: same (h, b), different forests"):
        X, Y = two_crossing_pairs(), line_and_three_lines()
        assert X.hilbert().polynomial == Y.hilbert().polynomial == [2, 4]
        assert degree_sequence(X.ideal) == degree_sequence(Y.ideal) == DegreeSequence([0, 4])
        FX, FY = compute_forest(X), compute_forest(Y)
        assert FX.canonical() != FY.canonical()
        assert sorted(len(t[1]) for t in FX.trees) == [2, 2]
        assert sorted(len(t[1]) for t in FY.trees) == [1, 3]


def test_08_root_labels():
    with criterion(8, "root labels (0,0) and (1,-1)"):
        assert sorted(compute_forest(tangent_pairs()).root_labels()) == [0, 0]
        assert sorted(compute_forest(crossing_and_triple_pairs()).root_labels()) == [-1, 1]


def test_09_quartic_surface():
    with criterion(9, "quartic surface: labels 2, -2 and four leaves", 60.0):
        F = compute_forest(quartic_surface())
        assert F.to_json() == [[2, [[-2, [[1, []], [1, []], [1, []], [1, []]]]]]]


def test_10_stability():
    with criterion(10, "further base change k = 2, 3, 5 leaves every limit unchanged"):
        for name, make in LIMIT_FAMILIES.items():
            rep = branch_limit(make(), with_forest=True)
            for k in (2, 3, 5):
                assert further_base_change_stability(rep, k), (name, k)


def test_11_k_shadow():
    with criterion(11, "special fibers of each family and its closure have equal series"):
        for name, make in LIMIT_FAMILIES.items():
            assert k_equivalence_check(make()), name


def test_12_cusp_normal_cone():
    with criterion(12, "cusp: gr non-reduced, balanced reduced, N = 2, order 3/2", 10.0):
        R = PolyRing(("x", "y"), (2, 3))
        Q, I = Ideal(R, ["y^2 - x^3"]), Ideal(R, ["x", "y"])
        rep = balanced_normal_cone(Q, I)
        assert rep.extras["normal_cone_reduced"] == "not_reduced"
        assert rep.extras["normal_cone_witness"] is not None
        assert rep.reducedness.verdict == "reduced"
        assert rep.base_change_degree == 2
        value = samuel_order(Q, I, R.parse("y"))
        assert value.stabilized and value.value == Fraction(3, 2)
        assert (value.value * rep.base_change_degree).denominator == 1
        gr_h = rep.extras["_gr_hilbert"]
        assert gr_h.same_series(rep.fiber_hilbert)


def _trees_with(n):
    """All unordered rooted trees on ``n`` vertices with at most 3 children per vertex."""
    if n == 1:
        return [(1, ())]
    out = set()
    for kids in _forests(n - 1, 3):
        out.add((1, kids))
    return sorted(out)


def _forests(n, max_trees=None):
    out = set()

    def rec(rem, acc, floor):
        if rem == 0:
            out.add(tuple(acc))
            return
        if max_trees is not None and len(acc) == max_trees:
            return
        for size in range(1, rem + 1):
            for t in _trees_with(size):
                if (size, t) < floor:
                    continue
                rec(rem - size, acc + [t], (size, t))

    rec(n, [], (0, ()))
    return sorted(out)


def test_13_stanley_reisner():
    with criterion(13, "Stanley-Reisner round trip on all forests with <= 8 vertices", 120.0):
        count = 0
        for n in range(1, 9):
            for trees in _forests(n):
                F = Forest.from_trees(trees)
                assert compute_forest(stanley_reisner_from_forest(F)) == F.relabel(1)
                count += 1
        assert count == 421


def test_14_kollar_doubles():
    with criterion(14, "doubles along two points and a line: 2q - h, tuning forks, flag"):
        P1 = poly_ring("x0,x1")
        k = kollar_double(Ideal(P1, ["x0*x1"]))
        assert k.algebra.hilbert().polynomial == k.predicted_hilbert == [0, 2]
        assert tuning_fork_shape(k.forest, 0, 1)
        assert k.to_json()["label_formula_discrepancy"]
        P3 = poly_ring("x0,x1,x2,x3")
        k = kollar_double(Ideal(P3, ["x2", "x3"]))
        assert k.algebra.hilbert().polynomial == k.predicted_hilbert
        assert tuning_fork_shape(k.forest, 1, 3)
        assert k.to_json()["label_formula_discrepancy"]


def test_15_idempotence_and_determinism(tmp_path):
    with criterion(15, "closure is idempotent, CLI output byte-identical"):
        for name, make in LIMIT_FAMILIES.items():
            once = normalize_along_t(make())
            twice = normalize_along_t(once)
            assert once.ring.variables == twice.ring.variables, name
            assert ideal_equal(once.ideal, twice.ideal), name
        path = tmp_path / "quintic.txt"
        path.write_text("ring Q[t][x,y];\nideal (y^2 + t*x^2)*(y^3 - t*x^3);\n")
        outputs = set()
        for hashseed in ("0", "17"):
            proc = subprocess.run(
                [sys.executable, "-m", "branchlim", "limit-branch", str(path), "--seed", "5"],
                capture_output=True,
                text=True,
                env={"PYTHONHASHSEED": hashseed, "PATH": ""},
                check=True,
            )
            outputs.add(proc.stdout)
        outputs.add(emit_report(run(Job("limit-branch", seed=5), path.read_text())) + "\n")
        assert len(outputs) == 1


if __name__ == "__main__":
    code = pytest.main([__file__, "-q", "-p", "no:cacheprovider"])
    sys.exit(code)
