import pytest
from hypothesis import given, strategies as st

from branchlim.exact_arith import binomial_poly, mpq
from branchlim.fixtures import conic_family, constant_family, skew_lines_family
from branchlim.groebner import Ideal
from branchlim.hilbert import (
    HilbertError,
    hilbert_polynomial_of_fiber,
    hilbert_series,
    projective_space,
    standard_monomial_counts,
)
from branchlim.multipoly import PolyRing, poly_ring


def test_conic():
    R = poly_ring("x0,x1,x2")
    h = hilbert_series(Ideal(R, ["x1^2 - x0*x2"]))
    assert h.polynomial == [1, 2]
    assert (h.dimension, h.degree, h.euler_char) == (1, 2, 1)
    assert h.to_json() == {"polynomial": [1, 2], "dimension": 1, "degree": 2, "euler_char": 1}


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_projective_space(n):
    _, I = projective_space(n)
    h = hilbert_series(I)
    assert h.polynomial == list(binomial_poly(n, n).coeffs)
    assert h.degree == 1 and h.dimension == n


def test_plane_cubic():
    R = poly_ring("x0,x1,x2")
    h = hilbert_series(Ideal(R, ["x0^3 + x1^3 + x2^3 - x0*x1*x2"]))
    assert h.polynomial == [0, 3] and h.euler_char == 0


def test_non_homogeneous_generator_is_named():
    R = poly_ring("x,y")
    with pytest.raises(HilbertError, match="non-homogeneous generator: x\\^2 - y"):
        hilbert_series(Ideal(R, ["x^2 - y"]))


def test_parameter_needs_fiberwise_flag():
    F = conic_family()
    with pytest.raises(HilbertError):
        hilbert_series(F.ideal)
    assert hilbert_series(F.ideal, fiberwise=True).polynomial == [1, 2]


def test_conic_family_fibers():
    F = conic_family()
    assert hilbert_polynomial_of_fiber(F, "generic").polynomial == [1, 2]
    assert hilbert_polynomial_of_fiber(F, "special").polynomial == [1, 2]


def test_skew_lines_fibers():
    # two disjoint lines: h(d) = 2(d + 1); the series starts 1, 4, 6, 8
    F = skew_lines_family()
    gen = hilbert_polynomial_of_fiber(F, "generic")
    spe = hilbert_polynomial_of_fiber(F, "special")
    assert gen.polynomial == spe.polynomial == [2, 2]
    assert spe.series_coefficients(5) == [1, 4, 6, 8, 10]
    assert gen.same_series(spe)


def test_constant_family():
    F = constant_family()
    assert hilbert_polynomial_of_fiber(F, "generic").same_series(hilbert_polynomial_of_fiber(F, "special"))


def test_weighted_grading():
    R = PolyRing(("x", "y"), (2, 3))
    h = hilbert_series(Ideal(R, ["y^2 - x^3"]))
    # a single point in weighted P(2,3): the Hilbert function is 1 in every degree >= 2
    assert h.series_coefficients(8) == [1, 0, 1, 1, 1, 1, 1, 1]
    assert h.polynomial == [1]


def test_quasi_polynomial_is_reported():
    R = PolyRing(("U", "V"), (2, 3))
    h = hilbert_series(Ideal(R, ["V"]))
    assert not h.is_polynomial and h.degree == mpq(1, 2)


def test_invalid_fiber_name():
    with pytest.raises(ValueError):
        hilbert_polynomial_of_fiber(conic_family(), "middle")


R = poly_ring("x,y,z")
mono = st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(0, 3)).filter(any)


@given(st.lists(mono, min_size=0, max_size=5))
def test_series_matches_standard_monomials_monomial(gens):
    I = Ideal(R, [R.monomial(e) for e in gens])
    assert hilbert_series(I).series_coefficients(7) == standard_monomial_counts(I, 6)


@given(st.lists(st.tuples(mono, st.integers(-3, 3)), min_size=1, max_size=3))
def test_series_matches_standard_monomials_binomial(data):
    gens = []
    for e, c in data:
        d = sum(e)
        gens.append(R.monomial(e) + R.monomial((d, 0, 0)) * c if e != (d, 0, 0) else R.monomial(e))
    I = Ideal(R, gens)
    h = hilbert_series(I)
    assert h.series_coefficients(7) == standard_monomial_counts(I, 6)
    if h.is_polynomial and h.polynomial:
        d = h.regularity_witness + 2
        assert h.value(d) == h.hilbert_function(d)
