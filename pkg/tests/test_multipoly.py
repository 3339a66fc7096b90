import pytest
from hypothesis import given, strategies as st

from branchlim.multipoly import (
    LEX,
    ParseError,
    PolyRing,
    RingMap,
    TermOrder,
    apply_map,
    compare_terms,
    parse_poly,
    poly_ring,
    to_text,
)


def test_grevlex_prefers_higher_power_of_first_variable():
    R = poly_ring("x,y")
    assert compare_terms(R, (2, 0), (1, 1)) == 1


def test_lex_ignores_total_degree():
    R = poly_ring("x,y")
    assert compare_terms(R, (0, 3), (1, 0), LEX) == -1


def test_block_order_compares_parameter_block_first():
    R = poly_ring("t,x", base_parameter="t")
    block = TermOrder.elimination([0])
    assert compare_terms(R, (1, 1), (0, 2), block) == 1


def test_arity_mismatch():
    R = poly_ring("x,y")
    with pytest.raises(ValueError):
        compare_terms(R, (1,), (0, 1))


def test_canonical_text_treats_parameter_as_coefficient():
    R = poly_ring("t,x0,x1,x2", base_parameter="t")
    p = R.parse("- t*x0*x2 + x1^2")
    assert to_text(p) == "x1^2 - t*x0*x2"
    assert R.parse(to_text(p)) == p


def test_base_change_substitution():
    R = poly_ring("t,x0,x1,x2", base_parameter="t")
    S = poly_ring("s,x0,x1,x2", base_parameter="s")
    m = RingMap.from_dict(R, S, {"t": "s^2"})
    assert to_text(apply_map(m, R.parse("x1^2 - t*x0*x2"))) == "x1^2 - s^2*x0*x2"


def test_two_point_cover_substitution():
    R = poly_ring("t,x", base_parameter="t")
    S = poly_ring("u,x", base_parameter="u")
    m = RingMap.from_dict(R, S, {"t": "u^2"})
    assert apply_map(m, R.parse("t - x^2")) == S.parse("u^2 - x^2")


def test_identity_map():
    R = poly_ring("x,y")
    p = R.parse("3*x^2*y - 1/2*y + 7")
    assert apply_map(RingMap.identity(R), p) == p


def test_compose_records_total_ramification():
    R = poly_ring("t,x", base_parameter="t")
    a = RingMap.from_dict(R, R, {"t": "t^2"})
    b = RingMap.from_dict(R, R, {"t": "t^3"})
    assert a.compose(b).images[0] == R.parse("t^6")


def test_parse_errors_are_positioned():
    R = poly_ring("x1,x2")
    with pytest.raises(ParseError) as err:
        parse_poly("x1^2 -", R)
    assert err.value.position == 5
    with pytest.raises(ParseError, match="unknown variable"):
        parse_poly("x1 + q", R)


def test_weights_and_homogeneity():
    R = PolyRing(("x", "y"), (2, 3))
    p = R.parse("y^2 - x^3")
    assert p.is_homogeneous() and p.weighted_degree() == 6


def test_exponent_overflow_fails_loudly():
    R = poly_ring("x")
    with pytest.raises((OverflowError, ParseError)):
        R.parse("x^2147483647") * R.parse("x^2")


R3 = poly_ring("x,y,z")
monomials = st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(0, 3))
small_polys = st.dictionaries(monomials, st.integers(-5, 5).filter(bool), max_size=4).map(
    lambda d: sum((R3.monomial(e) * c for e, c in d.items()), R3.zero())
)
images = st.tuples(small_polys, small_polys, small_polys)


@given(small_polys, small_polys, images)
def test_ring_maps_are_multiplicative(p, q, imgs):
    m = RingMap(R3, R3, imgs)
    assert apply_map(m, p * q) == apply_map(m, p) * apply_map(m, q)
    assert apply_map(m, p + q) == apply_map(m, p) + apply_map(m, q)


@given(monomials, monomials, st.sampled_from([TermOrder.grevlex(), LEX, TermOrder.elimination([1])]))
def test_term_order_is_total(a, b, order):
    c = compare_terms(R3, a, b, order)
    assert c == -compare_terms(R3, b, a, order)
    assert (c == 0) == (a == b)


@given(small_polys)
def test_text_round_trip(p):
    assert R3.parse(to_text(p)) == p
