import pytest
import sympy
from hypothesis import given, strategies as st

from branchlim.exact_arith import (
    UniPoly,
    binomial_poly,
    expand_factors,
    factor_rational,
    format_rational,
    gcd,
    is_squarefree,
    mpq,
    squarefree_part,
    to_rational,
)

X = sympy.Symbol("x")


def up(*coeffs):
    return UniPoly(coeffs)


def test_rationals_are_canonical():
    r = to_rational("-6/4")
    assert (r.numerator, r.denominator) == (-3, 2)
    assert format_rational(mpq(0)) == "0"
    assert format_rational(mpq(4, 2)) == "2"
    assert format_rational(mpq(-1, 3)) == "-1/3"


def test_squarefree_examples():
    assert squarefree_part(up(0, 0, 1)) == up(0, 1)
    assert squarefree_part(up(-1, 0, 1)) == up(-1, 0, 1)
    # x^5: gcd with 5x^4 is x^4
    p = up(0, 0, 0, 0, 0, 1)
    assert gcd(p, p.derivative()) == up(0, 0, 0, 0, 1)
    assert squarefree_part(p) == up(0, 1)


def test_squarefree_of_zero_fails():
    with pytest.raises(ValueError, match="zero polynomial"):
        squarefree_part(UniPoly())


def test_factor_examples():
    assert factor_rational(up(-1, 0, 1)) == [(up(-1, 1), 1), (up(1, 1), 1)]
    assert factor_rational(up(1, 0, 1)) == [(up(1, 0, 1), 1)]
    got = factor_rational(up(0, -1, 0, 0, 0, 1))
    expected = sympy.Poly(X**5 - X, X)
    product = sympy.Mul(*[f.to_sympy(X).as_expr() ** m for f, m in got])
    assert sympy.expand(product - expected.as_expr()) == 0
    assert sorted((f.coeffs, m) for f, m in got) == sorted(
        [(up(0, 1).coeffs, 1), (up(-1, 1).coeffs, 1), (up(1, 1).coeffs, 1), (up(1, 0, 1).coeffs, 1)]
    )


def test_factor_of_zero_fails():
    with pytest.raises(ValueError):
        factor_rational(UniPoly())


def test_binomial_poly():
    # C(d+2, 2) = (d^2 + 3d + 2) / 2
    assert binomial_poly(2, 2) == up(1, mpq(3, 2), mpq(1, 2))
    assert binomial_poly(0, 0) == up(1)
    assert binomial_poly(1, 0) == up(0, 1)


coeff = st.integers(-6, 6)
polys = st.lists(coeff, min_size=1, max_size=6).map(UniPoly).filter(lambda p: not p.is_zero())


@given(polys)
def test_squarefree_idempotent(p):
    s = squarefree_part(p)
    assert squarefree_part(s) == s
    assert is_squarefree(s)


@given(polys, polys)
def test_squarefree_of_square(p, q):
    assert squarefree_part(p * p * q) == squarefree_part(p * q)


@given(polys)
def test_factors_reproduce_input(p):
    prod = expand_factors(factor_rational(p))
    assert prod * p.lc() == p * prod.lc()
