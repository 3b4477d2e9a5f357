"""Sparse multivariate polynomial arithmetic."""

from fractions import Fraction

from hypothesis import given, strategies as st

from cycleforge.poly import MultiPoly, PolyParseError, format_poly, parse_poly

import pytest

VARS = ("x", "y")

coeffs = st.fractions(
    min_value=-10, max_value=10, max_denominator=8
).filter(lambda c: c != 0)

exponents = st.tuples(st.integers(0, 4), st.integers(0, 4))


@st.composite
def polys(draw):
    terms = draw(st.dictionaries(exponents, coeffs, max_size=5))
    return MultiPoly(VARS, {e: c for e, c in terms.items()})


@given(polys(), polys())
def test_addition_commutes(p, q):
    assert p + q == q + p


@given(polys(), polys())
def test_multiplication_commutes(p, q):
    assert p * q == q * p


@given(polys(), polys(), polys())
def test_associativity_and_distributivity(p, q, r):
    assert (p + q) + r == p + (q + r)
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r


@given(polys())
def test_additive_inverse_and_units(p):
    zero = MultiPoly.zero(VARS)
    one = MultiPoly.const(Fraction(1), VARS)
    assert p + (-p) == zero
    assert p * one == p
    assert p * zero == zero


@given(polys())
def test_format_parse_round_trip(p):
    assert parse_poly(format_poly(p), VARS) == p


@given(polys(), polys())
def test_exact_division_round_trip(p, q):
    prod = p * q
    if q.is_zero():
        return
    quotient = prod.exact_div(q)
    assert quotient is not None and quotient == p


@given(polys(), polys())
def test_derivative_product_rule(p, q):
    lhs = (p * q).diff("x")
    rhs = p.diff("x") * q + p * q.diff("x")
    assert lhs == rhs


@given(polys())
def test_coeffs_in_reassemble(p):
    xv = MultiPoly.var("x", VARS)
    total = MultiPoly.zero(VARS)
    for k, c in enumerate(p.coeffs_in("x")):
        total = total + c * xv**k
    assert total == p


def test_parser_rejects_garbage():
    for bad in ("x +", "2 **", "(x", "x^-1", ""):
        with pytest.raises(PolyParseError):
            parse_poly(bad)


def test_parser_precedence_and_fractions():
    p = parse_poly("1/2*x^2 - (x - y)*(x + y)/2")
    q = parse_poly("1/2*y^2")
    assert p.with_variables(q.variables) == q


def test_substitute_composition():
    p = parse_poly("x^2 + y")
    sub = {"x": parse_poly("x + 1", ("x", "y")), "y": parse_poly("2*y", ("x", "y"))}
    q = p.substitute(sub)
    assert q == parse_poly("x^2 + 2*x + 1 + 2*y", ("x", "y"))


def test_eval_scalar_matches_substitution():
    p = parse_poly("3*x^2*y - y + 7")
    v = p.eval_scalar({"x": Fraction(2, 3), "y": Fraction(-1, 2)})
    assert v == Fraction(3 * 4, 9) * Fraction(-1, 2) + Fraction(1, 2) + 7
