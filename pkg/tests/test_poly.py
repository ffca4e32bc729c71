from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from evolalg.field import QQ, gf
from evolalg.poly import MonomialOrder, Polynomial, PolynomialError, parse_polynomial, parse_polynomials

VARS = ("x", "y", "z")


def polys(p, variables=VARS, max_terms=5, max_exp=3):
    mono = st.tuples(*[st.integers(0, max_exp) for _ in variables])
    return st.dictionaries(mono, st.integers(1, p - 1), max_size=max_terms).map(
        lambda t: Polynomial(t, variables, gf(p))
    )


@given(p=st.sampled_from([2, 3, 5]), data=st.data())
def test_ring_axioms(p, data):
    a, b, c = (data.draw(polys(p)) for _ in range(3))
    assert a + b == b + a
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == Polynomial.zero(VARS, gf(p))


@given(p=st.sampled_from([2, 3, 5]), data=st.data())
def test_evaluation_is_a_ring_homomorphism(p, data):
    a, b = data.draw(polys(p)), data.draw(polys(p))
    pt = dict(zip(VARS, data.draw(st.tuples(*[st.integers(0, p - 1)] * 3))))
    assert (a * b).evaluate(pt) == a.evaluate(pt) * b.evaluate(pt) % p
    assert (a + b).evaluate(pt) == (a.evaluate(pt) + b.evaluate(pt)) % p


@given(p=st.sampled_from([2, 3, 5, 7]), order=st.sampled_from(["lex", "degrevlex"]), data=st.data())
def test_text_round_trip(p, order, data):
    a = data.draw(polys(p))
    o = MonomialOrder(order, VARS)
    assert parse_polynomial(a.to_text(o), gf(p), VARS) == a


def test_rational_round_trip():
    x = parse_polynomial("1/2*x^2 - 3/4*x*y + 5", QQ, VARS)
    assert x.terms[(2, 0, 0)] == Fraction(1, 2)
    assert parse_polynomial(x.to_text(), QQ, VARS) == x


def test_orders_on_three_variables():
    lex = MonomialOrder("lex", VARS)
    grevlex = MonomialOrder("degrevlex", VARS)
    # x*z^2 vs y^3 : lex prefers x, degrevlex compares the last variable (z^2 loses)
    a, b = (1, 0, 2), (0, 3, 0)
    assert lex.key(a) > lex.key(b)
    assert grevlex.key(a) < grevlex.key(b)
    # degree dominates in degrevlex
    assert grevlex.key((0, 0, 2)) > grevlex.key((1, 0, 0))
    assert lex.key((0, 0, 2)) < lex.key((1, 0, 0))


@given(order=st.sampled_from(["lex", "degrevlex"]), data=st.data())
def test_orders_are_monomial_orders(order, data):
    o = MonomialOrder(order, VARS)
    mono = st.tuples(*[st.integers(0, 4)] * 3)
    a, b, c = data.draw(mono), data.draw(mono), data.draw(mono)
    shift = lambda m: tuple(x + y for x, y in zip(m, c))  # noqa: E731
    if o.key(a) < o.key(b):
        assert o.key(shift(a)) < o.key(shift(b))
    assert o.key(shift(a)) >= o.key(a)


def test_parse_examples():
    F = gf(5)
    p = parse_polynomial("2*f11*g12^2 + 3", F)
    assert p.variables == ("f11", "g12")
    assert p.terms == {(1, 2): 2, (0, 0): 3}
    assert parse_polynomial(" x  *  y+  y ", F) == parse_polynomial("x*y+y", F)
    assert parse_polynomial("x - x", F, ("x",)).is_zero()


@pytest.mark.parametrize("text", ["", "x +", "2**x", "x^", "x y", "1/0"])
def test_parse_errors(text):
    with pytest.raises(PolynomialError):
        parse_polynomial(text, gf(3), ("x", "y"))


def test_parse_unknown_variable():
    with pytest.raises(PolynomialError, match="unknown variable"):
        parse_polynomial("x + w", gf(3), ("x", "y"))


def test_parse_list_with_comments():
    gens = parse_polynomials("x + y, y # second\n# only a comment\nx^2; ", gf(3))
    assert [g.to_text() for g in gens] == ["x + y", "y", "x^2"]


def test_leading_term_and_monic():
    F = gf(7)
    p = parse_polynomial("3*x*y + 2*z^3 + 1", F, VARS)
    o = MonomialOrder("degrevlex", VARS)
    assert p.leading_term(o) == ((0, 0, 3), 2)
    assert p.monic(o).leading_term(o) == ((0, 0, 3), 1)
    lex = MonomialOrder("lex", VARS)
    assert p.leading_monomial(lex) == (1, 1, 0)
