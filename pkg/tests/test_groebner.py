import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from evolalg.field import QQ, gf
from evolalg.groebner import (
    _Codec,
    buchberger,
    groebner_basis,
    is_groebner_basis,
    normal_form,
    reduce_basis,
    s_polynomial,
)
from evolalg.linalg import BudgetExceeded
from evolalg.poly import Ideal, MonomialOrder, Polynomial, PolynomialError, mono_mul, parse_polynomial, parse_polynomials

VARS = ("x", "y", "z")
SYMS = sympy.symbols(VARS)
SYMPY_ORDER = {"lex": "lex", "degrevlex": "grevlex"}


def polys(p, variables=VARS, max_terms=4, max_exp=2):
    mono = st.tuples(*[st.integers(0, max_exp) for _ in variables])
    return st.dictionaries(mono, st.integers(1, p - 1), min_size=1, max_size=max_terms).map(
        lambda t: Polynomial(t, variables, gf(p))
    )


def ideals(p, min_size=1, max_size=3):
    return st.lists(polys(p), min_size=min_size, max_size=max_size)


def to_sympy(f: Polynomial):
    return sum(
        (sympy.Rational(c.numerator, c.denominator) if isinstance(c, Fraction) else sympy.Integer(c))
        * sympy.Mul(*[s**e for s, e in zip(SYMS, m)])
        for m, c in f.terms.items()
    )


def sympy_reduced_basis(gens, order, p=None):
    """Reduced basis from sympy, as a set of frozen term dicts (monic, canonical coefficients)."""
    kwargs = {"modulus": p} if p else {"domain": "QQ"}
    G = sympy.groebner([to_sympy(g) for g in gens], *SYMS, order=SYMPY_ORDER[order], **kwargs)
    out = set()
    for g in G.exprs:
        P = sympy.Poly(g, *SYMS, **kwargs)
        terms = {}
        for m, c in P.terms():
            if p:
                terms[m] = int(c) % p
            else:
                c = sympy.Rational(c)
                terms[m] = Fraction(int(c.p), int(c.q))
        lc = terms[max(terms, key=MonomialOrder(order, VARS).key)]
        if p:
            inv = pow(lc, -1, p)
            terms = {m: c * inv % p for m, c in terms.items()}
        else:
            terms = {m: c / lc for m, c in terms.items()}
        out.add(frozenset(terms.items()))
    return out


def as_set(G):
    return {frozenset(g.terms.items()) for g in G}


# --- oracle comparison -------------------------------------------------------


@settings(max_examples=80)
@given(p=st.sampled_from([2, 3, 5, 7]), order=st.sampled_from(["lex", "degrevlex"]), data=st.data())
def test_reduced_basis_matches_sympy(p, order, data):
    gens = data.draw(ideals(p))
    ours = groebner_basis(gens, order)
    assert as_set(ours) == sympy_reduced_basis(gens, order, p)


def test_reduced_basis_matches_sympy_over_rationals():
    rng = random.Random(7)
    for _ in range(15):
        gens = []
        for _ in range(rng.randint(1, 3)):
            terms = {}
            for _ in range(rng.randint(1, 3)):
                m = tuple(rng.randint(0, 2) for _ in VARS)
                terms[m] = Fraction(rng.randint(-5, 5) or 1, rng.randint(1, 4))
            gens.append(Polynomial(terms, VARS, QQ))
        for order in ("lex", "degrevlex"):
            assert as_set(groebner_basis(gens, order)) == sympy_reduced_basis(gens, order)


# --- properties ----------------------------------------------------------------


@given(p=st.sampled_from([2, 3, 5]), order=st.sampled_from(["lex", "degrevlex"]), data=st.data())
def test_output_satisfies_buchberger_criterion(p, order, data):
    gens = data.draw(ideals(p))
    G = groebner_basis(gens, order)
    assert is_groebner_basis(G, order)
    # every S-polynomial reduces to zero, checked pair by pair
    for i in range(len(G)):
        for j in range(i + 1, len(G)):
            assert not normal_form(s_polynomial(G[i], G[j], order), G, order)


@given(p=st.sampled_from([2, 3, 5]), order=st.sampled_from(["lex", "degrevlex"]), data=st.data())
def test_generators_reduce_to_zero(p, order, data):
    gens = data.draw(ideals(p))
    G = groebner_basis(gens, order)
    for g in gens:
        assert not normal_form(g, G, order)


@given(p=st.sampled_from([2, 3, 5]), order=st.sampled_from(["lex", "degrevlex"]), data=st.data())
def test_reduced_basis_is_permutation_invariant(p, order, data):
    gens = data.draw(ideals(p, min_size=2))
    perm = data.draw(st.permutations(gens))
    assert groebner_basis(gens, order) == groebner_basis(perm, order)


@given(p=st.sampled_from([2, 3, 5]), order=st.sampled_from(["lex", "degrevlex"]), data=st.data())
def test_reduced_basis_shape(p, order, data):
    o = MonomialOrder(order, VARS)
    G = groebner_basis(data.draw(ideals(p)), order)
    lms = [g.leading_monomial(o) for g in G]
    for g, lm in zip(G, lms):
        assert g.leading_term(o)[1] == 1
        for h, lh in zip(G, lms):
            if h is not g:
                # no term of g is divisible by another leading monomial
                assert not any(all(a <= b for a, b in zip(lh, m)) for m in g.terms)
    assert [o.key(m) for m in lms] == sorted((o.key(m) for m in lms), reverse=True)


@given(p=st.sampled_from([2, 3, 5]), data=st.data())
def test_adding_ideal_members_does_not_change_the_basis(p, data):
    gens = data.draw(ideals(p, min_size=2))
    k = data.draw(polys(p))
    G = groebner_basis(gens)
    assert groebner_basis([*gens, k * gens[0] + gens[1]]) == G


@given(p=st.sampled_from([2, 3, 5]), data=st.data())
def test_normal_form_is_a_remainder(p, data):
    """f - NF(f) lies in the ideal, so its normal form w.r.t. a Gröbner basis is zero."""
    gens = data.draw(ideals(p))
    f = data.draw(polys(p))
    G = groebner_basis(gens)
    r = normal_form(f, G)
    assert not normal_form(f - r, G)
    assert normal_form(r, G) == r


def test_buchberger_output_is_a_basis_before_reduction():
    gens = parse_polynomials("x^2 - y; x*y - z; y^2 - x*z", gf(5))
    G = buchberger(gens)
    assert is_groebner_basis(G)
    assert reduce_basis(G) == groebner_basis(gens)


# --- hand-worked examples ----------------------------------------------------------


def test_textbook_division_example():
    """x²y + xy² + y² divided by (xy - 1, y² - 1) in lex leaves x + y + 1."""
    f, g1, g2 = (parse_polynomial(s, QQ, ("x", "y")) for s in ("x^2*y + x*y^2 + y^2", "x*y - 1", "y^2 - 1"))
    assert normal_form(f, [g1, g2], "lex") == parse_polynomial("x + y + 1", QQ, ("x", "y"))
    # first divisor wins: the other order gives a different remainder
    assert normal_form(f, [g2, g1], "lex") == parse_polynomial("2*x + 1", QQ, ("x", "y"))


def test_linear_ideal_under_lex():
    G = groebner_basis(parse_polynomials("x + y, y", gf(2)), "lex")
    assert [g.to_text() for g in G] == ["x", "y"]


def test_s_polynomial_example():
    v = ("x", "y")
    f = parse_polynomial("x^3*y^2 - x^2*y^3 + x", QQ, v)
    g = parse_polynomial("3*x^4*y + y^2", QQ, v)
    s = s_polynomial(f, g, "degrevlex")
    assert s == parse_polynomial("-x^3*y^3 + x^2 - 1/3*y^3", QQ, v)


def test_unit_ideal_and_zero_ideal():
    F = gf(3)
    assert [g.to_text() for g in groebner_basis(parse_polynomials("x*y - 1, x", F))] == ["1"]
    assert groebner_basis([Polynomial.zero(VARS, F)]) == []
    assert groebner_basis(Ideal.of([], VARS, F)) == []


def test_budget_is_enforced():
    gens = parse_polynomials("x^3 - y*z, y^3 - x*z, z^3 - x*y, x*y*z - 1", gf(7))
    with pytest.raises(BudgetExceeded):
        groebner_basis(gens, max_steps=2)
    stats = {}
    groebner_basis(gens, stats=stats)
    assert stats["pair_reductions"] > 2


def test_ring_mismatch_and_zero_divisor():
    a = parse_polynomial("x", gf(2), ("x",))
    b = parse_polynomial("x", gf(3), ("x",))
    with pytest.raises(PolynomialError):
        groebner_basis([a, b])
    with pytest.raises(PolynomialError):
        normal_form(a, [Polynomial.zero(("x",), gf(2))])


# --- monomial coding ---------------------------------------------------------------------


monomials = st.tuples(*[st.integers(0, 40) for _ in range(4)])


@pytest.mark.parametrize("kind", ["lex", "degrevlex"])
@given(a=monomials, b=monomials)
def test_monomial_codes_follow_the_order_and_multiply_by_adding(kind, a, b):
    order = MonomialOrder(kind, ("w", "x", "y", "z"))
    codec = _Codec(kind, 4)
    ka, kb = codec.encode(a), codec.encode(b)
    assert (ka < kb) == (order.key(a) < order.key(b))
    assert codec.decode(ka) == a
    assert ka + kb == codec.encode(mono_mul(a, b))


def test_lex_reduction_reports_exponent_overflow():
    g, x2, x = parse_polynomials("x - y^20000, x^2, x", gf(2), ("x", "y"))
    assert normal_form(x, [g], "lex") == parse_polynomial("y^20000", gf(2), ("x", "y"))
    with pytest.raises(PolynomialError):
        normal_form(x2, [g], "lex")  # would need y^40000
