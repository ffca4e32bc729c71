import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from evolalg.field import QQ, FieldError, gf
from evolalg.linalg import BudgetExceeded
from evolalg.poly import Ideal, Polynomial, parse_polynomials
from evolalg.variety import SideCondition, occurrence_order, variety_points

VARS = ("x", "y", "z")


def polys(p, max_terms=3, max_exp=2):
    mono = st.tuples(*[st.integers(0, max_exp) for _ in VARS])
    return st.dictionaries(mono, st.integers(1, p - 1), min_size=1, max_size=max_terms).map(
        lambda t: Polynomial(t, VARS, gf(p))
    )


def brute_force(gens, p):
    pts = []
    for vals in itertools.product(range(p), repeat=len(VARS)):
        pt = dict(zip(VARS, vals))
        if all(g.evaluate(pt) % p == 0 for g in gens):
            pts.append(pt)
    return pts


@given(p=st.sampled_from([2, 3, 5]), data=st.data())
def test_variety_matches_brute_force(p, data):
    gens = data.draw(st.lists(polys(p), min_size=1, max_size=3))
    order = data.draw(st.permutations(VARS))
    ideal = Ideal.of(gens, VARS, gf(p))
    assert variety_points(ideal, variable_order=order) == brute_force(gens, p)


@given(p=st.sampled_from([2, 3]), data=st.data())
def test_side_conditions_filter(p, data):
    gens = data.draw(st.lists(polys(p), min_size=1, max_size=2))
    ideal = Ideal.of(gens, VARS, gf(p))
    chk = SideCondition(("x", "z"), lambda v: v[0] != v[1])
    expected = [pt for pt in brute_force(gens, p) if pt["x"] != pt["z"]]
    assert variety_points(ideal, checks=[chk]) == expected


def test_domains_restrict_values():
    ideal = Ideal.of(parse_polynomials("x*y - z", gf(3), VARS), VARS, gf(3))
    pts = variety_points(ideal, domains={"x": [1], "y": [1, 2]})
    assert pts == [{"x": 1, "y": 1, "z": 1}, {"x": 1, "y": 2, "z": 2}]


def test_constant_generator_gives_empty_variety():
    ideal = Ideal.of(parse_polynomials("1, x", gf(5), VARS), VARS, gf(5))
    assert variety_points(ideal) == []


def test_occurrence_order_puts_rare_variables_first():
    ideal = Ideal.of(parse_polynomials("x*y, x*z, x + y", gf(2), VARS), VARS, gf(2))
    assert occurrence_order(ideal) == ("z", "y", "x")


def test_budgets_and_field_errors():
    ideal = Ideal.of(parse_polynomials("x + y + z", gf(7), VARS), VARS, gf(7))
    with pytest.raises(BudgetExceeded):
        variety_points(ideal, max_vars=2)
    with pytest.raises(BudgetExceeded):
        variety_points(ideal, max_nodes=10)
    rational = Ideal.of(parse_polynomials("x", QQ, VARS), VARS, QQ)
    with pytest.raises(FieldError):
        variety_points(rational)
