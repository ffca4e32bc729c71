import itertools
import random

import pytest
from oracles import e3f2_panel

from evolalg.algebra import AlgebraError, EvolutionAlgebra, family, verify_isotopism, verify_strong_isotopism
from evolalg.field import QQ, FieldError, gf
from evolalg.isotopy import (
    BudgetExhausted,
    SearchBudget,
    brute_force_isotopism_oracle,
    build_isomorphism_ideal,
    build_isotopism_ideal,
    find_isomorphism,
    find_isotopism,
    find_strong_isotopism,
    isotopism_via_variety,
    matrix_shape,
    variety_nonsingular_solutions,
)
from evolalg.linalg import BudgetExceeded, enumerate_gl


def all_algebras(n, p):
    F = gf(p)
    vecs = list(itertools.product(range(p), repeat=n))
    return [EvolutionAlgebra.from_rows(r, F) for r in itertools.product(vecs, repeat=n)]


E2F2 = all_algebras(2, 2)
PANEL = [(EvolutionAlgebra.from_rows(a, gf(2)), EvolutionAlgebra.from_rows(b, gf(2))) for a, b in e3f2_panel()]


def point(witness):
    vals = {}
    for name, M in (("f", witness.F), ("g", witness.G), ("h", witness.H)):
        for i, row in enumerate(M.data, start=1):
            for j, x in enumerate(row, start=1):
                vals[f"{name}{i}{j}"] = x
    return vals


# --- ideals ------------------------------------------------------------------------------


@pytest.mark.parametrize("n", [1, 2, 3])
def test_ideal_shapes(n):
    A = EvolutionAlgebra.from_rows([[1] * n] * n, gf(3))
    I = build_isotopism_ideal(A, A)
    assert len(I.generators) == n**3
    assert len(I.variables) == 3 * n * n
    assert I.variables[0] == "f11" and I.variables[-1] == f"h{n}{n}"
    J = build_isomorphism_ideal(A, A)
    assert len(J.generators) == n**3
    assert len(J.variables) == n * n


def test_ideal_vanishes_exactly_on_isotopisms_e2f2():
    """Zeros of I_{A,B} with non-singular F, G, H are exactly the isotopisms (n = 2, p = 2)."""
    F = gf(2)
    gl = list(enumerate_gl(2, F))
    rng = random.Random(5)
    for A, B in rng.sample(list(itertools.product(E2F2, repeat=2)), 24):
        I = build_isotopism_ideal(A, B)
        shape = {k: matrix_shape(k.lower(), 2) for k in "FGH"}
        sols = variety_nonsingular_solutions(I, shape)
        found = {(s["F"], s["G"], s["H"]) for s in sols}
        expected = {(f, g, h) for f in gl for g in gl for h in gl if verify_isotopism(A, B, f, g, h)}
        assert found == expected


def test_isomorphism_ideal_vanishes_exactly_on_isomorphisms():
    F = gf(3)
    gl = list(enumerate_gl(2, F))
    for A, B in random.Random(6).sample(list(itertools.product(all_algebras(2, 3), repeat=2)), 40):
        J = build_isomorphism_ideal(A, B)
        sols = variety_nonsingular_solutions(J, {"F": matrix_shape("f", 2)})
        assert {s["F"] for s in sols} == {M for M in gl if verify_isotopism(A, B, M, M, M)}


def test_witness_is_a_zero_of_the_ideal():
    for A, B in PANEL:
        w = find_isotopism(A, B)
        if w is None:
            continue
        vals = point(w)
        for g in build_isotopism_ideal(A, B).generators:
            assert g.evaluate(vals) % 2 == 0


# --- oracle equivalence ---------------------------------------------------------------------


def test_search_matches_oracle_on_all_e2f2_pairs():
    for A, B in itertools.product(E2F2, repeat=2):
        truth = brute_force_isotopism_oracle(A, B)
        assert (find_isotopism(A, B) is not None) == truth
        assert (find_isotopism(A, B, screen=False) is not None) == truth
        assert bool(isotopism_via_variety(A, B)) == truth


def test_search_matches_oracle_on_e3f2_panel():
    answers = []
    for A, B in PANEL:
        truth = brute_force_isotopism_oracle(A, B)
        answers.append(truth)
        assert (find_isotopism(A, B, screen=False) is not None) == truth
        assert bool(isotopism_via_variety(A, B)) == truth
    assert any(answers) and not all(answers)


def test_witness_inverse_goes_back():
    for A, B in PANEL:
        w = find_isotopism(A, B)
        if w is not None:
            assert w.verify(A, B)
            assert w.inverse().verify(B, A)


def test_workers_do_not_change_the_witness():
    for A, B in PANEL[20:28]:
        one = find_isotopism(A, B, screen=False)
        two = find_isotopism(A, B, screen=False, workers=2)
        assert one == two


# --- isomorphisms and strong isotopisms -----------------------------------------------------


@pytest.mark.parametrize("n,p,count", [(2, 2, None), (2, 3, 150), (3, 2, 120)])
def test_isomorphism_methods_agree(n, p, count):
    alg = all_algebras(n, p)
    pairs = list(itertools.product(alg, repeat=2))
    if count:
        pairs = random.Random(n * p).sample(pairs, count)
    for A, B in pairs:
        verdicts = {m: find_isomorphism(A, B, method=m) is not None for m in ("search", "gl", "variety")}
        assert len(set(verdicts.values())) == 1, (A, B, verdicts)


def test_strong_isotopism_matches_brute_force_e2f2():
    gl = list(enumerate_gl(2, gf(2)))
    for A, B in itertools.product(E2F2, repeat=2):
        found = find_strong_isotopism(A, B)
        truth = any(verify_strong_isotopism(A, B, f, h) for f in gl for h in gl)
        assert (found is not None) == truth
        if found is not None:
            assert verify_strong_isotopism(A, B, *found)


def test_strong_isotopism_matches_brute_force_e2f3_sample():
    F = gf(3)
    gl = list(enumerate_gl(2, F))
    pairs = random.Random(11).sample(list(itertools.product(all_algebras(2, 3), repeat=2)), 30)
    for A, B in pairs:
        truth = any(verify_strong_isotopism(A, B, f, h) for f in gl for h in gl)
        assert (find_strong_isotopism(A, B) is not None) == truth


# --- budgets and errors ----------------------------------------------------------------------


def test_budget_exhaustion_is_reported():
    F = gf(3)
    A, B = family("B", 1, 1, 0, field=F), family("B", 1, 0, 0, field=F)
    with pytest.raises(BudgetExhausted):
        find_isotopism(A, B, budget=SearchBudget(max_pairs=5))
    with pytest.raises(BudgetExceeded):
        find_isomorphism(A, B, budget=SearchBudget(max_pairs=1))
    with pytest.raises(ValueError):
        SearchBudget(max_pairs=0)


def test_oracle_budget_and_fields():
    A = EvolutionAlgebra.trivial(3, gf(5))
    with pytest.raises(BudgetExceeded):
        brute_force_isotopism_oracle(A, A)
    Q = EvolutionAlgebra.trivial(2, QQ)
    with pytest.raises(FieldError):
        find_isotopism(Q, Q)
    with pytest.raises(AlgebraError):
        find_isotopism(EvolutionAlgebra.trivial(2, gf(2)), EvolutionAlgebra.trivial(3, gf(2)))
