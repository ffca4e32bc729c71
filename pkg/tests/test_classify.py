import json
import random

import pytest
from oracles import class_counts_by_structure, class_counts_closed_form, structural_class

from evolalg.algebra import EvolutionAlgebra, parse_algebra, representative
from evolalg.classify import (
    CLASS_IDS,
    ClassificationReport,
    classify_all,
    genetic_pattern,
    invariant_signature,
    isotopism_class_of,
    representative_signatures,
    separate_representatives,
)
from evolalg.field import gf
from evolalg.isotopy import BudgetExhausted, SearchBudget, code_to_rows


@pytest.fixture(scope="module")
def f2_report():
    return classify_all(2, keep_assignments=True)


@pytest.mark.parametrize("p", [2, 3])
def test_structural_oracle_agrees_with_closed_forms(p, frozen_counts):
    counts = class_counts_by_structure(p)
    assert counts == class_counts_closed_form(p)
    assert counts == frozen_counts[p]
    assert sum(counts.values()) == p**9


def test_f2_partition(f2_report, frozen_counts):
    r = f2_report
    assert r.ok()
    assert r.counts == frozen_counts[2]
    assert r.nonempty_classes == 8
    assert all(r.separations.values()) and len(r.separations) == 28
    for code, k in enumerate(r.assignments):
        assert k == structural_class(code_to_rows(code, 3, 2), 2)


def test_f2_assignments_carry_verified_witnesses():
    F = gf(2)
    for code in random.Random(1).sample(range(512), 60):
        A = EvolutionAlgebra.from_rows(code_to_rows(code, 3, 2), F)
        a = isotopism_class_of(A)
        assert a.witness.verify(A, representative(a.class_id, F))
        assert invariant_signature(A) == representative_signatures()[a.class_id]


def test_f3_sample_matches_structure():
    F = gf(3)
    for code in random.Random(2).sample(range(3**9), 150):
        rows = code_to_rows(code, 3, 3)
        a = isotopism_class_of(EvolutionAlgebra.from_rows(rows, F))
        assert a.class_id == structural_class(rows, 3)


def test_representative_signatures_and_separation():
    sigs = representative_signatures()
    assert len(set(sigs.values())) == 7
    assert sigs[7] == sigs[8] == (3, 2)
    for p in (3, 5):
        sep = separate_representatives(p)
        assert all(sep.values())
        assert set(sep) == {f"{i}-{j}" for i in CLASS_IDS for j in CLASS_IDS if i < j}


def test_partial_classification_and_workers():
    codes = list(range(0, 3**9, 97))
    one = classify_all(3, codes=codes, keep_assignments=True)
    two = classify_all(3, codes=codes, keep_assignments=True, workers=2)
    assert one.assignments == two.assignments
    assert one.counts == two.counts
    assert one.complete and not one.ok()  # not every tuple was visited
    assert one.total == len(codes)


def test_budget_exhaustion_marks_the_report_incomplete():
    r = classify_all(3, budget=SearchBudget(max_pairs=3), codes=range(3000, 3020))
    assert not r.complete and r.exhausted
    assert not r.ok()
    A = parse_algebra("dim 3 over gf(3); e1*e1 = e1 + e2; e2*e2 = 2 e2; e3*e3 = e1")
    with pytest.raises(BudgetExhausted):
        isotopism_class_of(A, SearchBudget(max_pairs=2))


def test_report_json_round_trip(f2_report):
    d = f2_report.to_dict()
    again = ClassificationReport.from_dict(json.loads(f2_report.to_json()))
    assert again.to_dict() == d
    assert [c["id"] for c in d["classes"]] == list(CLASS_IDS)
    assert d["classes"][6]["representative"] == "(e1,e2,e1+e2)"


def test_classification_rejects_bad_input():
    with pytest.raises(ValueError):
        isotopism_class_of(EvolutionAlgebra.trivial(2, gf(2)))


# --- genetic patterns --------------------------------------------------------------------


def test_genetic_patterns():
    assert genetic_pattern(1).pattern == "(0,0,0)"
    assert genetic_pattern(6).pattern == "(u,v,w)"
    assert genetic_pattern(7, 3).pattern == "(u,v,½u+½v)"
    assert "same probability" in genetic_pattern(7).description
    seven = genetic_pattern(7, 2)
    assert seven.pattern == "(u,v,u+v)" and seven.note
    assert genetic_pattern(8).pattern == "(u,v,u)"
    with pytest.raises(ValueError):
        genetic_pattern(9)
    assert len({genetic_pattern(k).pattern for k in CLASS_IDS}) == 8
