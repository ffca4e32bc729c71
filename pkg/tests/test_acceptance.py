"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines as they
happen; a summary of all criteria is printed at the end of the module either way.
"""

import itertools
import random
import time
from contextlib import contextmanager

import pytest
from oracles import (
    all_structure_matrices,
    definitional_annihilator_codim,
    definitional_derived_dim,
    e3f2_panel,
    in_chunks,
    structural_class,
)

from evolalg.algebra import EvolutionAlgebra, parse_family, representative
from evolalg.claims import CLAIMS, WITNESS_CLAIMS, recording_witnesses, verify_paper_claims
from evolalg.classify import CLASS_IDS, classify_all, invariant_signature
from evolalg.cli import BUILTIN_PAIRS
from evolalg.e32 import derive_E32_iso_conditions, predicted_class_count, predicted_relation, relation_table
from evolalg.field import QQ, gf
from evolalg.groebner import groebner_basis, is_groebner_basis, normal_form
from evolalg.isotopy import (
    brute_force_isotopism_oracle,
    build_isomorphism_ideal,
    build_isotopism_ideal,
    code_to_rows,
    find_isotopism,
    isotopism_via_variety,
    matrix_shape,
    variety_nonsingular_solutions,
)
from evolalg.poly import MonomialOrder, Polynomial, parse_polynomials
from evolalg.variety import iter_variety_points

RESULTS: dict[int, tuple[bool, str, float]] = {}
TITLES = {
    1: "eight classes over F2",
    2: "eight classes over F3",
    3: "B(1,1,0) and B(1,0,0) are not isotopic",
    4: "displayed witness matrices",
    5: "isomorphism iff-conditions",
    6: "derived E(3;2) conditions",
    7: "oracle equivalence",
    8: "Groebner engine properties",
    9: "invariant suite",
}

COROLLARY_TUPLES = {
    1: ((0, 0, 0), (0, 0, 0), (0, 0, 0)),
    2: ((1, 0, 0), (0, 0, 0), (0, 0, 0)),
    3: ((1, 0, 0), (1, 0, 0), (0, 0, 0)),
    4: ((1, 0, 0), (0, 1, 0), (0, 0, 0)),
    5: ((1, 0, 0), (1, 0, 0), (1, 0, 0)),
    6: ((1, 0, 0), (0, 1, 0), (0, 0, 1)),
    7: ((1, 0, 0), (0, 1, 0), (1, 1, 0)),
    8: ((1, 0, 0), (0, 1, 0), (1, 0, 0)),
}


def _line(n: int) -> str:
    ok, detail, secs = RESULTS[n]
    return f"criterion {n} [{TITLES[n]}]: {'PASS' if ok else 'FAIL'} ({secs:.1f}s) {detail}"


@pytest.fixture(scope="module", autouse=True)
def summary(request):
    yield
    tr = request.config.pluginmanager.getplugin("terminalreporter")
    lines = ["", "acceptance summary:"] + [_line(n) for n in sorted(RESULTS)]
    for line in lines:
        if tr is not None:
            tr.write_line(line)
        else:
            print(line)


@contextmanager
def criterion(request, n: int):
    notes: list[str] = []
    t0 = time.perf_counter()
    try:
        yield notes
    except BaseException as exc:
        RESULTS[n] = (False, f"{type(exc).__name__}: {str(exc)[:300]}", time.perf_counter() - t0)
        raise
    else:
        RESULTS[n] = (True, "; ".join(notes), time.perf_counter() - t0)
    finally:
        tr = request.config.pluginmanager.getplugin("terminalreporter")
        if tr is not None:
            tr.write_line("")
            tr.write_line(_line(n))


# --- shared computations --------------------------------------------------------------------


@pytest.fixture(scope="module")
def f2_classification():
    t0 = time.perf_counter()
    r = classify_all(2, keep_assignments=True)
    return r, time.perf_counter() - t0


@pytest.fixture(scope="module")
def f3_classification():
    t0 = time.perf_counter()
    r = classify_all(3, workers=8, keep_assignments=True)
    return r, time.perf_counter() - t0


@pytest.fixture(scope="module")
def witness_run():
    t0 = time.perf_counter()
    with recording_witnesses() as log:
        report = verify_paper_claims(list(WITNESS_CLAIMS), fields=[2, 3, 5])
    return report, list(log), time.perf_counter() - t0


IFF_FAMILIES = ("C(1,0,γ,0,1)", "D(0,1,0,δ,0)", "C(1,1,γ,γ,1)")


@pytest.fixture(scope="module")
def iff_tables():
    return {(name, p): relation_table(name, p) for name in IFF_FAMILIES for p in (3, 5)}


def _classes_of(members, rel) -> int:
    """Number of connected components of ``rel`` on ``members`` (plain union-find)."""
    parent = {m: m for m in members}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for x, y in itertools.product(members, repeat=2):
        if rel(x, y):
            parent[find(x)] = find(y)
    return len({find(m) for m in members})


def _check_classification(r, p, frozen):
    F = gf(p)
    assert r.ok(), "classification report not ok"
    assert r.complete and not r.exhausted
    assert r.total == p**9
    assert r.counts == frozen[p]
    assert r.nonempty_classes == 8
    for k in CLASS_IDS:
        assert tuple(tuple(row) for row in representative(k, F).rows) == COROLLARY_TUPLES[k]
    # every assignment agrees with the structural description of the classes
    for code, k in enumerate(r.assignments):
        assert k == structural_class(code_to_rows(code, 3, p), p), code


# --- criteria -------------------------------------------------------------------------------


def test_criterion_1_eight_classes_f2(request, f2_classification, frozen_counts):
    with criterion(request, 1) as notes:
        r, secs = f2_classification
        _check_classification(r, 2, frozen_counts)
        assert secs < 60
        notes.append(f"512 tuples, counts {dict(r.counts)}, classify {secs:.1f}s")


def test_criterion_2_eight_classes_f3(request, f3_classification, frozen_counts):
    with criterion(request, 2) as notes:
        r, secs = f3_classification
        _check_classification(r, 3, frozen_counts)
        assert secs < 30 * 60
        notes.append(f"19683 tuples, counts {dict(r.counts)}, classify {secs:.1f}s with 8 workers")


H_DEDUCED = ("h12", "h13", "h22", "h23")


def test_criterion_3_non_isotopy_by_exhaustion(request):
    with criterion(request, 3) as notes:
        for p in (2, 3, 5):
            F = gf(p)
            A, B = parse_family("B(1,1,0)", F), parse_family("B(1,0,0)", F)
            assert find_isotopism(A, B) is None  # raises BudgetExhausted if the search is not completed
        notes.append("search: not isotopic over F2, F3, F5")
        for p in (2, 3):
            F = gf(p)
            I = build_isotopism_ideal(parse_family("B(1,1,0)", F), parse_family("B(1,0,0)", F))
            shape = {k: matrix_shape(k.lower(), 3) for k in "FGH"}
            assert variety_nonsingular_solutions(I, shape) == []
            V = I.variables
            field_eqs = ", ".join(f"{v}^{p} - {v}" for v in V)
            for h in H_DEDUCED:
                # no F_p-point of V(I) has h != 0  <=>  I + <x^p - x> + <h^(p-1) - 1> is the unit ideal
                extra = parse_polynomials(f"{field_eqs}, {h}^{p - 1} - 1", F, V)
                G = groebner_basis(list(I.nonzero_generators()) + extra, MonomialOrder("degrevlex", V))
                assert [g.to_text() for g in G] == ["1"], (p, h)
        # over F2 the variety is small enough to enumerate directly as well
        I2 = build_isotopism_ideal(parse_family("B(1,1,0)", gf(2)), parse_family("B(1,0,0)", gf(2)))
        for h in H_DEDUCED:
            assert next(iter_variety_points(I2, domains={h: [1]}), None) is None
        notes.append("variety: no non-singular zeros over F2, F3; h12=h13=h22=h23=0 on every F2/F3 point")


def test_criterion_4_witness_matrices(request, witness_run):
    with criterion(request, 4) as notes:
        report, log, secs = witness_run
        ids = [r.id for r in report.results]
        assert sorted(ids) == sorted(WITNESS_CLAIMS)
        by_id = {c.id: c for c in CLAIMS}
        for r in report.results:
            claim = by_id[r.id]
            assert r.fields == tuple(p for p in claim.fields if p in (2, 3, 5))
            assert r.status == "pass", (r.id, r.counterexample)
            assert all(s == "pass" for s in r.per_field.values())
            assert r.instances > 0
        assert report.strict_ok
        notes.append(f"{len(ids)} claims, {sum(r.instances for r in report.results)} instances, {len(log)} verified maps, {secs:.1f}s")


def test_criterion_5_iff_conditions(request, iff_tables):
    with criterion(request, 5) as notes:
        for (name, p), t in iff_tables.items():
            pred = predicted_relation(name, p)
            assert t.agrees_with(pred) == [], (name, p)
            assert all(t.axioms().values())
            assert len(t.classes) == predicted_class_count(name, p) == _classes_of(t.members, pred)
        split = iff_tables[("C(1,0,γ,0,1)", 5)]
        nonzero = sorted(sorted(m[2] for m in c) for c in split.classes if c[0][2] != 0)
        assert nonzero == [[1, 4], [2, 3]]
        notes.append(
            ", ".join(f"{name}/F{p}: {len(t.classes)} classes" for (name, p), t in iff_tables.items())
        )


def test_criterion_6_derived_conditions(request):
    with criterion(request, 6) as notes:
        counts = {}
        for p in (3, 5):
            reports = derive_E32_iso_conditions(p, ("C(1,0,γ,δ,0)", "C(1,1,γ,δ,0)"))
            for name, r in reports.items():
                assert all(r.table.axioms().values()), (name, p)
                assert r.witnesses_ok and r.ok, (name, p)
                assert r.printed_mismatches, (name, p)  # the printed condition is recorded as wrong
                assert len(r.table.classes) == _classes_of(r.table.members, predicted_relation(name, p))
                counts[(name, p)] = (len(r.table.classes), len(r.printed_mismatches))
        # class counts follow the residue structure at both fields
        for p in (3, 5):
            assert counts[("C(1,0,γ,δ,0)", p)][0] == p
            non_cube_fixed = sum(1 for d in range(1, p) if pow(d, 3, p) != d)
            assert counts[("C(1,1,γ,δ,0)", p)][0] == 2 * (p - 1) + (non_cube_fixed + (p - 1) * (p - 2)) // 2
        notes.append(", ".join(f"{n}/F{p}: {c} classes, {m} printed disagreements" for (n, p), (c, m) in counts.items()))


def test_criterion_7_oracle_equivalence(request):
    with criterion(request, 7) as notes:
        F = gf(2)
        vecs = list(itertools.product(range(2), repeat=2))
        e2 = [EvolutionAlgebra.from_rows(r, F) for r in itertools.product(vecs, repeat=2)]
        pairs = list(itertools.product(e2, repeat=2))
        panel = [(EvolutionAlgebra.from_rows(a, F), EvolutionAlgebra.from_rows(b, F)) for a, b in e3f2_panel()]
        assert len(pairs) == 256 and len(panel) == 40
        positives = 0
        for A, B in pairs + panel:
            truth = brute_force_isotopism_oracle(A, B)
            w = find_isotopism(A, B)
            assert (w is not None) == truth
            assert w is None or w.verify(A, B)
            assert bool(isotopism_via_variety(A, B)) == truth
            positives += truth
        notes.append(f"296 pairs, {positives} isotopic, search = oracle = variety on all")


def _random_polynomial_systems(rng: random.Random, count: int):
    """Small seeded systems in 3–4 variables over assorted fields."""
    out = []
    fields = [gf(2), gf(3), gf(5), gf(7), QQ]
    for k in range(count):
        field = fields[k % len(fields)]
        nv = 3 + k % 2
        names = ("x", "y", "z", "w")[:nv]
        gens = []
        for _ in range(2 + k % 2):
            terms = {}
            for _ in range(rng.randint(2, 4)):
                m = [0] * nv
                for _ in range(rng.randint(1, 2)):
                    m[rng.randrange(nv)] += 1
                c = rng.randint(1, 6)
                terms[tuple(m)] = field.canon(c) if field is QQ else c % field.p or 1
            gens.append(Polynomial(terms, names, field))
        out.append((f"random-{k}", gens, names, "lex" if k % 3 == 0 else "degrevlex"))
    return out


def _random_algebra_ideals(rng: random.Random, count: int):
    out = []
    for k in range(count):
        if k % 2 == 0:
            F, n, build = gf(2 + k % 4 // 2), 2, build_isotopism_ideal
        else:
            F, n, build = gf((3, 5)[k % 4 // 2]), 3, build_isomorphism_ideal
        rows = lambda: [[rng.randrange(F.p) for _ in range(n)] for _ in range(n)]  # noqa: E731
        I = build(EvolutionAlgebra.from_rows(rows(), F), EvolutionAlgebra.from_rows(rows(), F))
        out.append((f"algebra-{k}", list(I.nonzero_generators()), I.variables, "degrevlex"))
    return out


def test_criterion_8_groebner_engine(request):
    with criterion(request, 8) as notes:
        t0 = time.perf_counter()
        corpus = []
        for p in (2, 3):
            F = gf(p)
            for name, (a, b, kind) in BUILTIN_PAIRS.items():
                A, B = parse_family(a, F), parse_family(b, F)
                I = build_isotopism_ideal(A, B) if kind == "isotopism" else build_isomorphism_ideal(A, B)
                corpus.append((f"{name}/F{p}", list(I.nonzero_generators()), I.variables, "degrevlex"))
        rng = random.Random(8)
        corpus += _random_algebra_ideals(rng, 12)
        corpus += _random_polynomial_systems(rng, 16)
        assert len(corpus) >= 50
        sizes = []
        for label, gens, variables, kind in corpus:
            order = MonomialOrder(kind, variables)
            G = groebner_basis(gens, order)
            assert is_groebner_basis(G, order), label  # every S-polynomial reduces to 0
            shuffled = list(gens)
            random.Random(label).shuffle(shuffled)
            assert groebner_basis(shuffled, order) == G, label
            for g in gens:
                assert not normal_form(g, G, order), label
            sizes.append(len(G))
        secs = time.perf_counter() - t0
        assert secs < 300
        notes.append(f"{len(corpus)} ideals ({len(BUILTIN_PAIRS) * 2} builtin), largest basis {max(sizes)}, {secs:.0f}s")


def test_criterion_9_invariants(request, f2_classification, f3_classification, witness_run, iff_tables):
    with criterion(request, 9) as notes:
        for n, p in ((3, 2), (3, 3)):
            Cs = all_structure_matrices(n, p)
            derived = in_chunks(Cs, definitional_derived_dim, p)
            codim = in_chunks(Cs, definitional_annihilator_codim, p)
            F = gf(p)
            for C, d, c in zip(Cs, derived, codim):
                A = EvolutionAlgebra.from_rows(C.tolist(), F)
                assert (A.derived_dim(), A.annihilator_codim()) == (int(d), int(c))
        notes.append("closed forms = definitions on 512 + 19683 algebras")
        checked = 0
        # classification: each algebra has the signature of its class representative
        for (r, _), p in ((f2_classification, 2), (f3_classification, 3)):
            F = gf(p)
            rep_sig = {k: invariant_signature(representative(k, F)) for k in CLASS_IDS}
            for code, k in enumerate(r.assignments):
                A = EvolutionAlgebra.from_rows(code_to_rows(code, 3, p), F)
                assert invariant_signature(A) == rep_sig[k]
                checked += 1
        # displayed maps
        _, log, _ = witness_run
        for A, B, f, g, h in log:
            assert invariant_signature(A) == invariant_signature(B)
            checked += 1
        # relation-table witnesses
        for (name, p), t in iff_tables.items():
            F = gf(p)
            fam = name.split("(")[0]
            for x, y in t.witnesses:
                A = parse_family(f"{fam}({','.join(map(str, x))})", F)
                B = parse_family(f"{fam}({','.join(map(str, y))})", F)
                assert invariant_signature(A) == invariant_signature(B)
                checked += 1
        notes.append(f"signature invariant across {checked} witnessed pairs")
