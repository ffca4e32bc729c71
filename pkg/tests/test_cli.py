import json
import subprocess
import sys

import pytest

from evolalg.cli import BUILTIN_PAIRS, EXIT_CHECK_FAILED, EXIT_INCOMPLETE, EXIT_OK, EXIT_USAGE, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--format", "json")
    return code, json.loads(out)


def without_timings(d):
    if isinstance(d, dict):
        return {k: without_timings(v) for k, v in d.items() if k != "timings"}
    if isinstance(d, list):
        return [without_timings(v) for v in d]
    return d


# --- decisions ---------------------------------------------------------------------------


def test_not_isotopic_over_f2(capsys):
    code, out, _ = run(capsys, "isotopic", "B(1,1,0)", "B(1,0,0)", "--field", "gf(2)")
    assert code == EXIT_OK
    assert out.splitlines()[0] == "not-isotopic"


def test_algebra_is_isotopic_to_itself_by_the_identity(capsys):
    code, rep = run_json(capsys, "isotopic", "B(1,1,0)", "B(1,1,0)", "--field", "gf(3)")
    assert code == EXIT_OK and rep["verdict"] == "isotopic"
    identity = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    assert rep["witness"] == {"F": identity, "G": identity, "H": identity}


def test_dsl_inputs_and_variety_method(capsys, tmp_path):
    path = tmp_path / "a.evo"
    path.write_text("dim 3 over gf(2);\ne1*e1 = e1 + e2;\ne2*e2 = e3;\n")
    code, rep = run_json(capsys, "isotopic", str(path), "dim 3 over gf(2); e1*e1 = e1; e2*e2 = e2 + e3", "--method", "variety")
    assert code == EXIT_OK and rep["verdict"] == "isotopic"


def test_isomorphic_inverse_pair_over_f5(capsys):
    code, rep = run_json(capsys, "isomorphic", "C(1,1,2,2,1)", "C(1,1,3,3,1)", "--field", "gf(5)")
    assert code == EXIT_OK and rep["verdict"] == "isomorphic"
    assert rep["canonical"][0] == rep["canonical"][1]


def test_not_isomorphic(capsys):
    code, out, _ = run(capsys, "isomorphic", "dim 3 over gf(2); e1*e1 = e1", "dim 3 over gf(2); e1*e1 = e2")
    assert code == EXIT_OK and out.splitlines()[0] == "not-isomorphic"


def test_strong_isotopic(capsys):
    code, rep = run_json(capsys, "strong-isotopic", "A(1,1)", "A(1,2)", "--field", "gf(3)")
    assert code == EXIT_OK and rep["verdict"] == "strongly-isotopic"
    assert set(rep["witness"]) == {"F", "H"}


# --- groebner ----------------------------------------------------------------------------


def test_groebner_from_file_lex(capsys, tmp_path):
    path = tmp_path / "gens.txt"
    path.write_text("x + y, y\n")
    code, out, _ = run(capsys, "groebner", str(path), "--order", "lex")
    assert code == EXIT_OK
    assert out.split() == ["x", "y"]


def test_groebner_empty_file(capsys, tmp_path):
    path = tmp_path / "empty.txt"
    path.write_text("")
    code, out, _ = run(capsys, "groebner", str(path))
    assert code == EXIT_OK and out.strip() == "0 ideal"


def test_groebner_builtin_with_variety(capsys):
    code, out, _ = run(capsys, "groebner", "--builtin", "B110-B100", "--field", "gf(3)", "--variety")
    assert code == EXIT_OK
    assert out.splitlines()[-1] == "non-singular solutions: 0"


def test_groebner_isomorphism_builtin_json(capsys):
    code, rep = run_json(capsys, "groebner", "--builtin", "D10-C10", "--field", "gf(3)")
    assert code == EXIT_OK
    assert rep["source"] == {"pair": list(BUILTIN_PAIRS["D10-C10"][:2]), "ideal": "isomorphism"}
    assert rep["basis"] and "groebner_s" in rep["timings"]


def test_groebner_budget(capsys):
    code, out, _ = run(capsys, "groebner", "--builtin", "B110-B100", "--budget-steps", "2")
    assert code == EXIT_INCOMPLETE and out.startswith("budget-exhausted")


# --- classification and patterns ----------------------------------------------------------


def test_classify_f2(capsys, frozen_counts):
    code, rep = run_json(capsys, "classify", "--field", "gf(2)", "--patterns")
    assert code == EXIT_OK
    assert rep["total"] == 512 and rep["complete"]
    assert sum(1 for c in rep["classes"] if c["count"]) == 8
    assert {c["id"]: c["count"] for c in rep["classes"]} == frozen_counts[2]
    assert all(c["pattern"] for c in rep["classes"])


def test_classify_needs_budget_beyond_f3(capsys):
    code, _, err = run(capsys, "classify", "--field", "gf(5)")
    assert code == EXIT_USAGE and "budget" in err


def test_patterns(capsys):
    code, out, _ = run(capsys, "patterns", "--field", "gf(2)")
    assert code == EXIT_OK
    lines = out.splitlines()
    assert len(lines) == 8 and "(u,v,u+v)" in lines[6]


# --- parse and canonical ------------------------------------------------------------------


def test_parse(capsys):
    code, rep = run_json(capsys, "parse", "B(1,1,0)", "--field", "gf(3)")
    assert code == EXIT_OK
    assert rep["dimension"] == 3
    assert rep["algebra"]["rows"] == [[1, 0, 0], [0, 1, 0], [1, 1, 0]]
    assert rep["derived_dim"] == 2 and rep["annihilator_codim"] == 3


def test_canonical(capsys):
    code, out, _ = run(capsys, "canonical", "C(1,1,2,0,1)", "--field", "gf(5)")
    assert code == EXIT_OK
    assert "reduced: C(0,1,4,2,0)" in out and "canonical: C(0,1,3,3,0)" in out


def test_canonical_rejects_algebras_outside_the_family(capsys):
    code, _, err = run(capsys, "canonical", "B(1,1,0)", "--field", "gf(3)")
    assert code == EXIT_USAGE and err


# --- published claims and derived conditions --------------------------------------------------


def test_verify_paper_alias(capsys):
    code, rep = run_json(capsys, "verify-paper", "--claim", "prop3d")
    assert code == EXIT_OK
    assert [c["id"] for c in rep["claims"]] == ["B1b0-matrices"]


def test_verify_paper_field_restriction(capsys):
    code, rep = run_json(capsys, "verify-paper", "--claim", "D10-switch", "--fields", "gf(5)")
    assert code == EXIT_OK
    assert rep["claims"][0]["fields"] == [5]


def test_verify_paper_strict_fails_on_discrepancies(capsys):
    code, _, _ = run(capsys, "verify-paper", "--claim", "eps1-beta-zero-only", "--strict")
    assert code == EXIT_CHECK_FAILED
    code, _, _ = run(capsys, "verify-paper", "--claim", "eps1-beta-zero-only")
    assert code == EXIT_OK


def test_derive_conditions(capsys):
    code, out, _ = run(capsys, "derive-conditions", "--family", "C(1,0,γ,0,1)")
    assert code == EXIT_OK
    assert "axioms hold" in out


# --- exit codes and output ------------------------------------------------------------------


@pytest.mark.parametrize(
    "argv",
    [
        ["isotopic", "B(1,1,0)", "dim 2 over gf(2); e1*e1 = e1"],
        ["isotopic", "B(1,1,0)", "B(1,0,0)", "--field", "gf(4)"],
        ["isotopic", "B(1,1,0)", "B(1,0,0)", "--field", "q"],
        ["isotopic", "B(1,1,0)"],
        ["groebner", "--builtin", "no-such-pair"],
        ["verify-paper", "--claim", "no-such-claim"],
        ["parse", "dim 2 over gf(2); e3*e3 = e1"],
        ["frobnicate"],
    ],
)
def test_usage_errors_exit_1(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == EXIT_USAGE
    assert err.startswith("evolalg: error:")


def test_search_budget_exits_2(capsys):
    code, rep = run_json(capsys, "isotopic", "B(1,1,0)", "B(1,0,0)", "--field", "gf(3)", "--budget-pairs", "3")
    assert code == EXIT_INCOMPLETE and rep["verdict"] == "budget-exhausted"


def test_json_is_deterministic_apart_from_timings(capsys, tmp_path):
    argv = ["groebner", "--builtin", "C10d1-C10d0", "--field", "gf(3)", "--format", "json"]
    outs = []
    for k in range(2):
        path = tmp_path / f"out{k}.json"
        assert main(argv + ["--out", str(path)]) == EXIT_OK
        outs.append(json.loads(path.read_text()))
    assert capsys.readouterr().out == ""
    assert without_timings(outs[0]) == without_timings(outs[1])
    texts = []
    for _ in range(2):
        assert main(["isotopic", "rep7", "rep8", "--field", "gf(3)", "--format", "json"]) == EXIT_OK
        texts.append(capsys.readouterr().out)
    assert texts[0] == texts[1]


def test_console_script_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "evolalg.cli", "isotopic", "B(1,1,0)", "B(1,0,0)"], capture_output=True, text=True, check=False
    )
    assert proc.returncode == 0 and proc.stdout.splitlines()[0] == "not-isotopic"
