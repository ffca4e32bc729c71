"""``evolalg`` command line.

Exit codes: 0 definitive answer, 1 usage or parse error, 2 budget exhausted or
incomplete run, 3 a verification check failed.  JSON reports are
deterministic apart from the ``timings`` key.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
import time
from fractions import Fraction
from typing import Sequence

from .algebra import AlgebraError, EvolutionAlgebra, format_algebra, parse_algebra, parse_family
from .claims import CLAIMS, select_claims, verify_paper_claims
from .classify import CLASS_IDS, REPRESENTATIVE_LABELS, classify_all, genetic_pattern
from .e32 import RELATION_FAMILIES, NotInE32Error, derive_E32_iso_conditions, isomorphism_canonical_E32
from .field import Field, FieldError, PrimeField, parse_field
from .groebner import DEFAULT_MAX_STEPS, groebner_basis
from .isotopy import (
    DEFAULT_MAX_PAIRS,
    BudgetExhausted,
    SearchBudget,
    build_isomorphism_ideal,
    build_isotopism_ideal,
    find_isomorphism,
    find_isotopism,
    find_strong_isotopism,
    isotopism_via_variety,
    matrix_shape,
    variety_nonsingular_solutions,
)
from .linalg import BudgetExceeded, Matrix
from .poly import MonomialOrder, PolynomialError, parse_polynomials

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INCOMPLETE = 2
EXIT_CHECK_FAILED = 3

# Named algebra pairs: name -> (first, second, ideal kind).  Every entry is valid over every prime field.
BUILTIN_PAIRS: dict[str, tuple[str, str, str]] = {
    "B110-B100": ("B(1,1,0)", "B(1,0,0)", "isotopism"),
    "B1b0-B110": ("B(1,-1,0)", "B(1,1,0)", "isotopism"),
    "B101-B001": ("B(1,0,1)", "B(0,0,1)", "isotopism"),
    "A1b-A11": ("A(1,-1)", "A(1,1)", "isotopism"),
    "rep3-rep4": ("rep3", "rep4", "isotopism"),
    "rep7-rep8": ("rep7", "rep8", "isotopism"),
    "D10-C10": ("D(1,0,1,1,0)", "C(1,0,1,0,1)", "isomorphism"),
    "D11-D10": ("D(1,1,1,1,1)", "D(1,0,1,0,1)", "isomorphism"),
    "C10d1-C10d0": ("C(1,0,1,1,1)", "C(1,0,1,1,0)", "isomorphism"),
    "C01g1-C01g0": ("C(0,1,1,1,1)", "C(0,1,1,1,0)", "isomorphism"),
    "C010d1-C10d01": ("C(0,1,0,1,1)", "C(1,0,1,0,1)", "isomorphism"),
    "C01001-C11111": ("C(0,1,0,0,1)", "C(1,1,1,1,1)", "isomorphism"),
    "C110d1-C110d0": ("C(1,1,0,1,1)", "C(1,1,0,1,0)", "isomorphism"),
}

CLAIM_ALIASES = {"prop3d": "B1b0-matrices"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit with 2, which is reserved for incomplete runs
        raise UsageError(message)


# --- shared helpers ---------------------------------------------------------------------


def _field_name(f: Field) -> str:
    return f"gf({f.p})" if isinstance(f, PrimeField) else "q"


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else x.numerator
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    return x


def _mat(M: Matrix | None):
    return None if M is None else _jsonable(M.tolist())


def _mat_text(M: Matrix) -> str:
    return "[" + "; ".join(" ".join(str(v) for v in r) for r in M.tolist()) + "]"


def _field_arg(text: str) -> Field:
    try:
        return parse_field(text)
    except FieldError as exc:
        raise UsageError(str(exc)) from None


def _prime_field_arg(text: str) -> PrimeField:
    t = text.strip()
    f = _field_arg(t if not t.isdigit() else f"gf({t})")
    if not isinstance(f, PrimeField):
        raise UsageError("this command needs a finite prime field gf(p)")
    return f


def load_algebra(arg: str, field: Field) -> EvolutionAlgebra:
    """An algebra from a DSL file, inline DSL text (``dim ...``) or a family name (``B(1,1,0)``, ``rep7``)."""
    text = arg
    if os.path.isfile(arg):
        with open(arg, encoding="utf-8") as fh:
            text = fh.read()
    if text.lstrip().startswith("dim"):
        return parse_algebra(text)
    return parse_family(text, field)


def _pair(args) -> tuple[EvolutionAlgebra, EvolutionAlgebra]:
    A = load_algebra(args.first, args.field)
    B = load_algebra(args.second, args.field)
    if A.n != B.n:
        raise UsageError(f"dimension mismatch: {A.n} vs {B.n}")
    if A.field != B.field:
        raise UsageError(f"field mismatch: {_field_name(A.field)} vs {_field_name(B.field)}")
    if not isinstance(A.field, PrimeField):
        raise UsageError("deciding isotopy needs a finite prime field gf(p)")
    return A, B


def _budget(args) -> SearchBudget:
    return SearchBudget(max_pairs=args.budget_pairs or DEFAULT_MAX_PAIRS)


def _algebra_dict(A: EvolutionAlgebra) -> dict:
    return {"text": format_algebra(A), "rows": _jsonable([list(r) for r in A.rows])}


# --- commands -------------------------------------------------------------------------


def cmd_parse(args) -> tuple[int, dict, list[str]]:
    A = load_algebra(args.algebra, args.field)
    rep = {
        "command": "parse",
        "field": _field_name(A.field),
        "dimension": A.n,
        "algebra": _algebra_dict(A),
        "derived_dim": A.derived_dim(),
        "annihilator_codim": A.annihilator_codim(),
    }
    lines = [
        format_algebra(A),
        f"rows: {rep['algebra']['rows']}",
        f"derived_dim: {rep['derived_dim']}  annihilator_codim: {rep['annihilator_codim']}",
    ]
    return EXIT_OK, rep, lines


def _decision(args, kind: str) -> tuple[int, dict, list[str]]:
    A, B = _pair(args)
    rep = {"command": kind, "field": _field_name(A.field), "algebras": [_algebra_dict(A), _algebra_dict(B)]}
    positive = {"isotopic": "isotopic", "strong-isotopic": "strongly-isotopic", "isomorphic": "isomorphic"}[kind]
    budget = _budget(args)
    try:
        if kind == "isotopic":
            if args.method == "variety":
                sols = isotopism_via_variety(A, B, budget, limit=1)
                w = sols[0] if sols else None
            else:
                w = find_isotopism(A, B, budget, workers=args.workers)
            witness = None if w is None else {"F": _mat(w.F), "G": _mat(w.G), "H": _mat(w.H)}
        elif kind == "strong-isotopic":
            r = find_strong_isotopism(A, B, budget, workers=args.workers)
            witness = None if r is None else {"F": _mat(r[0]), "H": _mat(r[1])}
        else:
            F = find_isomorphism(A, B, budget, method=args.method)
            witness = None if F is None else {"F": _mat(F)}
    except (BudgetExhausted, BudgetExceeded) as exc:
        rep.update(verdict="budget-exhausted", witness=None, detail=str(exc))
        return EXIT_INCOMPLETE, rep, [f"budget-exhausted: {exc}"]
    rep["verdict"] = positive if witness else f"not-{positive}"
    rep["witness"] = witness
    if kind == "isomorphic" and A.n == 3 and A.annihilator_codim() == 2 == B.annihilator_codim():
        rep["canonical"] = [isomorphism_canonical_E32(X).label for X in (A, B)]
    lines = [rep["verdict"]]
    if witness:
        lines += [f"{k} = {v}" for k, v in witness.items()]
    if "canonical" in rep:
        lines.append(f"canonical forms: {rep['canonical'][0]}, {rep['canonical'][1]}")
    return EXIT_OK, rep, lines


def cmd_canonical(args) -> tuple[int, dict, list[str]]:
    A = load_algebra(args.algebra, args.field)
    try:
        d = isomorphism_canonical_E32(A)
    except NotInE32Error as exc:
        raise UsageError(str(exc)) from None
    rep = {"command": "canonical", **d.to_dict()}
    lines = [f"reduced: {d.reduced.label}", f"canonical: {d.canonical.label}", f"witness: {_mat_text(d.witness)}"]
    lines += [f"  {s.name}: {_mat_text(s.F)}" for s in d.steps]
    return EXIT_OK, rep, lines


def cmd_groebner(args) -> tuple[int, dict, list[str]]:
    order_kind = args.order
    rep: dict = {"command": "groebner", "order": order_kind}
    pair = None
    if args.builtin:
        if args.builtin in BUILTIN_PAIRS:
            a, b, kind = BUILTIN_PAIRS[args.builtin]
        elif ":" in args.builtin:
            a, b = args.builtin.split(":", 1)
            kind = args.ideal
        else:
            raise UsageError(f"unknown builtin pair {args.builtin!r}; known: {', '.join(BUILTIN_PAIRS)}")
        if args.ideal_given:
            kind = args.ideal
        A, B = parse_family(a, args.field), parse_family(b, args.field)
        pair = (A, B, kind)
        ideal = build_isotopism_ideal(A, B) if kind == "isotopism" else build_isomorphism_ideal(A, B)
        gens, variables, field = ideal.nonzero_generators(), ideal.variables, ideal.field
        rep.update(source={"pair": [a, b], "ideal": kind})
    elif args.file:
        with open(args.file, encoding="utf-8") as fh:
            text = fh.read()
        field = args.field
        gens = parse_polynomials(text, field)
        variables = gens[0].variables if gens else ()
        rep.update(source={"file": os.path.basename(args.file)})
    else:
        raise UsageError("groebner needs a generator FILE or --builtin PAIR")
    rep["field"] = _field_name(field)
    t0 = time.perf_counter()
    try:
        G = groebner_basis(gens, MonomialOrder(order_kind, variables) if variables else order_kind, max_steps=args.budget_steps or DEFAULT_MAX_STEPS)
    except BudgetExceeded as exc:
        rep.update(basis=None, detail=str(exc))
        return EXIT_INCOMPLETE, rep, [f"budget-exhausted: {exc}"]
    rep["timings"] = {"groebner_s": time.perf_counter() - t0}
    order = MonomialOrder(order_kind, variables) if variables else None
    basis = [g.to_text(order) for g in G]
    rep["basis"] = basis
    lines = basis if basis else ["0 ideal"]
    if args.variety:
        if pair is None:
            raise UsageError("--variety needs a --builtin pair")
        A, B, kind = pair
        if not isinstance(field, PrimeField):
            raise UsageError("--variety needs a finite prime field")
        shape = {k: matrix_shape(k.lower(), A.n) for k in ("FGH" if kind == "isotopism" else "F")}
        try:
            sols = variety_nonsingular_solutions(ideal, shape, field, limit=args.limit)
        except BudgetExceeded as exc:
            rep.update(variety=None, detail=str(exc))
            return EXIT_INCOMPLETE, rep, lines + [f"variety: budget-exhausted: {exc}"]
        rep["variety"] = {"nonsingular_solutions": len(sols), "limit": args.limit}
        lines.append(f"non-singular solutions: {len(sols)}" + (f" (limit {args.limit})" if args.limit else ""))
    return EXIT_OK, rep, lines


def cmd_classify(args) -> tuple[int, dict, list[str]]:
    f = _prime_field_arg(_field_name(args.field)) if isinstance(args.field, PrimeField) else _prime_field_arg("q")
    if f.p not in (2, 3) and not args.budget_pairs:
        raise UsageError(f"classifying over gf({f.p}) needs an explicit --budget-pairs")
    r = classify_all(f.p, _budget(args), workers=args.workers, keep_assignments=args.keep_assignments, include_patterns=args.patterns)
    rep = {"command": "classify", **r.to_dict()}
    lines = [f"gf({f.p}): {r.total} structure tuples, {r.nonempty_classes} nonempty isotopism classes"]
    for k in CLASS_IDS:
        s = f"  class {k} {REPRESENTATIVE_LABELS[k]:<16} {r.counts.get(k, 0):>8}"
        if args.patterns:
            s += f"   {genetic_pattern(k, f.p)}"
        lines.append(s)
    if not r.complete:
        lines.append(f"incomplete: {len(r.exhausted)} tuples exhausted the budget")
    lines.append("ok" if r.ok() else "NOT ok")
    return (EXIT_OK if r.ok() else EXIT_INCOMPLETE), rep, lines


def cmd_patterns(args) -> tuple[int, dict, list[str]]:
    ch = args.field.p if isinstance(args.field, PrimeField) else 0
    pats = [genetic_pattern(k, ch) for k in CLASS_IDS]
    rep = {
        "command": "patterns",
        "field": _field_name(args.field),
        "patterns": [
            {"id": g.class_id, "representative": REPRESENTATIVE_LABELS[g.class_id], "pattern": g.pattern, "description": g.description, "note": g.note}
            for g in pats
        ],
    }
    lines = [f"{g.class_id} {REPRESENTATIVE_LABELS[g.class_id]:<16} {g}" + (f"  [{g.note}]" if g.note else "") for g in pats]
    return EXIT_OK, rep, lines


def _fields_list(values: Sequence[str] | None) -> tuple[int, ...] | None:
    if not values:
        return None
    out = []
    for v in values:
        for part in v.replace(";", " ").split():
            for t in part.split(",") if "(" not in part else [part]:
                if t:
                    out.append(_prime_field_arg(t).p)
    return tuple(out)


def cmd_verify_paper(args) -> tuple[int, dict, list[str]]:
    patterns = [CLAIM_ALIASES.get(c, c) for c in args.claim] if args.claim else None
    try:
        select_claims(patterns)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from None
    fields = _fields_list(args.fields)
    progress = None
    if args.format == "text" and not args.out:
        progress = lambda r: print(r.line(), flush=True)  # noqa: E731
    t0 = time.perf_counter()
    report = verify_paper_claims(patterns, fields, progress=progress)
    rep = {"command": "verify-paper", **report.to_dict(), "timings": {r.id: round(r.seconds, 3) for r in report.results}}
    rep["timings"]["total"] = round(time.perf_counter() - t0, 3)
    lines = [] if progress else [r.line() for r in report.results]
    c = report.counts()
    lines.append(f"{c['pass']} pass, {c['discrepancy']} discrepancy, {c['fail']} fail")
    failed = not (report.strict_ok if args.strict else report.ok)
    return (EXIT_CHECK_FAILED if failed else EXIT_OK), rep, lines


def cmd_derive_conditions(args) -> tuple[int, dict, list[str]]:
    f = _prime_field_arg(_field_name(args.field))
    fams = tuple(args.family) if args.family else RELATION_FAMILIES
    unknown = [x for x in fams if x not in RELATION_FAMILIES]
    if unknown:
        raise UsageError(f"unknown family {unknown[0]!r}; known: {', '.join(RELATION_FAMILIES)}")
    reps = derive_E32_iso_conditions(f.p, fams)
    rep = {"command": "derive-conditions", "field": f"gf({f.p})", "families": [r.to_dict() for r in reps.values()]}
    lines = []
    for name, r in reps.items():
        ax = r.table.axioms()
        lines.append(
            f"{name}: {len(r.table.members)} members, {len(r.table.classes)} classes "
            f"(predicted {r.predicted_classes}); axioms {'hold' if all(ax.values()) else 'FAIL'}; "
            f"derived condition: {r.corrected}" + ("" if not r.corrected_mismatches else f" ({len(r.corrected_mismatches)} disagreements)")
        )
        if r.printed is not None:
            lines.append(f"    printed condition {r.printed!r}: {len(r.printed_mismatches)} disagreeing pairs")
    ok = all(r.ok for r in reps.values())
    return (EXIT_OK if ok else EXIT_CHECK_FAILED), rep, lines


# --- parser ---------------------------------------------------------------------------


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--field", type=_field_arg, default=None, help="gf(p) or q (default gf(2))")
    common.add_argument("--order", choices=("lex", "degrevlex"), default="degrevlex")
    common.add_argument("--budget-pairs", type=_positive, default=None, help="search budget (partial candidates)")
    common.add_argument("--budget-steps", type=_positive, default=None, help="Gröbner budget (S-pair reductions)")
    common.add_argument("--workers", type=_positive, default=1)
    common.add_argument("--format", choices=("json", "text"), default="text")
    common.add_argument("--out", default=None, help="write the report here instead of stdout")

    p = _Parser(prog="evolalg", description="Isotopisms and isomorphisms of evolution algebras over prime fields.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("parse", parents=[common], help="parse and normalise an algebra")
    s.add_argument("algebra")
    s.set_defaults(run=cmd_parse)

    for name, helptext, methods in (
        ("isotopic", "decide isotopy", ("search", "variety")),
        ("strong-isotopic", "decide strong isotopy", ("search",)),
        ("isomorphic", "decide isomorphism", ("search", "gl", "variety")),
    ):
        s = sub.add_parser(name, parents=[common], help=helptext)
        s.add_argument("first")
        s.add_argument("second")
        s.add_argument("--method", choices=methods, default="search")
        s.set_defaults(run=lambda a, _n=name: _decision(a, _n))

    s = sub.add_parser("canonical", parents=[common], help="isomorphism normal form of an algebra with 2-dim annihilator quotient")
    s.add_argument("algebra")
    s.set_defaults(run=cmd_canonical)

    s = sub.add_parser("groebner", parents=[common], help="reduced Gröbner basis of a generator file or a builtin ideal")
    s.add_argument("file", nargs="?")
    s.add_argument("--builtin", help=f"named pair ({', '.join(BUILTIN_PAIRS)}) or FIRST:SECOND family names")
    s.add_argument("--ideal", choices=("isotopism", "isomorphism"), default=None)
    s.add_argument("--variety", action="store_true", help="also count non-singular zeros (builtin pairs)")
    s.add_argument("--limit", type=_positive, default=None)
    s.set_defaults(run=cmd_groebner)

    s = sub.add_parser("classify", parents=[common], help="isotopism classes of all 3-dim algebras over gf(p)")
    s.add_argument("--patterns", action="store_true", help="attach genetic patterns")
    s.add_argument("--keep-assignments", action="store_true")
    s.set_defaults(run=cmd_classify)

    s = sub.add_parser("patterns", parents=[common], help="genetic pattern of each isotopism class")
    s.set_defaults(run=cmd_patterns)

    s = sub.add_parser("verify-paper", parents=[common], help="run the published-claims checklist")
    s.add_argument("--claim", action="append", help=f"claim id substring (repeatable); ids: {', '.join(c.id for c in CLAIMS)}")
    s.add_argument("--fields", action="append", help="restrict the sweep, e.g. gf(5) or 3,5")
    s.add_argument("--strict", action="store_true", help="also fail on discrepancies")
    s.set_defaults(run=cmd_verify_paper)

    s = sub.add_parser("derive-conditions", parents=[common], help="isomorphism relation tables by GL(3,p) enumeration")
    s.add_argument("--family", action="append", help=f"one of {', '.join(RELATION_FAMILIES)}")
    s.set_defaults(run=cmd_derive_conditions)
    return p


_SCALAR_ARRAY = re.compile(r"\[\s*\n\s*([^\[\]{}]*?)\s*\n\s*\]")


def dumps(rep: dict) -> str:
    """Indented JSON with arrays of scalars kept on one line."""
    text = json.dumps(_jsonable(rep), indent=2, ensure_ascii=False)
    return _SCALAR_ARRAY.sub(lambda m: "[" + ", ".join(re.split(r",\s*\n\s*", m.group(1))) + "]", text)


def _emit(args, rep: dict, lines: list[str]):
    if args.format == "json":
        text = dumps(rep) + "\n"
    else:
        text = "".join(line + "\n" for line in lines)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.field is None:
            args.field = parse_field("gf(3)" if args.command == "derive-conditions" else "gf(2)")
        if args.command == "groebner":
            args.ideal_given = args.ideal is not None
            args.ideal = args.ideal or "isotopism"
        code, rep, lines = args.run(args)
    except UsageError as exc:
        print(f"evolalg: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (AlgebraError, PolynomialError, FieldError) as exc:
        print(f"evolalg: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"evolalg: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _emit(args, rep, lines)
    return code


if __name__ == "__main__":
    sys.exit(main())
