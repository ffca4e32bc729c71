"""Checklist of the published statements about three-dimensional evolution algebras.

Each claim is run over every admissible parameter instantiation in the
requested prime fields:

* displayed maps are checked with :func:`verify_isotopism` /
  :func:`verify_isomorphism`;
* isomorphism (non-)existence among algebras with a two-dimensional annihilator
  quotient is read off the GL(3,p) orbit partition (:func:`e32_partition`);
* isotopism existence and non-existence use the exhaustive search.

A claim ends as ``pass``, ``fail``, or ``discrepancy``.  ``discrepancy`` means
the statement fails as printed, a counterexample is attached, and the
corrected statement recorded with the claim passes.
"""

from __future__ import annotations

import time
from contextlib import contextmanager
from dataclasses import dataclass, field as dc_field
from typing import Callable, Iterable, Sequence

from .algebra import EvolutionAlgebra, family, representative
from .algebra import verify_isomorphism as _verify_isomorphism
from .algebra import verify_isotopism as _verify_isotopism
from .classify import classify_all, isotopism_class_of
from .e32 import (
    PRINTED_CONDITIONS,
    _sigma,
    canonical_representatives,
    derive_E32_iso_conditions,
    e32_partition,
    isomorphism_canonical_E32,
    kind_of,
)
from .field import gf
from .isotopy import (
    algebra_code,
    code_to_rows,
    find_isotopism,
    gl_matrix,
    isomorphism_images,
    isomorphism_orbit,
)
from .linalg import Matrix

STATUSES = ("pass", "discrepancy", "fail")
DEFAULT_FIELDS = (2, 3, 5)


@dataclass
class Outcome:
    """Result of one claim over one field."""

    instances: int
    counterexample: dict | None = None
    corrected: bool | None = None

    @property
    def status(self) -> str:
        if self.counterexample is None:
            return "pass"
        return "discrepancy" if self.corrected else "fail"


@dataclass(frozen=True)
class Claim:
    id: str
    statement: str
    kind: str
    run: Callable[[int], Outcome]
    fields: tuple[int, ...] = DEFAULT_FIELDS
    corrected: str | None = None


@dataclass
class ClaimResult:
    id: str
    statement: str
    kind: str
    fields: tuple[int, ...]
    status: str
    instances: int
    per_field: dict[int, str]
    counterexample: dict | None = None
    corrected: str | None = None
    seconds: float = 0.0

    def line(self) -> str:
        f = ",".join(f"gf({p})" for p in self.fields)
        s = f"{self.id:<28} {f:<20} {self.status:<12} ({self.instances} instances)"
        if self.counterexample:
            s += f"  counterexample: {self.counterexample}"
        return s

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "statement": self.statement,
            "kind": self.kind,
            "fields": list(self.fields),
            "status": self.status,
            "instances": self.instances,
            "per_field": {str(k): v for k, v in self.per_field.items()},
            "counterexample": self.counterexample,
            "corrected": self.corrected,
        }


@dataclass
class ClaimReport:
    results: list[ClaimResult] = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.status != "fail" for r in self.results)

    @property
    def strict_ok(self) -> bool:
        return all(r.status == "pass" for r in self.results)

    def counts(self) -> dict[str, int]:
        return {s: sum(1 for r in self.results if r.status == s) for s in STATUSES}

    def to_dict(self) -> dict:
        return {"claims": [r.to_dict() for r in self.results], "summary": self.counts(), "ok": self.ok}


# --- helpers -------------------------------------------------------------------------------

_witness_log: list | None = None


@contextmanager
def recording_witnesses():
    """Collect ``(A, B, f, g, h)`` for every map a claim check verifies while the block runs."""
    global _witness_log
    previous, _witness_log = _witness_log, []
    try:
        yield _witness_log
    finally:
        _witness_log = previous


def verify_isotopism(A, B, f, g, h) -> bool:
    ok = _verify_isotopism(A, B, f, g, h)
    if ok and _witness_log is not None:
        _witness_log.append((A, B, f, g, h))
    return ok


def verify_isomorphism(A, B, f) -> bool:
    ok = _verify_isomorphism(A, B, f)
    if ok and _witness_log is not None:
        _witness_log.append((A, B, f, f, f))
    return ok



def _alg(rows, p: int) -> EvolutionAlgebra:
    return EvolutionAlgebra.from_rows(rows, gf(p))


def C(p: int, *params) -> EvolutionAlgebra:
    return family("C", *params, field=gf(p))


def D(p: int, *params) -> EvolutionAlgebra:
    return family("D", *params, field=gf(p))


def _M(rows, p: int) -> Matrix:
    return Matrix(rows, gf(p))


def _inv(x: int, p: int) -> int:
    return pow(x % p, -1, p)


def _members(fam: str, p: int, ab: Iterable[tuple[int, int]] = ((1, 0), (0, 1), (1, 1)), eps=None):
    """All (params) of C/D family members with (α,β) in ``ab`` and ε restricted to ``eps``."""
    for a, b in ab:
        for g in range(p):
            for d in range(p):
                for e in range(p) if eps is None else eps:
                    if g or d or e:
                        yield (a, b, g, d, e)


def _cls(A: EvolutionAlgebra) -> int:
    p = A.field.p
    return e32_partition(p)[algebra_code(A.rows, p)][0]


def _iso(A: EvolutionAlgebra, B: EvolutionAlgebra) -> bool:
    return _cls(A) == _cls(B)


def _check_maps(items: Iterable[tuple[str, EvolutionAlgebra, EvolutionAlgebra, Matrix]], p: int) -> Outcome:
    n = 0
    for desc, A, B, F in items:
        n += 1
        if not verify_isomorphism(A, B, F):
            return Outcome(n, {"field": p, "instance": desc, "matrix": F.tolist()})
    return Outcome(n)


def _check_iff(items: Iterable[tuple[str, EvolutionAlgebra, EvolutionAlgebra, bool]], p: int) -> Outcome:
    """``items``: (description, A, B, predicted) -- predicted must equal 'A ≅ B'."""
    n = 0
    for desc, A, B, predicted in items:
        n += 1
        actual = _iso(A, B)
        if actual != predicted:
            return Outcome(n, {"field": p, "instance": desc, "predicted": predicted, "isomorphic": actual})
    return Outcome(n)


def _check_never(items: Iterable[tuple[str, EvolutionAlgebra, EvolutionAlgebra]], p: int) -> Outcome:
    return _check_iff(((d, A, B, False) for d, A, B in items), p)


def _sq(x: int, y: int, p: int) -> bool:
    """∃ m ≠ 0 with x = m² y."""
    return any(x % p == m * m * y % p for m in range(1, p))


# --- isotopism statements -----------------------------------------------------------------------


def _A_family(p):
    F = gf(p)
    I = Matrix.identity(3, F)
    n = 0
    for a in range(1, p):
        for b in range(1, p):
            n += 1
            f = Matrix.diag([1, a, b], F)
            if not verify_isotopism(family("A", a, b, field=F), family("A", 1, 1, field=F), f, I, I):
                return Outcome(n, {"field": p, "instance": f"A({a},{b})"})
    return Outcome(n)


def _B_gamma_nonzero(p):
    F = gf(p)
    target = family("B", 0, 0, 1, field=F)
    n = 0
    for a in range(p):
        for b in range(p):
            for c in range(1, p):
                n += 1
                A = family("B", a, b, c, field=F)
                w = find_isotopism(A, target)
                if w is None or not verify_isotopism(A, target, w.F, w.G, w.H):
                    return Outcome(n, {"field": p, "instance": f"B({a},{b},{c})"})
    return Outcome(n)


def _B_alpha_scaling(p):
    F = gf(p)
    I = Matrix.identity(3, F)
    n = 0
    for a in range(p):
        for b in range(p):
            if not (a or b):
                continue
            n += 1
            A = family("B", a, b, 0, field=F)
            if a:
                B = family("B", 1, b * _inv(a, p) % p, 0, field=F)
                f = Matrix.diag([1, 1, a], F)
                ok = verify_isotopism(A, B, f, I, I)
            else:
                # switch e1 and e2 (an isomorphism onto B(β,0,0)), then scale e3 by β
                S = Matrix([[0, 1, 0], [1, 0, 0], [0, 0, 1]], F)
                B = family("B", 1, 0, 0, field=F)
                ok = verify_isotopism(A, B, S @ Matrix.diag([1, 1, b], F), S, S)
            if not ok:
                return Outcome(n, {"field": p, "instance": f"B({a},{b},0)"})
    return Outcome(n)


def _B1b0_matrices(p):
    F = gf(p)
    n = 0
    for b in range(1, p):
        n += 1
        Fm = Matrix([[0, b, 0], [1, 0, 0], [0, 0, b]], F)
        G = Matrix([[0, 1, 0], [1, 0, 0], [0, 0, 1]], F)
        H = Matrix([[0, b, 0], [1, 0, 0], [0, 0, 1]], F)
        if not verify_isotopism(family("B", 1, b, 0, field=F), family("B", 1, 1, 0, field=F), Fm, G, H):
            return Outcome(n, {"field": p, "instance": f"β={b}"})
    return Outcome(n)


def _B110_B100(p):
    F = gf(p)
    w = find_isotopism(family("B", 1, 1, 0, field=F), family("B", 1, 0, 0, field=F))
    if w is not None:
        return Outcome(1, {"field": p, "instance": "B(1,1,0) vs B(1,0,0)", "witness": w.as_lists()})
    return Outcome(1)


def _four_classes(p):
    F = gf(p)
    reps = {5: family("A", 1, 1, field=F), 6: family("B", 0, 0, 1, field=F),
            7: family("B", 1, 1, 0, field=F), 8: family("B", 1, 0, 0, field=F)}
    n = 0
    for i in reps:
        for j in reps:
            if i < j:
                n += 1
                if find_isotopism(reps[i], reps[j]) is not None:
                    return Outcome(n, {"field": p, "instance": f"classes {i} and {j} are isotopic"})
    for a in range(1, p):
        for b in range(1, p):
            n += 1
            if isotopism_class_of(family("A", a, b, field=F)).class_id != 5:
                return Outcome(n, {"field": p, "instance": f"A({a},{b})"})
    for a in range(p):
        for b in range(p):
            for c in range(p):
                if a or b or c:
                    n += 1
                    if isotopism_class_of(family("B", a, b, c, field=F)).class_id not in (6, 7, 8):
                        return Outcome(n, {"field": p, "instance": f"B({a},{b},{c})"})
    return Outcome(n)


def _eight_classes(p):
    r = classify_all(p)
    if not r.ok():
        return Outcome(r.total, {"field": p, "counts": r.counts, "complete": r.complete})
    return Outcome(r.total)


def _E31_two_classes(p):
    F = gf(p)
    o1 = isomorphism_orbit(_alg(((1, 0, 0), (0, 0, 0), (0, 0, 0)), p))
    o2 = isomorphism_orbit(_alg(((0, 1, 0), (0, 0, 0), (0, 0, 0)), p))
    members = {c for c in range(p**9) if sum(1 for r in code_to_rows(c, 3, p) if any(r)) == 1}
    if set(o1) & set(o2):
        return Outcome(len(members), {"field": p, "instance": "e1e1=e1 ≅ e1e1=e2"})
    missing = members - set(o1) - set(o2)
    if missing:
        c = min(missing)
        return Outcome(len(members), {"field": p, "instance": code_to_rows(c, 3, p)})
    del F
    return Outcome(len(members))


def _E32_prenormal(p):
    n = 0
    reps = {3: representative(3, gf(p)), 4: representative(4, gf(p))}
    for c in e32_partition(p):
        A = _alg(code_to_rows(c, 3, p), p)
        n += 1
        d = isomorphism_canonical_E32(A)
        e11 = d.canonical.algebra().rows[0]
        if not d.verify() or e11 not in ((1, 0, 0), (0, 1, 0), (1, 1, 0)):
            return Outcome(n, {"field": p, "instance": A.rows})
        if isotopism_class_of(A, reps=reps | {k: representative(k, gf(p)) for k in range(1, 9) if k not in reps}).class_id not in reps:
            return Outcome(n, {"field": p, "instance": A.rows, "detail": "isotopism class"})
    return Outcome(n)


# --- D versus C ---------------------------------------------------------------------------------


def _D10_switch(p):
    S = _M([[1, 0, 0], [0, 0, 1], [0, 1, 0]], p)
    return _check_maps(
        ((f"D(1,0,{g},{d},{e})", D(p, 1, 0, g, d, e), C(p, 1, 0, g, e, d), S) for _, _, g, d, e in _members("D", p, ((1, 0),))),
        p,
    )


def _D11_shift(p):
    T = _M([[1, p - 1, 0], [0, 1, 0], [0, 0, 1]], p)
    S = _M([[1, 0, 0], [0, 0, 1], [0, 1, 0]], p)

    def items():
        for _, _, g, d, e in _members("D", p, ((1, 1),)):
            dg = (d - g) % p
            yield f"D(1,1,{g},{d},{e}) → D(1,0,{g},{dg},{e})", D(p, 1, 1, g, d, e), D(p, 1, 0, g, dg, e), T
            yield f"D(1,1,{g},{d},{e}) → C(1,0,{g},{e},{dg})", D(p, 1, 1, g, d, e), C(p, 1, 0, g, e, dg), T @ S

    return _check_maps(items(), p)


def _D01_eps(p):
    def items():
        for g in range(p):
            for d in range(p):
                for e in range(1, p):
                    F = _M([[0, 1, 0], [0, 0, 1], [1, 0, -d * _inv(e, p)]], p)
                    yield f"D(0,1,{g},{d},{e})", D(p, 0, 1, g, d, e), _alg(((e, g, 0), (0, 0, 1), (0, 0, 0)), p), F

    return _check_maps(items(), p)


def _D01_gamma(p):
    def items():
        for g in range(1, p):
            for d in range(p):
                F = _M([[0, 1, -d * _inv(g, p)], [0, 0, 1], [1, 0, 0]], p)
                yield f"D(0,1,{g},{d},0)", D(p, 0, 1, g, d, 0), _alg(((0, g, 0), (0, 0, 1), (0, 0, 0)), p), F

    return _check_maps(items(), p)


def _D010d0_not_C(p):
    return _check_never(
        (
            (f"D(0,1,0,{dp},0) vs C{c}", D(p, 0, 1, 0, dp, 0), C(p, *c))
            for dp in range(1, p)
            for c in _members("C", p)
        ),
        p,
    )


def _D010d0_squares(p):
    def iff():
        for d in range(1, p):
            for dp in range(1, p):
                yield f"δ={d}, δ'={dp}", D(p, 0, 1, 0, d, 0), D(p, 0, 1, 0, dp, 0), _sq(d, dp, p)

    out = _check_iff(iff(), p)
    if out.counterexample:
        return out

    def maps():
        # e1 ↦ m e1, e2 ↦ m² e2, e3 ↦ e3 takes D(0,1,0,δ',0) to D(0,1,0,δ,0) when δ = m²δ'
        for dp in range(1, p):
            for m in range(1, p):
                d = m * m * dp % p
                yield f"δ'={dp}, m={m}", D(p, 0, 1, 0, dp, 0), D(p, 0, 1, 0, d, 0), _M([[m, 0, 0], [0, m * m, 0], [0, 0, 1]], p)

    m = _check_maps(maps(), p)
    return Outcome(out.instances + m.instances, m.counterexample)


# --- ε = 0 list ----------------------------------------------------------------------------------


def _eps_lemma(p):
    def items():
        for a, b, g, d, e in _members("C", p):
            if e:
                yield f"C({a},{b},{g},{d},{e})", C(p, a, b, g, d, e), C(p, a, b, g, d, 1), _M([[1, 0, 0], [0, 1, 0], [0, 0, _inv(e, p)]], p)

    return _check_maps(items(), p)


def _C10g00_squares(p):
    return _check_iff(
        (
            (f"γ={g}, γ'={gp}", C(p, 1, 0, g, 0, 0), C(p, 1, 0, gp, 0, 0), _sq(gp, g, p))
            for g in range(1, p)
            for gp in range(1, p)
        ),
        p,
    )


def _printed_condition(name: str) -> Callable[[int], Outcome]:
    def run(p):
        rep = derive_E32_iso_conditions(p, (name,))[name]
        n = len(rep.table.members) ** 2
        corrected_ok = rep.ok
        if rep.printed_mismatches:
            x, y = rep.printed_mismatches[0]
            return Outcome(
                n,
                {"field": p, "pair": [list(x), list(y)], "printed": rep.printed, "isomorphic": rep.table.related(x, y)},
                corrected_ok,
            )
        if not corrected_ok:
            return Outcome(n, {"field": p, "detail": "derived relation disagrees", "table": rep.to_dict()})
        return Outcome(n)

    return run


def _listed(p: int, eps: Sequence[int]) -> list[tuple[str, tuple]]:
    out = []
    for fam in ("C", "D"):
        for par in _members(fam, p, eps=eps):
            k = kind_of(fam, par, p)
            if k is not None and k != "C(0,1,0,0,1)":
                out.append((fam, par))
    return out


def _exactly_one(p: int, eps: Sequence[int], restrict_eps0: bool) -> Outcome:
    """Printed: every algebra (of the ε=0 part, or all of E_{3;2}) is isomorphic to exactly one listed algebra,
    listed algebras being pairwise non-isomorphic up to the stated conditions.
    """
    part = e32_partition(p)
    listed = _listed(p, eps)
    by_class: dict[int, list] = {}
    for fam, par in listed:
        A = family(fam, *par, field=gf(p))
        by_class.setdefault(_cls(A), []).append((fam, par))
    counter: dict = {}
    # distinct kinds landing in one class break "exactly one"
    for k, items in sorted(by_class.items()):
        kinds = sorted({kind_of(f, q, p) for f, q in items})
        if len(kinds) > 1:
            counter["isomorphic_across_kinds"] = [f"{f}{q}" for f, q in items if kind_of(f, q, p) in kinds[:2]][:4]
            break
    # algebras of the relevant part whose class contains no listed member
    if restrict_eps0:
        relevant = (C(p, *m) for m in _members("C", p, eps=(0,)))
    else:
        relevant = (_alg(code_to_rows(c, 3, p), p) for c in sorted(part))
    for A in relevant:
        if _cls(A) not in by_class:
            counter["unlisted"] = {"instance": A.rows, "canonical": isomorphism_canonical_E32(A).canonical.label}
            break
    if not counter:
        return Outcome(len(listed))
    return Outcome(len(listed), {"field": p, **counter}, _canonical_partition_ok(p))


def _canonical_partition_ok(p: int) -> bool:
    """The corrected list: one canonical form per orbit class, and the chain lands on it."""
    part = e32_partition(p)
    reps = canonical_representatives(p)
    classes = {_cls(r.algebra()) for r in reps}
    return len(classes) == len(reps) == len({k for k, _ in part.values()})


# --- ε = 1 part ----------------------------------------------------------------------------------


def _eps1_derived_dim(p):
    def items():
        for a, b, g, d, _ in _members("C", p, eps=(1,)):
            A = C(p, a, b, g, d, 1)
            for gp in range(1, p):
                yield f"C({a},{b},{g},{d},1) vs C(1,0,{gp},0,0)", A, C(p, 1, 0, gp, 0, 0)
            yield f"C({a},{b},{g},{d},1) vs C(1,1,-1,-1,0)", A, C(p, 1, 1, p - 1, p - 1, 0)

    return _check_never(items(), p)


def _eps1_beta_zero_only(p):
    pairs = [
        (m, gp, dp)
        for m in _members("C", p, ((0, 1), (1, 1)), eps=(1,))
        for gp in range(p)
        for dp in range(1, p)
    ]

    def items():
        for (a, b, g, d, _), gp, dp in pairs:
            yield f"C({a},{b},{g},{d},1) vs C(1,0,{gp},{dp},0)", C(p, a, b, g, d, 1), C(p, 1, 0, gp, dp, 0)

    out = _check_never(items(), p)
    if out.counterexample is None:
        return out

    # corrected: C(1,1,0,δ,1) ≅ C(1,1,0,δ,0) ≅ C(1,0,δ,1,0), so β = 1 occurs exactly when
    # α = 1, γ = 0, δ ≠ 0 and γ'/δ'² = δ
    def corrected():
        for (a, b, g, d, _), gp, dp in pairs:
            pred = a == 1 and g == 0 and d != 0 and gp == d * dp * dp % p
            yield "", C(p, a, b, g, d, 1), C(p, 1, 0, gp, dp, 0), pred

    out.corrected = _check_iff(corrected(), p).counterexample is None
    return Outcome(len(pairs), out.counterexample, out.corrected)


def _C10gd1_matrix(p):
    return _check_maps(
        (
            (f"γ={g}, δ={d}", C(p, 1, 0, g, d, 1), C(p, 1, 0, g, d, 0), _M([[1, 0, 0], [0, 1, 1], [0, 0, -d]], p))
            for g in range(p)
            for d in range(1, p)
        ),
        p,
    )


def _C10g01_not_C10gd0(p):
    return _check_never(
        (
            (f"C(1,0,{g},0,1) vs C(1,0,{gp},{dp},0)", C(p, 1, 0, g, 0, 1), C(p, 1, 0, gp, dp, 0))
            for g in range(p)
            for gp in range(p)
            for dp in range(1, p)
        ),
        p,
    )


def _C10g01_not_C01gd0(p):
    return _check_never(
        (
            (f"C(1,0,{g},0,1) vs C(0,1,{gp},{dp},0)", C(p, 1, 0, g, 0, 1), C(p, 0, 1, gp, dp, 0))
            for g in range(p)
            for gp in range(1, p)
            for dp in range(p)
        ),
        p,
    )


def _C01gd1_matrix(p):
    return _check_maps(
        (
            (f"γ={g}, δ={d}", C(p, 0, 1, g, d, 1), C(p, 0, 1, g, d, 0), _M([[1, 0, 1], [0, 1, 0], [0, 0, -g]], p))
            for g in range(1, p)
            for d in range(p)
        ),
        p,
    )


def _C010d1_not_C01gd0(p):
    return _check_never(
        (
            (f"C(0,1,0,{d},1) vs C(0,1,{gp},{dp},0)", C(p, 0, 1, 0, d, 1), C(p, 0, 1, gp, dp, 0))
            for d in range(p)
            for gp in range(1, p)
            for dp in range(p)
        ),
        p,
    )


def _C11gd1_to_C01(p):
    def iff():
        for g in range(p):
            for d in range(p):
                for gp in range(1, p):
                    for dp in range(p):
                        pred = d == 0 and gp * gp % p == g * pow(dp, 3, p) % p
                        yield f"C(1,1,{g},{d},1) vs C(0,1,{gp},{dp},0)", C(p, 1, 1, g, d, 1), C(p, 0, 1, gp, dp, 0), pred

    out = _check_iff(iff(), p)
    if out.counterexample:
        return out

    def maps():
        for g in range(1, p):
            for gp in range(1, p):
                for dp in range(1, p):
                    if gp * gp % p == g * pow(dp, 3, p) % p:
                        di = _inv(dp, p)
                        F = _M([[0, di, 1], [gp * di * di, 0, -1], [0, 0, -g]], p)
                        yield f"γ={g}, γ'={gp}, δ'={dp}", C(p, 1, 1, g, 0, 1), C(p, 0, 1, gp, dp, 0), F
        for g in range(1, p):
            F = _M([[0, _inv(g, p), 1], [1, 0, -1], [0, 0, -g]], p)  # γ' = γ², δ' = γ
            yield f"C(1,1,{g},0,1) → C(0,1,{g * g % p},{g},0)", C(p, 1, 1, g, 0, 1), C(p, 0, 1, g * g, g, 0), F

    m = _check_maps(maps(), p)
    return Outcome(out.instances + m.instances, m.counterexample)


def _eps1_not_C11gd0(p):
    sources = [(1, 0, g, 0, 1) for g in range(p)] + [(0, 1, 0, d, 1) for d in range(p)] + [(1, 1, 0, 0, 1)]

    def items():
        for s in sources:
            for gp in range(p):
                for dp in range(p):
                    if gp != dp:
                        yield f"C{s} vs C(1,1,{gp},{dp},0)", C(p, *s), C(p, 1, 1, gp, dp, 0)

    return _check_never(items(), p)


def _C11gd1_to_C11(p):
    F = gf(p)

    def iff():
        for g in range(p):
            for d in range(1, p):
                tg, td = _sigma(g, d, F)
                pred = d != g and g != 0
                if tg == td:  # the stated target is outside C(1,1,γ',δ',0) with γ' ≠ δ'
                    yield f"γ={g}, δ={d} (target degenerate)", None, None, pred
                    continue
                yield f"C(1,1,{g},{d},1) vs C(1,1,{tg},{td},0)", C(p, 1, 1, g, d, 1), C(p, 1, 1, tg, td, 0), pred

    n = 0
    for desc, A, B, pred in iff():
        n += 1
        actual = A is not None and _iso(A, B)
        if actual != pred:
            return Outcome(n, {"field": p, "instance": desc, "predicted": pred, "isomorphic": actual})

    def maps():
        for g in range(1, p):
            for d in range(1, p):
                if g != d:
                    tg, td = _sigma(g, d, F)
                    M = _M([[0, d * d * _inv(g, p), 1], [d, 0, -1], [0, 0, d - g]], p)
                    yield f"γ={g}, δ={d}", C(p, 1, 1, g, d, 1), C(p, 1, 1, tg, td, 0), M

    m = _check_maps(maps(), p)
    return Outcome(n + m.instances, m.counterexample)


def _C110d1_matrix(p):
    return _check_maps(
        (
            (f"δ={d}", C(p, 1, 1, 0, d, 1), C(p, 1, 1, 0, d, 0), _M([[1, 0, 1], [0, 1, -1], [0, 0, d]], p))
            for d in range(1, p)
        ),
        p,
    )


def _f3_lemma(p):
    """Every isomorphism between two ε = 1 C-family algebras maps e3 to a multiple of e3."""
    eps1 = {algebra_code(C(p, *m).rows, p) for m in _members("C", p, eps=(1,))}
    n = 0
    for m in _members("C", p, eps=(1,)):
        A = C(p, *m)
        idx, codes = isomorphism_images(A)
        for h, c in zip(idx.tolist(), codes.tolist()):
            if c not in eps1:
                continue
            n += 1
            row = gl_matrix(h, 3, p).row(2)
            if row[0] or row[1] or not row[2]:
                return Outcome(n, {"field": p, "source": f"C{m}", "target": code_to_rows(c, 3, p), "f(e3)": list(row)})
    return Outcome(n)


def _C10g01_squares(p):
    def iff():
        for g in range(p):
            for gp in range(p):
                pred = _sq(g, gp, p) if (g and gp) else g == gp
                yield f"γ={g}, γ'={gp}", C(p, 1, 0, g, 0, 1), C(p, 1, 0, gp, 0, 1), pred

    out = _check_iff(iff(), p)
    if out.counterexample:
        return out

    def maps():
        # e1 ↦ e1, e2 ↦ m e2, e3 ↦ m² e3 takes C(1,0,γ,0,1) to C(1,0,γ',0,1) when γ = m²γ'
        for gp in range(p):
            for m in range(1, p):
                g = m * m * gp % p
                yield f"γ'={gp}, m={m}", C(p, 1, 0, g, 0, 1), C(p, 1, 0, gp, 0, 1), _M([[1, 0, 0], [0, m, 0], [0, 0, m * m]], p)

    mm = _check_maps(maps(), p)
    return Outcome(out.instances + mm.instances, mm.counterexample)


def _C010d1_matrix(p):
    return _check_maps(
        (
            (f"δ={d}", C(p, 0, 1, 0, d, 1), C(p, 1, 0, d, 0, 1), _M([[0, 1, 0], [d, 0, 1], [0, 0, -d]], p))
            for d in range(1, p)
        ),
        p,
    )


def _C01001_separate(p):
    def items():
        X = C(p, 0, 1, 0, 0, 1)
        for g in range(p):
            yield f"C(0,1,0,0,1) vs C(1,1,{g},{g},1)", X, C(p, 1, 1, g, g, 1)
        for gp in range(p):
            yield f"C(0,1,0,0,1) vs C(1,0,{gp},0,1)", X, C(p, 1, 0, gp, 0, 1)
            for g in range(p):
                yield f"C(1,1,{g},{g},1) vs C(1,0,{gp},0,1)", C(p, 1, 1, g, g, 1), C(p, 1, 0, gp, 0, 1)

    return _check_never(items(), p)


def _C11gg1_pairs(p):
    def iff():
        for g in range(p):
            for gp in range(p):
                if g != gp:
                    yield f"γ={g}, γ'={gp}", C(p, 1, 1, g, g, 1), C(p, 1, 1, gp, gp, 1), g * gp % p == 1

    out = _check_iff(iff(), p)
    if out.counterexample:
        return out
    n = out.instances
    for g in range(1, p):
        gp = _inv(g, p)
        A, B = C(p, 1, 1, g, g, 1), C(p, 1, 1, gp, gp, 1)
        M = _M([[0, g, g * g], [g, 0, 0], [0, 0, -pow(g, 3, p)]], p)
        n += 1
        if not verify_isomorphism(A, B, M):
            return Outcome(n, {"field": p, "instance": f"γ={g}", "matrix": M.tolist()})
        if g == gp:
            continue
        # every isomorphism has f11 = f22 = 0, f12 = f21 = γ, f33 = -γ³ and f13 + f23 = γ²
        target = algebra_code(B.rows, p)
        idx, codes = isomorphism_images(A)
        for h in idx[codes == target].tolist():
            n += 1
            Fd = gl_matrix(h, 3, p).data
            g3 = (-pow(g, 3, p)) % p
            if (
                Fd[0][0] or Fd[1][1] or Fd[0][1] != g or Fd[1][0] != g or Fd[2][2] != g3
                or (Fd[0][2] + Fd[1][2]) % p != g * g % p
            ):
                return Outcome(n, {"field": p, "instance": f"γ={g}", "isomorphism": [list(r) for r in Fd]})
    return Outcome(n)


def _final_list(p):
    return _exactly_one(p, eps=range(p), restrict_eps0=False)


def _eps0_list(p):
    return _exactly_one(p, eps=(0,), restrict_eps0=True)


# --- registry ----------------------------------------------------------------------------------


CLAIMS: tuple[Claim, ...] = (
    Claim("A-family-isotopy", "A(α,β) ~ A(1,1) via (f, Id, Id), f = diag(1, α, β)", "matrix", _A_family),
    Claim("B-gamma-nonzero", "B(α,β,γ) ~ B(0,0,1) whenever γ ≠ 0", "search", _B_gamma_nonzero),
    Claim("B-alpha-scaling", "B(α,β,0) ~ B(1,β',0): (f, Id, Id) with f(e3) = αe3, after switching e1, e2 if α = 0", "matrix", _B_alpha_scaling),
    Claim("B1b0-matrices", "the displayed (F, G, H) is an isotopism B(1,β,0) → B(1,1,0), β ≠ 0", "matrix", _B1b0_matrices),
    Claim("B110-B100-not-isotopic", "B(1,1,0) and B(1,0,0) are not isotopic", "negative", _B110_B100),
    Claim("E33-four-classes", "E_{3;3} has four isotopism classes: A(1,1), B(0,0,1), B(1,1,0), B(1,0,0)", "search", _four_classes),
    Claim("eight-classes", "eight isotopism classes of three-dimensional evolution algebras", "classification", _eight_classes, (2, 3)),
    Claim("E31-two-classes", "E_{3;1} algebras are isomorphic to exactly one of e1e1=e1, e1e1=e2", "negative", _E31_two_classes),
    Claim("E32-prenormal-form", "E_{3;2} algebras are isomorphic to one with e1e1 ∈ {e1, e2, e1+e2} and isotopic to (e1,e1,0) or (e1,e2,0)", "search", _E32_prenormal, (2, 3)),
    Claim("D10-switch", "D(1,0,γ,δ,ε) ≅ C(1,0,γ,ε,δ) by switching e2 and e3", "matrix", _D10_switch),
    Claim("D11-shift", "D(1,1,γ,δ,ε) ≅ D(1,0,γ,δ-γ,ε) ≅ C(1,0,γ,ε,δ-γ) via e1 ↦ e1 - e2", "matrix", _D11_shift),
    Claim("D01-eps-map", "ε ≠ 0: D(0,1,γ,δ,ε) ≅ (εe1+γe2, e3, 0) via e1 ↦ e2, e2 ↦ e3, e3 ↦ e1 - (δ/ε)e3", "matrix", _D01_eps),
    Claim("D01-gamma-map", "γ ≠ 0: D(0,1,γ,δ,0) ≅ (γe2, e3, 0) via e1 ↦ e2 - (δ/γ)e3, e2 ↦ e3, e3 ↦ e1", "matrix", _D01_gamma),
    Claim("D010d0-not-C", "D(0,1,0,δ',0) is not isomorphic to any C(α,β,γ,δ,ε)", "negative", _D010d0_not_C),
    Claim("D010d0-square-classes", "D(0,1,0,δ,0) ≅ D(0,1,0,δ',0) iff δ = m²δ'; e1 ↦ me1, e2 ↦ m²e2 realises it", "iff", _D010d0_squares),
    Claim("eps-lemma", "C(α,β,γ,δ,ε) ≅ C(α,β,γ,δ,1) via e3 ↦ (1/ε)e3", "matrix", _eps_lemma),
    Claim("C10g00-square-classes", "C(1,0,γ,0,0) ≅ C(1,0,γ',0,0) iff γ' = γm²", "iff", _C10g00_squares),
    Claim(
        "C10gd0-condition",
        "C(1,0,γ,δ,0) ≅ C(1,0,γ',δ',0) (δ,δ' ≠ 0) iff γδ'² = δ²γ (as printed)",
        "iff",
        _printed_condition("C(1,0,γ,δ,0)"),
        (3, 5),
        "iff γδ'² = γ'δ², i.e. γ/δ² is the invariant",
    ),
    Claim(
        "C01gd0-condition",
        "C(0,1,γ,δ,0) ≅ C(0,1,γ',δ',0) (γ,γ' ≠ 0) iff γ = γ'm³, δ = δ'm², or γ = γ'²m³, δ = δ' = 0",
        "iff",
        _printed_condition("C(0,1,γ,δ,0)"),
        (3, 5),
    ),
    Claim(
        "C11gd0-condition",
        "C(1,1,γ,δ,0) ≅ C(1,1,γ',δ',0) (γ ≠ 0 ≠ δ) iff γ' = γ²/δ³ and δ' = γ/δ² (as printed)",
        "iff",
        _printed_condition("C(1,1,γ,δ,0)"),
        (3, 5),
        "(γ',δ') = (γ,δ) or (γ²/δ³, γ/δ²)",
    ),
    Claim(
        "eps0-list-exactly-one",
        "every C(α,β,γ,δ,0) is isomorphic to exactly one listed ε = 0 normal form",
        "iff",
        _eps0_list,
        DEFAULT_FIELDS,
        "listed kinds overlap (e.g. C(1,1,0,δ,0) ≅ C(1,0,δ,1,0), C(1,1,γ,0,0) ≅ C(0,1,γ²,γ,0)); "
        "the canonical forms with these overlaps merged partition the classes",
    ),
    Claim("eps1-derived-dim", "C(α,β,γ,δ,1) is not isomorphic to C(1,0,γ',0,0) or C(1,1,-1,-1,0)", "negative", _eps1_derived_dim),
    Claim(
        "eps1-beta-zero-only",
        "C(α,β,γ,δ,1) ≅ C(1,0,γ',δ',0) with δ' ≠ 0 only if β = 0",
        "negative",
        _eps1_beta_zero_only,
        DEFAULT_FIELDS,
        "β = 1 also occurs: C(1,1,0,δ,1) ≅ C(1,0,δ,1,0); the isomorphism holds iff α = 1, γ = 0, δ ≠ 0, γ'/δ'² = δ",
    ),
    Claim("C10gd1-matrix", "δ ≠ 0: C(1,0,γ,δ,1) ≅ C(1,0,γ,δ,0) by the displayed matrix", "matrix", _C10gd1_matrix),
    Claim("C10g01-not-C10gd0", "C(1,0,γ,0,1) and C(1,0,γ',δ',0), δ' ≠ 0, are not isomorphic", "negative", _C10g01_not_C10gd0),
    Claim("C10g01-not-C01gd0", "C(1,0,γ,0,1) and C(0,1,γ',δ',0), γ' ≠ 0, are not isomorphic", "negative", _C10g01_not_C01gd0),
    Claim("C01gd1-matrix", "γ ≠ 0: C(0,1,γ,δ,1) ≅ C(0,1,γ,δ,0) by the displayed matrix", "matrix", _C01gd1_matrix),
    Claim("C010d1-not-C01gd0", "C(0,1,0,δ,1) and C(0,1,γ',δ',0), γ' ≠ 0, are not isomorphic", "negative", _C010d1_not_C01gd0),
    Claim("C11gd1-to-C01", "C(1,1,γ,δ,1) ≅ C(0,1,γ',δ',0) iff δ = 0 and γ'² = γδ'³, with the displayed matrix", "iff", _C11gd1_to_C01),
    Claim("eps1-not-C11gd0", "C(1,0,γ,0,1), C(0,1,0,δ,1), C(1,1,0,0,1) are not isomorphic to C(1,1,γ',δ',0), γ' ≠ δ'", "negative", _eps1_not_C11gd0),
    Claim("C11gd1-to-C11", "δ ≠ 0: C(1,1,γ,δ,1) ≅ C(1,1,γ²/δ³,γ/δ²,0) iff δ ≠ γ ≠ 0, with the displayed matrix", "iff", _C11gd1_to_C11),
    Claim("C110d1-matrix", "C(1,1,0,δ,1) ≅ C(1,1,0,δ,0) by the displayed matrix", "matrix", _C110d1_matrix),
    Claim("f3-multiple-of-e3", "isomorphisms between C(α,β,γ,δ,1) algebras satisfy f(e3) = m e3", "negative", _f3_lemma, (2, 3)),
    Claim("C10g01-square-classes", "C(1,0,γ,0,1) ≅ C(1,0,γ',0,1) iff γ = m²γ'; e2 ↦ me2, e3 ↦ m²e3 realises it", "iff", _C10g01_squares),
    Claim("C010d1-to-C10d01", "δ ≠ 0: C(0,1,0,δ,1) ≅ C(1,0,δ,0,1) by the displayed matrix", "matrix", _C010d1_matrix),
    Claim("C01001-separate", "C(0,1,0,0,1) ≇ C(1,1,γ,γ,1), and neither is isomorphic to C(1,0,γ',0,1)", "negative", _C01001_separate),
    Claim("C11gg1-inverse-pairs", "γ ≠ γ': C(1,1,γ,γ,1) ≅ C(1,1,γ',γ',1) iff γγ' = 1; displayed matrix; f13 + f23 = γ²", "iff", _C11gg1_pairs),
    Claim(
        "E32-final-list",
        "every algebra of E_{3;2} is isomorphic to exactly one algebra of the final list",
        "iff",
        _final_list,
        DEFAULT_FIELDS,
        "add C(0,1,0,0,1) and merge the overlapping kinds; the canonical forms then partition the classes",
    ),
)

MATRIX_CLAIMS = tuple(c.id for c in CLAIMS if c.kind == "matrix")

# claims that check an explicitly displayed matrix or map (alone or next to an iff statement)
WITNESS_CLAIMS = MATRIX_CLAIMS + (
    "D010d0-square-classes",
    "C11gd1-to-C01",
    "C11gd1-to-C11",
    "C10g01-square-classes",
    "C11gg1-inverse-pairs",
)


def select_claims(patterns: Sequence[str] | None = None) -> list[Claim]:
    """Claims whose id contains any of ``patterns`` (all claims when empty)."""
    if not patterns:
        return list(CLAIMS)
    out = [c for c in CLAIMS if any(pat in c.id for pat in patterns)]
    if not out:
        raise KeyError(f"no claim matches {list(patterns)}; known ids: {[c.id for c in CLAIMS]}")
    return out


def run_claim(claim: Claim, fields: Sequence[int] | None = None) -> ClaimResult:
    ps = tuple(p for p in (fields or claim.fields) if p in claim.fields) if fields else claim.fields
    t0 = time.perf_counter()
    per_field: dict[int, str] = {}
    total = 0
    counter = None
    for p in ps:
        out = claim.run(p)
        per_field[p] = out.status
        total += out.instances
        if counter is None and out.counterexample is not None:
            counter = out.counterexample
    statuses = set(per_field.values())
    status = "fail" if "fail" in statuses else "discrepancy" if "discrepancy" in statuses else "pass"
    return ClaimResult(
        claim.id,
        claim.statement,
        claim.kind,
        ps,
        status,
        total,
        per_field,
        counter,
        claim.corrected,
        time.perf_counter() - t0,
    )


def verify_paper_claims(patterns: Sequence[str] | None = None, fields: Sequence[int] | None = None, progress=None) -> ClaimReport:
    """Run the selected claims (default: all) over their fields (optionally intersected with ``fields``)."""
    report = ClaimReport()
    for c in select_claims(patterns):
        r = run_claim(c, fields)
        report.results.append(r)
        if progress is not None:
            progress(r)
    return report


__all__ = [
    "CLAIMS",
    "Claim",
    "ClaimReport",
    "ClaimResult",
    "MATRIX_CLAIMS",
    "Outcome",
    "PRINTED_CONDITIONS",
    "recording_witnesses",
    "run_claim",
    "select_claims",
    "verify_paper_claims",
    "WITNESS_CLAIMS",
]
