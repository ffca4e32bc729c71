"""Isotopism classes of three-dimensional evolution algebras and their genetic patterns.

Every algebra of E_3(GF(p)) is matched against eight fixed representatives.
Invariant signatures (annihilator codimension, derived dimension) leave at
most two candidates.  A class is assigned only together with a verified
isotopism, so the partition is certified member by member.  Classes are
pairwise non-isotopic by signature, plus one exhaustive search that
separates the two representatives sharing a signature.
"""

from __future__ import annotations

import json
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from typing import Iterable

from .algebra import REPRESENTATIVE_LABELS, EvolutionAlgebra, representative
from .field import PrimeField, gf
from .isotopy import (
    BudgetExhausted,
    IsotopismWitness,
    SearchBudget,
    code_to_rows,
    find_isotopism,
)

CLASS_IDS = tuple(range(1, 9))


class ClassificationError(RuntimeError):
    """An algebra matched no representative: the eight-class statement would fail for this field."""


def invariant_signature(A: EvolutionAlgebra) -> tuple[int, int]:
    """``(annihilator_codim, derived_dim)``."""
    return A.annihilator_codim(), A.derived_dim()


def representatives(field: PrimeField) -> dict[int, EvolutionAlgebra]:
    return {k: representative(k, field) for k in CLASS_IDS}


def representative_signatures() -> dict[int, tuple[int, int]]:
    return {k: invariant_signature(A) for k, A in representatives(gf(2)).items()}


# --- genetic patterns --------------------------------------------------------------

_PATTERNS = {
    1: ("(0,0,0)", "no offspring exists"),
    2: ("(u,0,0)", "only one of the genotypes gives rise to offspring"),
    3: (
        "(u,u,0)",
        "exactly one of the genotypes does not produce offspring, whereas the other two give rise "
        "to offspring with the same genotype",
    ),
    4: (
        "(u,v,0)",
        "exactly one of the genotypes does not produce offspring, whereas the other two give rise "
        "to offspring with distinct genotypes",
    ),
    5: ("(u,u,u)", "the offspring has always the same genotype, whatever the initial one is"),
    6: ("(u,v,w)", "the genotype of the offspring depends directly on that of the cell parent"),
    7: (
        "(u,v,½u+½v)",
        "the third genotype gives rise to each one of the genotypes produced by the other two "
        "with the same probability",
    ),
    8: ("(u,v,u)", "two of the genotypes produce offspring with the same genotype"),
}


@dataclass(frozen=True)
class GeneticPattern:
    class_id: int
    pattern: str
    description: str
    note: str | None = None

    def __str__(self):
        return f"{self.pattern}: {self.description}"


def genetic_pattern(class_id: int, characteristic: int = 0) -> GeneticPattern:
    """The inheritance pattern of an isotopism class (u, v, w: distinct genotypes)."""
    if class_id not in _PATTERNS:
        raise ValueError(f"class id {class_id} not in 1..8")
    pattern, text = _PATTERNS[class_id]
    note = None
    if class_id == 7 and characteristic == 2:
        pattern = "(u,v,u+v)"
        note = "½ does not exist in characteristic 2; the equal-probability reading (u,v,½u+½v) needs characteristic ≠ 2"
    return GeneticPattern(class_id, pattern, text, note)


# --- single algebra ----------------------------------------------------------------


@dataclass(frozen=True)
class ClassAssignment:
    class_id: int
    witness: IsotopismWitness
    nodes: int
    tried: tuple[int, ...]


def _prop(u, v, p) -> bool:
    return all((u[i] * v[j] - u[j] * v[i]) % p == 0 for i in range(len(u)) for j in range(i + 1, len(u)))


def isotopism_class_of(
    A: EvolutionAlgebra,
    budget: SearchBudget | None = None,
    reps: dict[int, EvolutionAlgebra] | None = None,
) -> ClassAssignment:
    """The class id of a three-dimensional algebra, with a verified isotopism to its representative."""
    if A.n != 3:
        raise ValueError("isotopism classes are defined for dimension 3")
    if not isinstance(A.field, PrimeField):
        raise ValueError("classification needs a finite prime field")
    reps = reps or representatives(A.field)
    sigs = {k: invariant_signature(R) for k, R in reps.items()}
    rows = [r for r in A.rows if any(r)]
    p = A.field.p
    cands = [k for k in CLASS_IDS if sigs[k] == invariant_signature(A)]
    if len(cands) == 2 and any(_prop(rows[i], rows[j], p) for i in range(len(rows)) for j in range(i + 1, len(rows))):
        cands.reverse()
    nodes = 0
    for k in cands:
        st: dict = {}
        w = find_isotopism(A, reps[k], budget, stats=st)
        nodes += st.get("nodes", 0)
        if w is not None:
            return ClassAssignment(k, w, nodes, tuple(cands[: cands.index(k) + 1]))
    raise ClassificationError(f"no representative is isotopic to {A}")


# --- whole field ------------------------------------------------------------------


@dataclass
class ClassificationReport:
    p: int
    counts: dict[int, int]
    total: int
    complete: bool
    nodes: int = 0
    exhausted: list[int] = dc_field(default_factory=list)
    separations: dict[str, bool] = dc_field(default_factory=dict)
    assignments: list[int] | None = None
    timings: dict[str, float] = dc_field(default_factory=dict)
    include_patterns: bool = True

    @property
    def nonempty_classes(self) -> int:
        return sum(1 for k in CLASS_IDS if self.counts.get(k, 0))

    def ok(self) -> bool:
        """Complete, every tuple classified, all eight classes present and separated."""
        return (
            self.complete
            and self.total == self.p**9
            and sum(self.counts.values()) == self.total
            and self.nonempty_classes == 8
            and all(self.separations.values())
        )

    def to_dict(self) -> dict:
        classes = []
        for k in CLASS_IDS:
            pat = str(genetic_pattern(k, self.p)) if self.include_patterns else None
            classes.append(
                {"id": k, "representative": REPRESENTATIVE_LABELS[k], "count": self.counts.get(k, 0), "pattern": pat}
            )
        out = {
            "field": self.p,
            "classes": classes,
            "total": self.total,
            "complete": self.complete,
            "search": {
                "nodes": self.nodes,
                "budget_exhausted": list(self.exhausted),
                "separations": dict(self.separations),
            },
        }
        if self.assignments is not None:
            out["assignments"] = list(self.assignments)
        out["timings"] = {k: round(v, 3) for k, v in self.timings.items()}
        return out

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent, ensure_ascii=False)

    @classmethod
    def from_dict(cls, d: dict) -> ClassificationReport:
        counts = {c["id"]: c["count"] for c in d["classes"]}
        return cls(
            p=d["field"],
            counts=counts,
            total=d["total"],
            complete=d["complete"],
            nodes=d["search"]["nodes"],
            exhausted=list(d["search"]["budget_exhausted"]),
            separations=dict(d["search"]["separations"]),
            assignments=d.get("assignments"),
            timings=dict(d.get("timings", {})),
            include_patterns=any(c.get("pattern") is not None for c in d["classes"]),
        )


def _classify_codes(args) -> tuple[list[tuple[int, int]], int, list[int]]:
    p, codes, max_pairs = args
    fld = gf(p)
    reps = representatives(fld)
    budget = SearchBudget(max_pairs=max_pairs)
    out, nodes, exhausted = [], 0, []
    for c in codes:
        A = EvolutionAlgebra.from_rows(code_to_rows(c, 3, p), fld)
        try:
            a = isotopism_class_of(A, budget, reps)
        except BudgetExhausted:
            exhausted.append(c)
            continue
        out.append((c, a.class_id))
        nodes += a.nodes
    return out, nodes, exhausted


def separate_representatives(p: int, budget: SearchBudget | None = None, exhaustive_all: bool | None = None) -> dict[str, bool]:
    """Certify that the representatives are pairwise non-isotopic over GF(p).

    Pairs with different signatures are separated by invariance; the pair
    sharing a signature, and (for ``exhaustive_all``, default p = 2) every
    pair, is separated by a completed search.  Values are ``True`` when the
    pair is proven non-isotopic.
    """
    fld = gf(p)
    reps = representatives(fld)
    if exhaustive_all is None:
        exhaustive_all = p == 2
    out = {}
    for i in CLASS_IDS:
        for j in CLASS_IDS:
            if j <= i:
                continue
            same_sig = invariant_signature(reps[i]) == invariant_signature(reps[j])
            if same_sig or exhaustive_all:
                try:
                    w = find_isotopism(reps[i], reps[j], budget, screen=False)
                except BudgetExhausted:
                    out[f"{i}-{j}"] = False  # not proven within the budget
                    continue
                out[f"{i}-{j}"] = w is None
            else:
                out[f"{i}-{j}"] = True
    return out


def classify_all(
    p: int,
    budget: SearchBudget | None = None,
    workers: int = 1,
    keep_assignments: bool = False,
    codes: Iterable[int] | None = None,
    include_patterns: bool = True,
) -> ClassificationReport:
    """Classify every structure matrix of E_3(GF(p)) (or just ``codes``)."""
    budget = budget or SearchBudget()
    t0 = time.perf_counter()
    all_codes = list(range(p**9)) if codes is None else list(codes)
    if workers <= 1:
        results = [_classify_codes((p, all_codes, budget.max_pairs))]
    else:
        chunks = [all_codes[i::workers] for i in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(_classify_codes, [(p, c, budget.max_pairs) for c in chunks]))
    assigned: dict[int, int] = {}
    nodes = 0
    exhausted: list[int] = []
    for out, n, ex_codes in results:
        assigned.update(out)
        nodes += n
        exhausted.extend(ex_codes)
    t1 = time.perf_counter()
    separations = separate_representatives(p, budget)
    t2 = time.perf_counter()
    counts = Counter(assigned.values())
    return ClassificationReport(
        p=p,
        counts={k: counts.get(k, 0) for k in CLASS_IDS},
        total=len(all_codes),
        complete=not exhausted and len(assigned) == len(all_codes),
        nodes=nodes,
        exhausted=sorted(exhausted),
        separations=separations,
        assignments=[assigned.get(c, 0) for c in all_codes] if keep_assignments else None,
        timings={"classify_s": t1 - t0, "separate_s": t2 - t1},
        include_patterns=include_patterns,
    )
