"""Points of an ideal over a prime field, by backtracking over the variables.

Each generator is checked as soon as its last variable (in the search order)
has been assigned, so partial assignments that already violate a generator
are cut immediately.  Extra side conditions ("checks") ride along the same
way and are how non-singularity filters prune the search.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Callable, Iterator, Mapping, Sequence

from .field import FieldError, PrimeField
from .linalg import BudgetExceeded
from .poly import Ideal, Polynomial

DEFAULT_MAX_VARS = 27
DEFAULT_MAX_NODES = 50_000_000

Check = Callable[[tuple], bool]


@dataclass(frozen=True)
class SideCondition:
    """A predicate on the values of ``variables``; ``False`` rejects the partial assignment."""

    variables: tuple[str, ...]
    predicate: Check


def occurrence_order(ideal: Ideal) -> tuple[str, ...]:
    """Variables by ascending number of generators they occur in (ties: ring order)."""
    counts: Counter = Counter()
    for g in ideal.generators:
        counts.update(g.used_variables())
    pos = {v: i for i, v in enumerate(ideal.variables)}
    return tuple(sorted(ideal.variables, key=lambda v: (counts[v], pos[v])))


def _compile(poly: Polynomial, pos: Mapping[str, int]):
    """Generator as (closing depth, [(coeff, ((slot, exp), ...)), ...])."""
    terms = []
    close = -1
    for m, c in poly.terms.items():
        factors = []
        for v, e in zip(poly.variables, m):
            if e:
                s = pos[v]
                factors.append((s, e))
                close = max(close, s)
        terms.append((c, tuple(factors)))
    return close, terms


def iter_variety_points(
    ideal: Ideal,
    field: PrimeField | None = None,
    variable_order: Sequence[str] | None = None,
    domains: Mapping[str, Sequence[int]] | None = None,
    checks: Sequence[SideCondition] = (),
    max_vars: int = DEFAULT_MAX_VARS,
    max_nodes: int = DEFAULT_MAX_NODES,
    stats: dict | None = None,
) -> Iterator[tuple[int, ...]]:
    """Yield zeros of ``ideal`` as value tuples aligned with ``ideal.variables``.

    Points come out in the lexicographic order of ``variable_order`` (default:
    :func:`occurrence_order`).  ``domains`` restricts individual variables to
    given values; ``checks`` are extra side conditions.  More than
    ``max_vars`` variables, or more than ``max_nodes`` search nodes, raises
    :class:`BudgetExceeded`.
    """
    field = field or ideal.field
    if not isinstance(field, PrimeField):
        raise FieldError("variety enumeration needs a finite prime field")
    if field != ideal.field:
        raise FieldError("ideal is over a different field")
    p = field.p
    names = ideal.variables
    if len(names) > max_vars:
        raise BudgetExceeded(f"{len(names)} variables exceed the budget of {max_vars}")
    order = tuple(variable_order) if variable_order is not None else occurrence_order(ideal)
    if sorted(order) != sorted(names):
        raise ValueError("variable_order must be a permutation of the ideal's variables")
    pos = {v: i for i, v in enumerate(order)}
    n = len(order)
    doms = [tuple(range(p))] * n
    if domains:
        doms = list(doms)
        for v, vals in domains.items():
            doms[pos[v]] = tuple(sorted({x % p for x in vals}))

    at_depth: list[list] = [[] for _ in range(n)]
    for g in ideal.generators:
        if not g:
            continue
        close, terms = _compile(g, pos)
        if close < 0:  # nonzero constant: empty variety
            return
        at_depth[close].append(terms)
    checks_at: list[list] = [[] for _ in range(n)]
    for chk in checks:
        slots = tuple(pos[v] for v in chk.variables)
        checks_at[max(slots) if slots else 0].append((slots, chk.predicate))

    back = [pos[v] for v in names]
    vals = [0] * n
    nodes = 0

    def ok(depth: int) -> bool:
        for terms in at_depth[depth]:
            acc = 0
            for c, factors in terms:
                t = c
                for s, e in factors:
                    t *= vals[s] if e == 1 else vals[s] ** e
                acc += t
            if acc % p:
                return False
        for slots, pred in checks_at[depth]:
            if not pred(tuple(vals[s] for s in slots)):
                return False
        return True

    def rec(depth: int):
        nonlocal nodes
        if depth == n:
            yield tuple(vals[s] for s in back)
            return
        for x in doms[depth]:
            nodes += 1
            if nodes > max_nodes:
                raise BudgetExceeded(f"variety search exceeded {max_nodes} nodes")
            vals[depth] = x
            if ok(depth):
                yield from rec(depth + 1)

    if n == 0:
        yield ()
    else:
        yield from rec(0)
    if stats is not None:
        stats["nodes"] = nodes


def variety_points(
    ideal: Ideal,
    field: PrimeField | None = None,
    variable_order: Sequence[str] | None = None,
    domains: Mapping[str, Sequence[int]] | None = None,
    checks: Sequence[SideCondition] = (),
    max_vars: int = DEFAULT_MAX_VARS,
    max_nodes: int = DEFAULT_MAX_NODES,
) -> list[dict[str, int]]:
    """All zeros as ``{variable: value}`` dicts, sorted lexicographically in ring-variable order."""
    pts = sorted(iter_variety_points(ideal, field, variable_order, domains, checks, max_vars, max_nodes))
    return [dict(zip(ideal.variables, pt)) for pt in pts]
