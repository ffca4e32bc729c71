"""Isotopism and isomorphism of evolution algebras over prime fields.

Three independent routes decide whether A ~ A':

* :func:`find_isotopism` -- backtracking over the rows of F and G with
  bitmask pruning, then H recovered from a linear system (H enters the
  isotopism equations linearly);
* :func:`variety_nonsingular_solutions` -- zeros of the ideal I_{A,A'}
  filtered by non-singularity;
* :func:`brute_force_isotopism_oracle` -- every triple in GL(n,p)^3.

A definitive negative answer is only ever returned after an exhaustive run.
Running out of budget raises :class:`BudgetExhausted` instead.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import product as iproduct
from typing import Sequence

import numpy as np

from .algebra import (
    AlgebraError,
    EvolutionAlgebra,
    _check_pair,
    verify_isomorphism,
    verify_isotopism,
)
from .field import FieldError, PrimeField, gf
from .linalg import BudgetExceeded, Matrix, enumerate_gl, gl_order, gl_table, solve_linear
from .poly import Ideal, Polynomial
from .variety import DEFAULT_MAX_VARS, SideCondition, iter_variety_points

DEFAULT_MAX_PAIRS = 10**9
ORACLE_MAX_TRIPLES = 10**7


class BudgetExhausted(BudgetExceeded):
    """The search stopped before it could prove either answer."""

    def __init__(self, message: str, stats: dict | None = None):
        super().__init__(message)
        self.stats = stats or {}


@dataclass(frozen=True)
class SearchBudget:
    """Limits for one decision.

    ``max_pairs`` bounds the number of partial (F, G) candidates (row placements)
    visited by the pruned search; ``max_variety_vars`` bounds the ideal route;
    ``wall_clock`` is an optional cap in seconds.
    """

    max_pairs: int = DEFAULT_MAX_PAIRS
    max_variety_vars: int = DEFAULT_MAX_VARS
    wall_clock: float | None = None

    def __post_init__(self):
        if self.max_pairs <= 0 or self.max_variety_vars <= 0:
            raise ValueError("budgets must be positive")
        if self.wall_clock is not None and self.wall_clock <= 0:
            raise ValueError("wall clock cap must be positive")


@dataclass(frozen=True)
class IsotopismWitness:
    F: Matrix
    G: Matrix
    H: Matrix

    def verify(self, A: EvolutionAlgebra, B: EvolutionAlgebra) -> bool:
        return verify_isotopism(A, B, self.F, self.G, self.H)

    def inverse(self) -> IsotopismWitness:
        """The witness of B ~ A obtained by inverting all three maps."""
        return IsotopismWitness(self.F.inverse(), self.G.inverse(), self.H.inverse())

    def as_lists(self) -> dict:
        return {k: [list(r) for r in M.data] for k, M in (("F", self.F), ("G", self.G), ("H", self.H))}


# --- ideals ---------------------------------------------------------------------


def isotopism_variables(n: int) -> tuple[str, ...]:
    """``f11..fnn, g11..gnn, h11..hnn`` in row-major order."""
    return tuple(f"{m}{i}{j}" for m in "fgh" for i in range(1, n + 1) for j in range(1, n + 1))


def isomorphism_variables(n: int) -> tuple[str, ...]:
    return tuple(f"f{i}{j}" for i in range(1, n + 1) for j in range(1, n + 1))


def matrix_shape(prefix: str, n: int) -> list[list[str]]:
    return [[f"{prefix}{i}{j}" for j in range(1, n + 1)] for i in range(1, n + 1)]


def build_isotopism_ideal(A: EvolutionAlgebra, B: EvolutionAlgebra) -> Ideal:
    """I_{A,B}: ``sum_k f_ik g_jk c'_kl`` (i != j) and ``sum_k f_ik g_ik c'_kl - sum_k h_kl c_ik``.

    Generators are listed in that order, indexed by (i, j, l) then (i, l);
    zero generators are kept, so there are always n²(n-1) + n² of them.
    Non-singularity is not part of the ideal.
    """
    _check_pair(A, B)
    n, fld = A.n, A.field
    names = isotopism_variables(n)
    V = lambda s: Polynomial.var(s, names, fld)  # noqa: E731
    zero = Polynomial.zero(names, fld)
    c, cp = A.rows, B.rows
    gens = []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i == j:
                continue
            for l in range(1, n + 1):
                g = zero
                for k in range(1, n + 1):
                    if cp[k - 1][l - 1]:
                        g = g + V(f"f{i}{k}") * V(f"g{j}{k}") * cp[k - 1][l - 1]
                gens.append(g)
    for i in range(1, n + 1):
        for l in range(1, n + 1):
            g = zero
            for k in range(1, n + 1):
                if cp[k - 1][l - 1]:
                    g = g + V(f"f{i}{k}") * V(f"g{i}{k}") * cp[k - 1][l - 1]
                if c[i - 1][k - 1]:
                    g = g - V(f"h{k}{l}") * c[i - 1][k - 1]
            gens.append(g)
    return Ideal(tuple(gens), names, fld)


def build_isomorphism_ideal(A: EvolutionAlgebra, B: EvolutionAlgebra) -> Ideal:
    """J_{A,B}: ``sum_k f_ik f_jk c'_kl`` (i != j) and ``sum_k f_ik² c'_kl - sum_k f_kl c_ik``."""
    _check_pair(A, B)
    n, fld = A.n, A.field
    names = isomorphism_variables(n)
    V = lambda s: Polynomial.var(s, names, fld)  # noqa: E731
    zero = Polynomial.zero(names, fld)
    c, cp = A.rows, B.rows
    gens = []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i == j:
                continue
            for l in range(1, n + 1):
                g = zero
                for k in range(1, n + 1):
                    if cp[k - 1][l - 1]:
                        g = g + V(f"f{i}{k}") * V(f"f{j}{k}") * cp[k - 1][l - 1]
                gens.append(g)
    for i in range(1, n + 1):
        for l in range(1, n + 1):
            g = zero
            for k in range(1, n + 1):
                if cp[k - 1][l - 1]:
                    g = g + V(f"f{i}{k}") ** 2 * cp[k - 1][l - 1]
                if c[i - 1][k - 1]:
                    g = g - V(f"f{k}{l}") * c[i - 1][k - 1]
            gens.append(g)
    return Ideal(tuple(gens), names, fld)


# --- pruned search kernel ----------------------------------------------------------


def _require_prime(A: EvolutionAlgebra) -> PrimeField:
    if not isinstance(A.field, PrimeField):
        raise FieldError("search needs a finite prime field")
    return A.field


class _Space:
    """Vectors of GF(p)^n as integer codes (lexicographic, code 0 = zero vector)."""

    def __init__(self, n: int, p: int):
        self.n, self.p = n, p
        self.N = p**n
        self.vecs = list(iproduct(range(p), repeat=n))
        self.index = {v: i for i, v in enumerate(self.vecs)}
        self.add = [[self.index[tuple((a + b) % p for a, b in zip(u, v))] for v in self.vecs] for u in self.vecs]
        self.mul = [[self.index[tuple(c * a % p for a in u)] for u in self.vecs] for c in range(p)]

    def extend_span(self, span: list[int], v: int) -> list[int]:
        out = set(span)
        add, mul = self.add, self.mul
        for c in range(1, self.p):
            cv = mul[c][v]
            out.update(add[s][cv] for s in span)
        return sorted(out)

    @staticmethod
    def mask(codes) -> int:
        m = 0
        for c in codes:
            m |= 1 << c
        return m


def _row_relations(C: Sequence[Sequence[int]], space: _Space):
    """For each row of C: ``None`` if independent of the earlier rows, else the
    coefficients ``[(k, y_k), ...]`` expressing it through earlier independent rows."""
    p = space.p
    basis_rows: list[int] = []  # indices of independent rows
    rels = []
    for i, row in enumerate(C):
        # solve row = sum y_k C[k] over k in basis_rows
        if basis_rows:
            A = Matrix([list(C[k]) for k in basis_rows], gf(p)).transpose()
            sol = solve_linear(A, Matrix([[x] for x in row], gf(p)))
        else:
            sol = None
        if not any(row):
            rels.append([])
        elif sol is not None and sol.consistent:
            y = [sol.particular.data[r][0] for r in range(len(basis_rows))]
            rels.append([(k, yk) for k, yk in zip(basis_rows, y) if yk])
        else:
            rels.append(None)
            basis_rows.append(i)
    return rels


class _Kernel:
    """Precomputed tables for searches into the target algebra ``B``."""

    def __init__(self, A: EvolutionAlgebra, B: EvolutionAlgebra):
        p = _require_prime(A).p
        n = A.n
        self.n, self.p = n, p
        sp = self.space = _Space(n, p)
        N = sp.N
        cp = B.rows
        prod = []
        for u in sp.vecs:
            row = []
            for v in sp.vecs:
                w = [0] * n
                for k in range(n):
                    t = u[k] * v[k] % p
                    if t:
                        ck = cp[k]
                        for l in range(n):
                            w[l] += t * ck[l]
                row.append(sp.index[tuple(x % p for x in w)])
            prod.append(row)
        self.prod = prod
        self.prodeq = [[0] * N for _ in range(N)]
        for a in range(N):
            pe = self.prodeq[a]
            for b in range(N):
                pe[prod[a][b]] |= 1 << b
        self.zero_mask = [self.prodeq[a][0] for a in range(N)]
        self.rels = _row_relations(A.rows, sp)
        self.C = A.rows
        self.full = (1 << N) - 1

    def combo(self, M: list[int], rel) -> int:
        sp = self.space
        out = 0
        for k, y in rel:
            out = sp.add[out][sp.mul[y][M[k]]]
        return out

    def m_mask(self, a: int, i: int, M: list[int], spanM: list[int]) -> int:
        """Allowed partners g for f_i = a, given the rows M_<i already fixed."""
        rel = self.rels[i]
        pe = self.prodeq[a]
        if rel is None:
            bad = 0
            for s in spanM:
                bad |= pe[s]
            return self.full & ~bad
        return pe[self.combo(M, rel)]

    def recover_H(self, M: list[int]) -> Matrix:
        """A non-singular H with C·H = M (rows), which exists whenever the row relations match."""
        sp, p = self.space, self.p
        fld = gf(p)
        C = Matrix(self.C, fld)
        Mm = Matrix([sp.vecs[m] for m in M], fld)
        sol = solve_linear(C, Mm)
        if not sol.consistent:
            raise AssertionError("row relations matched but C·H = M is inconsistent")
        if sol.unique:
            return sol.particular
        # complete the independent rows of C and of M to bases and map one onto the other
        ind = [i for i, r in enumerate(self.rels) if r is None]
        src = self._complete([sp.index[tuple(self.C[i])] for i in ind])
        dst = self._complete([M[i] for i in ind])
        S = Matrix([sp.vecs[v] for v in src], fld)
        return S.inverse() @ Matrix([sp.vecs[v] for v in dst], fld)

    def _complete(self, codes: list[int]) -> list[int]:
        sp, n = self.space, self.n
        span = [0]
        for v in codes:
            span = sp.extend_span(span, v)
        out = list(codes)
        for e in range(n):
            if len(out) == n:
                break
            v = sp.index[tuple(1 if k == e else 0 for k in range(n))]
            if v not in span:
                out.append(v)
                span = sp.extend_span(span, v)
        return out


class _Clock:
    def __init__(self, budget: SearchBudget):
        self.budget = budget
        self.nodes = 0
        self.start = time.perf_counter()

    def tick(self):
        self.nodes += 1
        if self.nodes > self.budget.max_pairs:
            raise BudgetExhausted(f"search exceeded {self.budget.max_pairs} candidates", {"nodes": self.nodes})
        if self.budget.wall_clock is not None and not self.nodes & 0xFFF:
            if time.perf_counter() - self.start > self.budget.wall_clock:
                raise BudgetExhausted(f"search exceeded {self.budget.wall_clock}s", {"nodes": self.nodes})


def _search_isotopism(K: _Kernel, clock: _Clock, first_rows: Sequence[int] | None = None, strong=False):
    """Lexicographically first (F, G) (rows as codes) admitting an H, or None."""
    n, sp = K.n, K.space
    zm, prod = K.zero_mask, K.prod
    full = K.full
    Fr: list[int] = []
    Gr: list[int] = []
    M: list[int] = []

    def rec(i: int, spanF: list[int], spanG: list[int], spanM: list[int]):
        if i == n:
            return True
        # f_i must kill every g_j (j < i) and avoid span(F)
        allowed = full & ~_Space.mask(spanF)
        for gj in Gr:
            allowed &= zm[gj]
        if i == 0 and first_rows is not None:
            allowed &= _Space.mask(first_rows)
        while allowed:
            low = allowed & -allowed
            a = low.bit_length() - 1
            allowed ^= low
            clock.tick()
            if strong:
                # g_i = f_i: also f_i f_j = 0 (j < i) is implied by the zero-mask filter above
                mi = prod[a][a]
                if not (K.m_mask(a, i, M, spanM) >> a) & 1:
                    continue
                Fr.append(a)
                Gr.append(a)
                M.append(mi)
                if rec(i + 1, sp.extend_span(spanF, a), spanF, _span_after(K, spanM, i, mi)):
                    return True
                Fr.pop()
                Gr.pop()
                M.pop()
                continue
            gal = full & ~_Space.mask(spanG)
            for fj in Fr:
                gal &= zm[fj]
            gal &= K.m_mask(a, i, M, spanM)
            if not gal:
                continue
            Fr.append(a)
            spanF2 = sp.extend_span(spanF, a)
            while gal:
                lowg = gal & -gal
                b = lowg.bit_length() - 1
                gal ^= lowg
                clock.tick()
                mi = prod[a][b]
                Gr.append(b)
                M.append(mi)
                if rec(i + 1, spanF2, sp.extend_span(spanG, b), _span_after(K, spanM, i, mi)):
                    return True
                Gr.pop()
                M.pop()
            Fr.pop()
        return False

    if rec(0, [0], [0], [0]):
        return list(Fr), list(Gr), list(M)
    return None


def _span_after(K: _Kernel, spanM: list[int], i: int, mi: int) -> list[int]:
    return K.space.extend_span(spanM, mi) if K.rels[i] is None else spanM


def _witness_from_rows(K: _Kernel, Fr, Gr, M) -> IsotopismWitness:
    fld = gf(K.p)
    vec = K.space.vecs
    F = Matrix([vec[a] for a in Fr], fld)
    G = Matrix([vec[b] for b in Gr], fld)
    return IsotopismWitness(F, G, K.recover_H(M))


def _shard_job(args):
    rowsA, rowsB, p, shard, strong, max_pairs = args
    fld = gf(p)
    A = EvolutionAlgebra.from_rows(rowsA, fld)
    B = EvolutionAlgebra.from_rows(rowsB, fld)
    K = _Kernel(A, B)
    clock = _Clock(SearchBudget(max_pairs=max_pairs))
    res = _search_isotopism(K, clock, shard, strong)
    return res, clock.nodes


def _run_search(A, B, budget, workers, strong, stats):
    K = _Kernel(A, B)
    if workers <= 1:
        clock = _Clock(budget)
        res = _search_isotopism(K, clock, None, strong)
        nodes = clock.nodes
    else:
        firsts = list(range(1, K.space.N))
        shards = [firsts[w::workers] for w in range(workers)]
        jobs = [(A.rows, B.rows, K.p, s, strong, budget.max_pairs) for s in shards if s]
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(_shard_job, jobs))
        nodes = sum(r[1] for r in results)
        found = [r[0] for r in results if r[0] is not None]
        # the lexicographically first witness overall is the smallest by its row codes
        res = min(found, key=lambda t: [x for pair in zip(t[0], t[1]) for x in pair]) if found else None
    if stats is not None:
        stats["nodes"] = nodes
    if res is None:
        return None
    return _witness_from_rows(K, *res)


def find_isotopism(
    A: EvolutionAlgebra,
    B: EvolutionAlgebra,
    budget: SearchBudget | None = None,
    workers: int = 1,
    stats: dict | None = None,
    screen: bool = True,
) -> IsotopismWitness | None:
    """A verified isotopism A → B, or ``None`` after an exhaustive search.

    Rows are tried in the order f1, g1, f2, g2, ... (each in lexicographic
    order); a candidate is dropped as soon as some ``f_i g_j`` (i != j) is
    non-zero or the partial products ``f_i g_i`` can no longer be matched
    by a non-singular H.  The identity triple is checked first.
    ``screen`` skips the search when the invariant signatures differ.
    """
    _check_pair(A, B)
    _require_prime(A)
    budget = budget or SearchBudget()
    if stats is not None:
        stats.setdefault("nodes", 0)
    if A == B:
        I = Matrix.identity(A.n, A.field)
        return IsotopismWitness(I, I, I)
    if screen and A.signature() != B.signature():
        if stats is not None:
            stats["screened"] = True
        return None
    w = _run_search(A, B, budget, workers, False, stats)
    if w is not None and not w.verify(A, B):
        raise AssertionError("search produced an invalid isotopism")
    return w


def find_strong_isotopism(
    A: EvolutionAlgebra,
    B: EvolutionAlgebra,
    budget: SearchBudget | None = None,
    workers: int = 1,
    stats: dict | None = None,
) -> tuple[Matrix, Matrix] | None:
    """``(F, H)`` with ``(F, F, H)`` an isotopism A → B, or ``None`` after an exhaustive search."""
    _check_pair(A, B)
    _require_prime(A)
    budget = budget or SearchBudget()
    if A == B:
        I = Matrix.identity(A.n, A.field)
        return I, I
    if A.signature() != B.signature():
        return None
    w = _run_search(A, B, budget, workers, True, stats)
    if w is None:
        return None
    if not verify_isotopism(A, B, w.F, w.F, w.H):
        raise AssertionError("search produced an invalid strong isotopism")
    return w.F, w.H


# --- isomorphisms -----------------------------------------------------------------


def _search_isomorphism(A: EvolutionAlgebra, B: EvolutionAlgebra, clock: _Clock):
    K = _Kernel(A, B)
    n, sp, zm, prod = K.n, K.space, K.zero_mask, K.prod
    C = A.rows
    full = K.full
    rows: list[int] = []
    # row i's square condition  f_i∘f_i C' = sum_k c_ik f_k  closes once every k with c_ik != 0 is placed
    closes = [max([i] + [k for k in range(n) if C[i][k]]) for i in range(n)]
    checks_at = [[i for i in range(n) if closes[i] == d] for d in range(n)]

    def square_ok(i):
        target = 0
        for k in range(n):
            if C[i][k]:
                target = sp.add[target][sp.mul[C[i][k]][rows[k]]]
        return prod[rows[i]][rows[i]] == target

    def rec(i, span):
        if i == n:
            return True
        allowed = full & ~_Space.mask(span)
        for r in rows:
            allowed &= zm[r]
        while allowed:
            low = allowed & -allowed
            a = low.bit_length() - 1
            allowed ^= low
            clock.tick()
            rows.append(a)
            if all(square_ok(j) for j in checks_at[i]) and rec(i + 1, sp.extend_span(span, a)):
                return True
            rows.pop()
        return False

    if rec(0, [0]):
        return Matrix([sp.vecs[a] for a in rows], A.field)
    return None


def find_isomorphism(
    A: EvolutionAlgebra,
    B: EvolutionAlgebra,
    budget: SearchBudget | None = None,
    method: str = "search",
    stats: dict | None = None,
) -> Matrix | None:
    """A verified isomorphism matrix A → B, or ``None`` after an exhaustive run.

    ``method``: ``"search"`` (row-by-row GL enumeration with pruning),
    ``"gl"`` (plain GL(n,p) enumeration) or ``"variety"`` (zeros of J_{A,B}).
    """
    _check_pair(A, B)
    _require_prime(A)
    budget = budget or SearchBudget()
    if A == B:
        return Matrix.identity(A.n, A.field)
    if A.signature() != B.signature():
        return None
    clock = _Clock(budget)
    if method == "search":
        F = _search_isomorphism(A, B, clock)
    elif method == "gl":
        F = None
        for M in enumerate_gl(A.n, A.field, budget=max(budget.max_pairs, gl_order(A.n, A.field.p))):
            clock.tick()
            if verify_isomorphism(A, B, M):
                F = M
                break
    elif method == "variety":
        ideal = build_isomorphism_ideal(A, B)
        shape = {"F": matrix_shape("f", A.n)}
        sols = variety_nonsingular_solutions(ideal, shape, A.field, limit=1, max_vars=budget.max_variety_vars)
        F = sols[0]["F"] if sols else None
    else:
        raise ValueError(f"unknown method {method!r}")
    if stats is not None:
        stats["nodes"] = clock.nodes
    if F is not None and not verify_isomorphism(A, B, F):
        raise AssertionError("search produced an invalid isomorphism")
    return F


# --- ideal route ------------------------------------------------------------------


def _rank_mod(rows: Sequence[Sequence[int]], p: int) -> int:
    rows = [list(r) for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((r for r in range(rank, len(rows)) if rows[r][c] % p), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][c], -1, p)
        for r in range(len(rows)):
            if r != rank and rows[r][c] % p:
                k = rows[r][c] * inv
                rows[r] = [(x - k * y) % p for x, y in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def _independence_checks(grid: list[list[str]], p: int) -> list[SideCondition]:
    """Each leading block of rows, and of columns, must be linearly independent."""
    n = len(grid)
    out = []
    for k in range(1, n + 1):
        rvars = tuple(v for row in grid[:k] for v in row)
        out.append(SideCondition(rvars, _make_indep(k, n, p, by_rows=True)))
        cvars = tuple(grid[i][j] for i in range(n) for j in range(k))
        out.append(SideCondition(cvars, _make_indep(k, n, p, by_rows=False)))
    return out


def _make_indep(k: int, n: int, p: int, by_rows: bool):
    def pred(vals: tuple) -> bool:
        if by_rows:
            rows = [vals[i * n : (i + 1) * n] for i in range(k)]
        else:
            rows = [[vals[i * k + j] for i in range(n)] for j in range(k)]
        return _rank_mod(rows, p) == k

    return pred


def default_search_order(shape: dict[str, list[list[str]]]) -> tuple[str, ...]:
    """Rows of F and G interleaved (f1, g1, f2, g2, ...), then H column by column."""
    order: list[str] = []
    n = len(next(iter(shape.values())))
    fg = [k for k in ("F", "G") if k in shape]
    for i in range(n):
        for k in fg:
            order.extend(shape[k][i])
    if "H" in shape:
        for j in range(n):
            order.extend(shape["H"][i][j] for i in range(n))
    for k, grid in shape.items():
        if k not in ("F", "G", "H"):
            order.extend(v for row in grid for v in row)
    return tuple(order)


def variety_nonsingular_solutions(
    ideal: Ideal,
    shape: dict[str, list[list[str]]],
    field: PrimeField | None = None,
    limit: int | None = None,
    variable_order: Sequence[str] | None = None,
    domains: dict[str, Sequence[int]] | None = None,
    max_vars: int = DEFAULT_MAX_VARS,
    max_nodes: int | None = None,
) -> list[dict[str, Matrix]]:
    """Zeros of ``ideal`` whose matrices (named by ``shape``) are all non-singular.

    ``shape`` maps a matrix name to its grid of variable names.  Non-singularity
    is applied as a side condition during the backtracking (leading row and
    column blocks must stay independent), which is a pure filter: the result is
    exactly the filtered variety.  Variables not in ``shape`` are free.
    """
    field = field or ideal.field
    if not isinstance(field, PrimeField):
        raise FieldError("variety enumeration needs a finite prime field")
    checks = []
    for grid in shape.values():
        checks.extend(_independence_checks(grid, field.p))
    order = tuple(variable_order) if variable_order is not None else default_search_order(shape)
    rest = [v for v in ideal.variables if v not in order]
    order = order + tuple(rest)
    kwargs = {} if max_nodes is None else {"max_nodes": max_nodes}
    out = []
    pos = {v: i for i, v in enumerate(ideal.variables)}
    for pt in iter_variety_points(ideal, field, order, domains, checks, max_vars, **kwargs):
        out.append({k: Matrix([[pt[pos[v]] for v in row] for row in grid], field) for k, grid in shape.items()})
        if limit is not None and len(out) >= limit:
            break
    return out


def isotopism_via_variety(
    A: EvolutionAlgebra, B: EvolutionAlgebra, budget: SearchBudget | None = None, limit: int | None = 1
) -> list[IsotopismWitness]:
    budget = budget or SearchBudget()
    ideal = build_isotopism_ideal(A, B)
    shape = {k: matrix_shape(k.lower(), A.n) for k in "FGH"}
    sols = variety_nonsingular_solutions(ideal, shape, A.field, limit=limit, max_vars=budget.max_variety_vars)
    return [IsotopismWitness(s["F"], s["G"], s["H"]) for s in sols]


# --- brute force ------------------------------------------------------------------


def brute_force_isotopism_oracle(A: EvolutionAlgebra, B: EvolutionAlgebra, max_triples: int = ORACLE_MAX_TRIPLES) -> bool:
    """Every triple of GL(n,p)^3, no pruning, no solving for H.

    For n <= 2 this is a literal triple loop over :func:`verify_isotopism`.
    For n = 3 the same exhaustive check is evaluated with numpy: all (F, G)
    pairs are tested at once and each surviving pair is compared against
    ``C·H`` for every H through a lookup table.
    """
    _check_pair(A, B)
    p = _require_prime(A).p
    n = A.n
    g = gl_order(n, p)
    if g**3 > max_triples and not (n == 3 and p == 2):
        raise BudgetExceeded(f"|GL({n},{p})|^3 = {g ** 3} exceeds the oracle budget")
    if n <= 2:
        gl = list(enumerate_gl(n, A.field))
        for F in gl:
            for G in gl:
                for H in gl:
                    if verify_isotopism(A, B, F, G, H):
                        return True
        return False
    return _vectorized_oracle(A, B)


def _vectorized_oracle(A: EvolutionAlgebra, B: EvolutionAlgebra) -> bool:
    p, n = A.field.p, A.n
    mats, _ = gl_table(n, p)
    C = np.array(A.rows, dtype=np.int64)
    Cp = np.array(B.rows, dtype=np.int64)
    # CH[h] = C @ H_h : the right-hand sides h(e_i e_i) for every H
    CH = np.einsum("ik,hkl->hil", C, mats) % p
    weights = p ** np.arange(n * n, dtype=np.int64)
    rhs = set((CH.reshape(len(mats), -1) * weights).sum(axis=1).tolist())
    for F in mats:
        # W[g, i, j, :] = (f_i ∘ g_j) C'
        W = np.einsum("ik,gjk,kl->gijl", F, mats, Cp) % p
        off = np.ones((n, n), dtype=bool)
        np.fill_diagonal(off, False)
        ok = ~(W[:, off, :].any(axis=(1, 2)))
        if not ok.any():
            continue
        diag = W[ok][:, np.arange(n), np.arange(n), :]
        codes = (diag.reshape(diag.shape[0], -1) * weights).sum(axis=1)
        if any(c in rhs for c in codes.tolist()):
            return True
    return False


# --- isomorphism orbits (numpy) -------------------------------------------------------


def algebra_code(rows: Sequence[Sequence[int]], p: int) -> int:
    """Row-major base-p code of a structure matrix (first entry most significant)."""
    code = 0
    for r in rows:
        for x in r:
            code = code * p + int(x)
    return code


def code_to_rows(code: int, n: int, p: int) -> tuple[tuple[int, ...], ...]:
    digits = []
    for _ in range(n * n):
        digits.append(code % p)
        code //= p
    digits.reverse()
    return tuple(tuple(digits[i * n : (i + 1) * n]) for i in range(n))


def isomorphism_images(A: EvolutionAlgebra) -> tuple[np.ndarray, np.ndarray]:
    """``(indices, codes)``: every F in GL(n,p) (as an index into ``gl_table``) that is
    an isomorphism from A onto some algebra, and the code of that algebra.

    For F with P = F⁻¹ the transported algebra is ``(P∘P)·C·F``; it exists (the
    new basis is natural) iff ``(P_k∘P_l)·C = 0`` for k != l.
    """
    p = _require_prime(A).p
    n = A.n
    mats, invs = gl_table(n, p)
    C = np.array(A.rows, dtype=np.int64)
    ok = np.ones(len(mats), dtype=bool)
    for k in range(n):
        for l in range(k + 1, n):
            w = invs[:, k, :] * invs[:, l, :]
            ok &= ~((w @ C) % p).any(axis=1)
    idx = np.nonzero(ok)[0]
    P = invs[idx]
    Cn = np.einsum("hik,kl,hlm->him", P * P, C, mats[idx]) % p
    weights = p ** np.arange(n * n - 1, -1, -1, dtype=np.int64)
    codes = (Cn.reshape(len(idx), -1) * weights).sum(axis=1)
    return idx, codes


def isomorphism_orbit(A: EvolutionAlgebra) -> dict[int, int]:
    """``{code of A': index into gl_table}`` over every algebra isomorphic to A.

    The stored index is the first F (lexicographic) reaching that code.
    """
    idx, codes = isomorphism_images(A)
    out: dict[int, int] = {}
    for c, h in zip(codes.tolist(), idx.tolist()):
        out.setdefault(c, h)
    return out


def gl_matrix(index: int, n: int, p: int) -> Matrix:
    mats, _ = gl_table(n, p)
    return Matrix(mats[index].tolist(), gf(p))


__all__ = [
    "AlgebraError",
    "BudgetExhausted",
    "IsotopismWitness",
    "SearchBudget",
    "algebra_code",
    "brute_force_isotopism_oracle",
    "build_isomorphism_ideal",
    "build_isotopism_ideal",
    "code_to_rows",
    "default_search_order",
    "find_isomorphism",
    "find_isotopism",
    "find_strong_isotopism",
    "gl_matrix",
    "isomorphism_images",
    "isomorphism_orbit",
    "isomorphism_variables",
    "isotopism_variables",
    "isotopism_via_variety",
    "matrix_shape",
    "variety_nonsingular_solutions",
]
