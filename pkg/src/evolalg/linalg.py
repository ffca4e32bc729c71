"""Dense exact linear algebra over a :class:`~evolalg.field.Field`.

Matrices are immutable and store raw canonical values row-major.  Besides the
generic routines, :func:`gl_table` builds a numpy table of all of GL(n, p) for
the vectorized brute-force kernels (small n and p only).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

from .field import Field, FieldError, PrimeField, RawValue, Scalar


class BudgetExceeded(RuntimeError):
    """An enumeration or search would exceed its configured budget."""


class Matrix:
    __slots__ = ("field", "rows", "cols", "_data", "_hash")

    def __init__(self, data: Sequence[Sequence], field: Field):
        rows = tuple(tuple(field.canon(x) for x in row) for row in data)
        if not rows or not rows[0]:
            raise ValueError("matrix must have at least one row and one column")
        if any(len(r) != len(rows[0]) for r in rows):
            raise ValueError("ragged matrix")
        self.field = field
        self._data = rows
        self.rows = len(rows)
        self.cols = len(rows[0])
        self._hash = None

    @classmethod
    def identity(cls, n: int, field: Field) -> Matrix:
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)], field)

    @classmethod
    def zeros(cls, rows: int, cols: int, field: Field) -> Matrix:
        return cls([[0] * cols for _ in range(rows)], field)

    @classmethod
    def diag(cls, values: Sequence, field: Field) -> Matrix:
        n = len(values)
        return cls([[values[i] if i == j else 0 for j in range(n)] for i in range(n)], field)

    @property
    def data(self) -> tuple[tuple[RawValue, ...], ...]:
        return self._data

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, ij) -> Scalar:
        i, j = ij
        return Scalar(self._data[i][j], self.field)

    def row(self, i: int) -> tuple[RawValue, ...]:
        return self._data[i]

    def column(self, j: int) -> tuple[RawValue, ...]:
        return tuple(r[j] for r in self._data)

    def tolist(self) -> list[list[RawValue]]:
        return [list(r) for r in self._data]

    def transpose(self) -> Matrix:
        return Matrix(list(zip(*self._data)), self.field)

    T = property(transpose)

    def _check(self, other: Matrix) -> None:
        if not isinstance(other, Matrix):
            raise TypeError(f"expected Matrix, got {type(other).__name__}")
        if other.field != self.field:
            raise FieldError(f"mixed fields: {self.field} and {other.field}")

    def __add__(self, other: Matrix) -> Matrix:
        self._check(other)
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        f = self.field
        return Matrix([[f.add(a, b) for a, b in zip(r, s)] for r, s in zip(self._data, other._data)], f)

    def __sub__(self, other: Matrix) -> Matrix:
        self._check(other)
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        f = self.field
        return Matrix([[f.sub(a, b) for a, b in zip(r, s)] for r, s in zip(self._data, other._data)], f)

    def __matmul__(self, other: Matrix) -> Matrix:
        self._check(other)
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        f = self.field
        cols = list(zip(*other._data))
        out = []
        for r in self._data:
            row = []
            for c in cols:
                acc = f.zero
                for a, b in zip(r, c):
                    if a and b:
                        acc = f.add(acc, f.mul(a, b))
                row.append(acc)
            out.append(row)
        return Matrix(out, f)

    def scale(self, c) -> Matrix:
        f = self.field
        c = f.canon(c)
        return Matrix([[f.mul(c, a) for a in r] for r in self._data], f)

    def rank(self) -> int:
        return rank(self)

    def inverse(self) -> Matrix | None:
        return inverse(self)

    def is_nonsingular(self) -> bool:
        return self.is_square and rank(self) == self.rows

    def __eq__(self, other):
        return isinstance(other, Matrix) and self.field == other.field and self._data == other._data

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._data, self.field))
        return self._hash

    def __repr__(self):
        body = "; ".join(" ".join(self.field.format(x) for x in r) for r in self._data)
        return f"Matrix([{body}] over {self.field!r})"


def _rref(rows: list[list], field: Field) -> tuple[list[list], list[int]]:
    """Reduced row echelon form in place; returns (rows, pivot columns)."""
    m = len(rows)
    n = len(rows[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        piv = next((i for i in range(r, m) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = field.inv(rows[r][c])
        rows[r] = [field.mul(inv, x) for x in rows[r]]
        for i in range(m):
            if i != r and rows[i][c] != 0:
                k = rows[i][c]
                rows[i] = [field.sub(a, field.mul(k, b)) for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return rows, pivots


def rank_raw(rows: Sequence[Sequence], field: Field) -> int:
    if not rows:
        return 0
    return len(_rref([list(r) for r in rows], field)[1])


def rank(M: Matrix) -> int:
    """Rank by exact Gaussian elimination."""
    return rank_raw(M.data, M.field)


def inverse(M: Matrix) -> Matrix | None:
    """Exact inverse, or ``None`` when ``M`` is singular."""
    if not M.is_square:
        raise ValueError("inverse of a non-square matrix")
    n, f = M.rows, M.field
    aug = [list(r) + [f.one if i == j else f.zero for j in range(n)] for i, r in enumerate(M.data)]
    red, pivots = _rref(aug, f)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        return None
    return Matrix([r[n:] for r in red], f)


def determinant(M: Matrix) -> Scalar:
    if not M.is_square:
        raise ValueError("determinant of a non-square matrix")
    f = M.field
    rows = [list(r) for r in M.data]
    n = len(rows)
    det = f.one
    for c in range(n):
        piv = next((i for i in range(c, n) if rows[i][c] != 0), None)
        if piv is None:
            return Scalar(f.zero, f)
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
            det = f.neg(det)
        det = f.mul(det, rows[c][c])
        inv = f.inv(rows[c][c])
        for i in range(c + 1, n):
            if rows[i][c] != 0:
                k = f.mul(rows[i][c], inv)
                rows[i] = [f.sub(a, f.mul(k, b)) for a, b in zip(rows[i], rows[c])]
    return Scalar(det, f)


@dataclass(frozen=True)
class LinearSolution:
    """All X with A·X = B: ``particular + (any matrix whose columns lie in span(kernel))``.

    ``kernel`` is a basis of the right null space of A (column vectors as tuples).
    When the system is inconsistent ``particular`` is ``None``.
    """

    field: Field
    particular: Matrix | None
    kernel: tuple[tuple[RawValue, ...], ...]
    cols: int

    @property
    def consistent(self) -> bool:
        return self.particular is not None

    @property
    def unique(self) -> bool:
        return self.consistent and not self.kernel

    @property
    def dimension(self) -> int:
        """Dimension of the solution space (affine), -1 when inconsistent."""
        return len(self.kernel) * self.cols if self.consistent else -1

    def count(self) -> int:
        if not self.consistent:
            return 0
        if not self.field.is_finite:
            raise FieldError("infinite solution set")
        return self.field.order ** self.dimension

    def column_choices(self, j: int) -> Iterator[tuple[RawValue, ...]]:
        """Every admissible value of column ``j`` of X (finite fields only)."""
        f = self.field
        base = self.particular.column(j)
        for coeffs in itertools.product(range(f.order), repeat=len(self.kernel)):
            col = list(base)
            for c, v in zip(coeffs, self.kernel):
                if c:
                    col = [f.add(a, f.mul(c, b)) for a, b in zip(col, v)]
            yield tuple(col)

    def members(self) -> Iterator[Matrix]:
        if not self.consistent:
            return
        columns = [list(self.column_choices(j)) for j in range(self.cols)]
        for choice in itertools.product(*columns):
            yield Matrix(list(zip(*choice)), self.field)


def solve_linear(A: Matrix, B: Matrix) -> LinearSolution:
    """Describe every X with A·X = B exactly; inconsistency is a value, not an error."""
    if A.field != B.field:
        raise FieldError("mixed fields")
    if A.rows != B.rows:
        raise ValueError("A and B must have the same number of rows")
    f = A.field
    n, k = A.cols, B.cols
    aug = [list(a) + list(b) for a, b in zip(A.data, B.data)]
    red, pivots = _rref(aug, f)
    if any(p >= n for p in pivots):
        return LinearSolution(f, None, (), k)
    X = [[f.zero] * k for _ in range(n)]
    for r, c in enumerate(pivots):
        X[c] = list(red[r][n:])
    free = [c for c in range(n) if c not in pivots]
    kernel = []
    for fc in free:
        v = [f.zero] * n
        v[fc] = f.one
        for r, c in enumerate(pivots):
            v[c] = f.neg(red[r][fc])
        kernel.append(tuple(v))
    return LinearSolution(f, Matrix(X, f), tuple(kernel), k)


def gl_order(n: int, p: int) -> int:
    out = 1
    for k in range(n):
        out *= p**n - p**k
    return out


DEFAULT_GL_BUDGET = 5_000_000


def _vectors(n: int, p: int) -> list[tuple[int, ...]]:
    return list(itertools.product(range(p), repeat=n))


def gl_rows(n: int, p: int, budget: int = DEFAULT_GL_BUDGET) -> Iterator[tuple[tuple[int, ...], ...]]:
    """All of GL(n, p) as tuples of rows, lexicographic in the rows.

    Built row by row: each new row is drawn from the vectors outside the span of
    the rows already chosen, so the work is proportional to |GL(n, p)|.
    """
    if gl_order(n, p) > budget:
        raise BudgetExceeded(f"|GL({n},{p})| = {gl_order(n, p)} exceeds budget {budget}")
    vecs = _vectors(n, p)

    def extend(prefix: list, span: set):
        if len(prefix) == n:
            yield tuple(prefix)
            return
        for v in vecs:
            if v in span:
                continue
            new_span = {tuple((s[i] + c * v[i]) % p for i in range(n)) for s in span for c in range(p)}
            prefix.append(v)
            yield from extend(prefix, new_span)
            prefix.pop()

    yield from extend([], {(0,) * n})


def enumerate_gl(n: int, field: PrimeField, budget: int = DEFAULT_GL_BUDGET) -> Iterator[Matrix]:
    """Yield every non-singular n×n matrix over GF(p) exactly once."""
    if not isinstance(field, PrimeField):
        raise FieldError("GL enumeration needs a finite prime field")
    for rows in gl_rows(n, field.p, budget):
        yield Matrix(rows, field)


# --- numpy kernels -----------------------------------------------------------


def det_mod(mats: np.ndarray, p: int) -> np.ndarray:
    """Determinants mod p of a stack of 1×1, 2×2 or 3×3 integer matrices."""
    n = mats.shape[-1]
    m = mats.astype(np.int64)
    if n == 1:
        d = m[..., 0, 0]
    elif n == 2:
        d = m[..., 0, 0] * m[..., 1, 1] - m[..., 0, 1] * m[..., 1, 0]
    elif n == 3:
        d = (
            m[..., 0, 0] * (m[..., 1, 1] * m[..., 2, 2] - m[..., 1, 2] * m[..., 2, 1])
            - m[..., 0, 1] * (m[..., 1, 0] * m[..., 2, 2] - m[..., 1, 2] * m[..., 2, 0])
            + m[..., 0, 2] * (m[..., 1, 0] * m[..., 2, 1] - m[..., 1, 1] * m[..., 2, 0])
        )
    else:
        raise ValueError("det_mod supports n <= 3")
    return d % p


def inv_mod(mats: np.ndarray, p: int) -> np.ndarray:
    """Inverses mod p of a stack of non-singular 1×1, 2×2 or 3×3 matrices (adjugate formula)."""
    n = mats.shape[-1]
    m = mats.astype(np.int64)
    det = det_mod(m, p)
    if np.any(det == 0):
        raise ValueError("singular matrix in inv_mod")
    inv_table = np.array([0] + [pow(x, -1, p) for x in range(1, p)], dtype=np.int64)
    dinv = inv_table[det]
    if n == 1:
        adj = np.ones_like(m)
    elif n == 2:
        adj = np.empty_like(m)
        adj[..., 0, 0] = m[..., 1, 1]
        adj[..., 1, 1] = m[..., 0, 0]
        adj[..., 0, 1] = -m[..., 0, 1]
        adj[..., 1, 0] = -m[..., 1, 0]
    elif n == 3:
        adj = np.empty_like(m)
        for i in range(3):
            for j in range(3):
                r = [k for k in range(3) if k != j]
                c = [k for k in range(3) if k != i]
                minor = m[..., r[0], c[0]] * m[..., r[1], c[1]] - m[..., r[0], c[1]] * m[..., r[1], c[0]]
                adj[..., i, j] = minor if (i + j) % 2 == 0 else -minor
    else:
        raise ValueError("inv_mod supports n <= 3")
    return (adj * dinv[..., None, None]) % p


@lru_cache(maxsize=4)
def gl_table(n: int, p: int, budget: int = DEFAULT_GL_BUDGET) -> tuple[np.ndarray, np.ndarray]:
    """``(mats, invs)``: all of GL(n, p) in lexicographic row order, with inverses.

    Dense filter over all p^(n·n) matrices; only meant for the tiny n, p of the
    brute-force kernels.
    """
    if p ** (n * n) > budget:
        raise BudgetExceeded(f"p^(n^2) = {p ** (n * n)} exceeds budget {budget}")
    codes = np.arange(p ** (n * n), dtype=np.int64)
    powers = p ** np.arange(n * n - 1, -1, -1, dtype=np.int64)
    vals = ((codes[:, None] // powers) % p).reshape(-1, n, n)
    mats = vals[det_mod(vals, p) != 0]
    invs = inv_mod(mats, p)
    mats.setflags(write=False)
    invs.setflags(write=False)
    return mats, invs
