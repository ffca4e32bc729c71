"""Evolution algebras: structure matrices, products, invariants, named families and a text DSL.

An evolution algebra of dimension n is fixed by its n×n structure matrix C:
``e_i e_i = sum_j C[i][j] e_j`` and ``e_i e_j = 0`` for ``i != j``.

Linear maps are matrices whose row i is the image of e_i, so the composite
"first F, then G" has matrix ``F @ G``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .field import Field, FieldError, PrimeField, RawValue, parse_field
from .linalg import Matrix, rank_raw

Vector = tuple


class AlgebraError(ValueError):
    """Invalid algebra data, family parameters or mismatched operands."""


class AlgebraSyntaxError(AlgebraError):
    """DSL syntax error; ``position`` is the 0-based character offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


@dataclass(frozen=True)
class EvolutionAlgebra:
    C: Matrix

    def __post_init__(self):
        if not self.C.is_square:
            raise AlgebraError("structure matrix must be square")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], field: Field) -> EvolutionAlgebra:
        return cls(Matrix(rows, field))

    @classmethod
    def trivial(cls, n: int, field: Field) -> EvolutionAlgebra:
        return cls(Matrix.zeros(n, n, field))

    @property
    def n(self) -> int:
        return self.C.rows

    @property
    def field(self) -> Field:
        return self.C.field

    @property
    def rows(self) -> tuple[tuple[RawValue, ...], ...]:
        return self.C.data

    def square(self, i: int) -> Vector:
        """``e_i e_i`` (0-based ``i``)."""
        return self.C.row(i)

    def product(self, u: Sequence, v: Sequence) -> Vector:
        """``uv = sum_i u_i v_i (e_i e_i)``."""
        n, f = self.n, self.field
        if len(u) != n or len(v) != n:
            raise AlgebraError(f"vectors must have length {n}")
        u = [f.canon(x) for x in u]
        v = [f.canon(x) for x in v]
        out = [f.zero] * n
        for i, row in enumerate(self.C.data):
            w = f.mul(u[i], v[i])
            if w:
                out = [f.add(a, f.mul(w, c)) for a, c in zip(out, row)]
        return tuple(out)

    def derived_dim(self) -> int:
        """Dimension of A² = span of the rows of C."""
        return rank_raw(self.C.data, self.field)

    def annihilator_codim(self) -> int:
        """Codimension of Ann(A) = span{e_i : e_i e_i = 0}, i.e. the number of nonzero rows."""
        return sum(1 for r in self.C.data if any(r))

    def annihilator_basis(self) -> tuple[int, ...]:
        """0-based indices i with e_i in Ann(A)."""
        return tuple(i for i, r in enumerate(self.C.data) if not any(r))

    def signature(self) -> tuple[int, int]:
        return self.annihilator_codim(), self.derived_dim()

    def transport(self, F: Matrix) -> EvolutionAlgebra | None:
        """The algebra on the basis ``f(e_i)`` -- i.e. the A' making ``F`` an isomorphism A → A'.

        Returns ``None`` when the new basis is not natural (some ``f(e_i)f(e_j) != 0``).
        """
        P = F.inverse()
        if P is None:
            raise AlgebraError("transport needs a non-singular matrix")
        f = self.field
        n = self.n
        Pd = P.data
        for k in range(n):
            for l in range(k + 1, n):
                w = [f.mul(a, b) for a, b in zip(Pd[k], Pd[l])]
                if any((Matrix([w], f) @ self.C).data[0]):
                    return None
        sq = Matrix([[f.mul(a, a) for a in r] for r in Pd], f)
        return EvolutionAlgebra(sq @ self.C @ F)

    def to_text(self) -> str:
        return format_algebra(self)

    def __str__(self):
        return format_algebra(self)


def _check_pair(A: EvolutionAlgebra, B: EvolutionAlgebra, mats: Sequence[Matrix] = ()):
    if A.n != B.n:
        raise AlgebraError(f"dimension mismatch: {A.n} vs {B.n}")
    if A.field != B.field:
        raise AlgebraError(f"field mismatch: {A.field} vs {B.field}")
    for M in mats:
        if M.shape != (A.n, A.n):
            raise AlgebraError(f"expected {A.n}x{A.n} matrices, got {M.shape}")
        if M.field != A.field:
            raise AlgebraError("matrix over a different field")


def isotopism_defects(A: EvolutionAlgebra, B: EvolutionAlgebra, F: Matrix, G: Matrix, H: Matrix):
    """Basis pairs (i, j) where ``f(e_i) g(e_j) != h(e_i e_j)`` (0-based)."""
    _check_pair(A, B, (F, G, H))
    f = A.field
    n = A.n
    Cp = B.C
    CH = (A.C @ H).data
    bad = []
    for i in range(n):
        fi = F.row(i)
        for j in range(n):
            gj = G.row(j)
            w = Matrix([[f.mul(a, b) for a, b in zip(fi, gj)]], f)
            lhs = (w @ Cp).data[0]
            rhs = CH[i] if i == j else (f.zero,) * n
            if lhs != rhs:
                bad.append((i, j))
    return bad


def verify_isotopism(A: EvolutionAlgebra, B: EvolutionAlgebra, F: Matrix, G: Matrix, H: Matrix) -> bool:
    """True iff (F, G, H) are non-singular and ``f(u)g(v) = h(uv)`` on all basis pairs."""
    _check_pair(A, B, (F, G, H))
    if not (F.is_nonsingular() and G.is_nonsingular() and H.is_nonsingular()):
        return False
    return not isotopism_defects(A, B, F, G, H)


def verify_strong_isotopism(A: EvolutionAlgebra, B: EvolutionAlgebra, F: Matrix, H: Matrix) -> bool:
    return verify_isotopism(A, B, F, F, H)


def verify_isomorphism(A: EvolutionAlgebra, B: EvolutionAlgebra, F: Matrix) -> bool:
    return verify_isotopism(A, B, F, F, F)


# --- named families ------------------------------------------------------------

REPRESENTATIVE_TUPLES: dict[int, tuple[tuple[int, int, int], ...]] = {
    1: ((0, 0, 0), (0, 0, 0), (0, 0, 0)),
    2: ((1, 0, 0), (0, 0, 0), (0, 0, 0)),
    3: ((1, 0, 0), (1, 0, 0), (0, 0, 0)),
    4: ((1, 0, 0), (0, 1, 0), (0, 0, 0)),
    5: ((1, 0, 0), (1, 0, 0), (1, 0, 0)),
    6: ((1, 0, 0), (0, 1, 0), (0, 0, 1)),
    7: ((1, 0, 0), (0, 1, 0), (1, 1, 0)),
    8: ((1, 0, 0), (0, 1, 0), (1, 0, 0)),
}

REPRESENTATIVE_LABELS: dict[int, str] = {
    1: "(0,0,0)",
    2: "(e1,0,0)",
    3: "(e1,e1,0)",
    4: "(e1,e2,0)",
    5: "(e1,e1,e1)",
    6: "(e1,e2,e3)",
    7: "(e1,e2,e1+e2)",
    8: "(e1,e2,e1)",
}

FAMILY_ARITY = {"A": 2, "B": 3, "C": 5, "D": 5, "Rep": 1, "Trivial": 1}


@dataclass(frozen=True)
class FamilySpec:
    """A named family member: ``A(α,β)``, ``B(α,β,γ)``, ``C(α,β,γ,δ,ε)``, ``D(α,β,γ,δ,ε)``,
    ``Rep(k)`` (k-th class representative, 1..8) or ``Trivial(n)``."""

    family: str
    params: tuple

    def __post_init__(self):
        if self.family not in FAMILY_ARITY:
            raise AlgebraError(f"unknown family {self.family!r}")
        if len(self.params) != FAMILY_ARITY[self.family]:
            raise AlgebraError(f"family {self.family} takes {FAMILY_ARITY[self.family]} parameters")

    def label(self) -> str:
        return f"{self.family}({','.join(str(p) for p in self.params)})"


def make_family(spec: FamilySpec, field: Field) -> EvolutionAlgebra:
    """The algebra of a family member, after checking the parameter domain in ``field``."""
    fam = spec.family
    if fam == "Rep":
        k = int(spec.params[0])
        if k not in REPRESENTATIVE_TUPLES:
            raise AlgebraError(f"representative index {k} not in 1..8")
        return EvolutionAlgebra.from_rows(REPRESENTATIVE_TUPLES[k], field)
    if fam == "Trivial":
        n = int(spec.params[0])
        if n < 1:
            raise AlgebraError("dimension must be positive")
        return EvolutionAlgebra.trivial(n, field)
    p = [field.parse(x) if isinstance(x, str) else field.canon(x) for x in spec.params]
    z = field.zero
    if fam == "A":
        a, b = p
        if a == z or b == z:
            raise AlgebraError("A(α,β) needs α ≠ 0 and β ≠ 0")
        rows = ((1, 0, 0), (a, 0, 0), (b, 0, 0))
    elif fam == "B":
        a, b, c = p
        if a == z and b == z and c == z:
            raise AlgebraError("B(α,β,γ) needs (α,β,γ) ≠ (0,0,0)")
        rows = ((1, 0, 0), (0, 1, 0), (a, b, c))
    else:
        a, b, c, d, e = p
        if (a, b) not in ((0, 1), (1, 0), (1, 1)):
            raise AlgebraError(f"{fam}(α,β,…) needs (α,β) in {{0,1}}² without (0,0)")
        if c == z and d == z and e == z:
            raise AlgebraError(f"{fam}(…,γ,δ,ε) needs (γ,δ,ε) ≠ (0,0,0)")
        if fam == "C":
            rows = ((a, b, 0), (c, d, e), (0, 0, 0))
        else:
            rows = ((a, b, 0), (0, 0, 0), (c, d, e))
    return EvolutionAlgebra.from_rows(rows, field)


def family(name: str, *params, field: Field) -> EvolutionAlgebra:
    return make_family(FamilySpec(name, tuple(params)), field)


def representative(k: int, field: Field) -> EvolutionAlgebra:
    return make_family(FamilySpec("Rep", (k,)), field)


_FAMILY_RE = re.compile(r"^\s*([A-Za-z]+)\s*(?:\(\s*([^)]*)\)|(\d+))?\s*$")


def parse_family(text: str, field: Field) -> EvolutionAlgebra:
    """Parse a builtin name: ``B(1,1,0)``, ``C(1,1,2,0,1)``, ``A(2,3)``, ``rep7``, ``trivial3``.

    Compact forms without separators are accepted for single-digit parameters
    (``B110``, ``C11201``).
    """
    m = _FAMILY_RE.match(text)
    if not m:
        raise AlgebraError(f"cannot parse family name {text!r}")
    name, inner, digits = m.group(1), m.group(2), m.group(3)
    key = {"a": "A", "b": "B", "c": "C", "d": "D", "rep": "Rep", "trivial": "Trivial"}.get(name.lower())
    if key is None:
        raise AlgebraError(f"unknown family {name!r}")
    if inner is not None:
        params = tuple(s.strip() for s in inner.split(",")) if inner.strip() else ()
    elif digits is not None:
        params = (digits,) if key in ("Rep", "Trivial") else tuple(digits)
    else:
        params = ()
    if key in ("Rep", "Trivial"):
        params = tuple(int(x) for x in params)
    return make_family(FamilySpec(key, params), field)


# --- DSL ---------------------------------------------------------------------------

_WS = re.compile(r"\s*")
_INT = re.compile(r"-?\d+")


class _Lexer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip(self):
        self.pos = _WS.match(self.text, self.pos).end()

    def at_end(self) -> bool:
        self.skip()
        return self.pos >= len(self.text)

    def peek(self, s: str) -> bool:
        self.skip()
        return self.text.startswith(s, self.pos)

    def expect(self, s: str):
        self.skip()
        if not self.text.startswith(s, self.pos):
            found = self.text[self.pos : self.pos + 8] or "end of input"
            raise AlgebraSyntaxError(f"expected {s!r}, found {found!r}", self.pos)
        self.pos += len(s)

    def integer(self, what: str = "integer", signed: bool = False) -> tuple[int, int]:
        self.skip()
        m = _INT.match(self.text, self.pos)
        if not m or (not signed and m.group(0).startswith("-")):
            found = self.text[self.pos : self.pos + 8] or "end of input"
            raise AlgebraSyntaxError(f"expected {what}, found {found!r}", self.pos)
        start = self.pos
        self.pos = m.end()
        return int(m.group(0)), start


def parse_algebra(text: str) -> EvolutionAlgebra:
    """Parse ``dim N over gf(p)|q; e_i*e_i = <combination>; ...``.

    Unlisted squares are zero; ``e_i*e_j`` with ``i != j`` may only be set to ``0``.
    """
    lx = _Lexer(text)
    lx.expect("dim")
    n, npos = lx.integer("dimension")
    if n < 1:
        raise AlgebraSyntaxError("dimension must be positive", npos)
    lx.expect("over")
    lx.skip()
    fpos = lx.pos
    m = re.compile(r"gf\s*\(\s*\d+\s*\)|q\b", re.IGNORECASE).match(text, fpos)
    if not m:
        raise AlgebraSyntaxError("expected field 'gf(p)' or 'q'", fpos)
    try:
        field = parse_field(m.group(0))
    except FieldError as exc:
        raise AlgebraSyntaxError(str(exc), fpos) from None
    lx.pos = m.end()
    rows = [[field.zero] * n for _ in range(n)]
    seen: set[int] = set()

    def basis_index() -> tuple[int, int]:
        lx.expect("e")
        i, ipos = lx.integer("basis index")
        if not 1 <= i <= n:
            raise AlgebraSyntaxError(f"index e{i} out of range 1..{n}", ipos)
        return i, ipos

    while True:
        if lx.at_end():
            break
        lx.expect(";")
        if lx.at_end():
            break
        eq_pos = lx.pos
        i, _ = basis_index()
        lx.expect("*")
        j, _ = basis_index()
        lx.expect("=")
        combo = [field.zero] * n
        lx.skip()
        if lx.peek("0") and not re.match(r"0\s*(?:/|\*|e)", text[lx.pos :]):
            lx.pos += 1
        else:
            while True:
                lx.skip()
                cpos = lx.pos
                coef = field.one
                if not lx.peek("e"):
                    if not _INT.match(text, lx.pos):
                        found = text[lx.pos : lx.pos + 8] or "end of input"
                        raise AlgebraSyntaxError(f"expected coefficient or basis vector, found {found!r}", cpos)
                    num, _ = lx.integer("coefficient", signed=True)
                    den = 1
                    if lx.peek("/"):
                        lx.expect("/")
                        den, dpos = lx.integer("denominator")
                        if den == 0:
                            raise AlgebraSyntaxError("zero denominator", dpos)
                    try:
                        coef = field.canon(Fraction(num, den))
                    except FieldError as exc:
                        raise AlgebraSyntaxError(str(exc), cpos) from None
                    if lx.peek("*"):
                        lx.expect("*")
                k, _ = basis_index()
                combo[k - 1] = field.add(combo[k - 1], coef)
                if lx.peek("+"):
                    lx.expect("+")
                    continue
                break
        if i != j:
            if any(combo):
                raise AlgebraSyntaxError(f"e{i}*e{j} must be 0 in an evolution algebra", eq_pos)
            continue
        if i in seen:
            raise AlgebraSyntaxError(f"e{i}*e{i} assigned twice", eq_pos)
        seen.add(i)
        rows[i - 1] = combo
    return EvolutionAlgebra.from_rows(rows, field)


def _field_text(field: Field) -> str:
    return f"gf({field.p})" if isinstance(field, PrimeField) else "q"


def format_algebra(A: EvolutionAlgebra) -> str:
    """Canonical DSL text; ``parse_algebra(format_algebra(A)) == A``."""
    f = A.field
    parts = [f"dim {A.n} over {_field_text(f)}"]
    for i, row in enumerate(A.rows, start=1):
        if not any(row):
            continue
        terms = []
        for k, c in enumerate(row, start=1):
            if c == 0:
                continue
            cs = f.format(c)
            terms.append(f"e{k}" if cs == "1" else f"{cs} e{k}")
        parts.append(f"e{i}*e{i} = " + " + ".join(terms))
    return "; ".join(parts)


__all__ = [
    "AlgebraError",
    "AlgebraSyntaxError",
    "EvolutionAlgebra",
    "FamilySpec",
    "REPRESENTATIVE_LABELS",
    "REPRESENTATIVE_TUPLES",
    "family",
    "format_algebra",
    "isotopism_defects",
    "make_family",
    "parse_algebra",
    "parse_family",
    "representative",
    "verify_isomorphism",
    "verify_isotopism",
    "verify_strong_isotopism",
]
