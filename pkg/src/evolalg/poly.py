"""Sparse multivariate polynomials over an exact field.

A polynomial lives in a ring given by an ordered tuple of variable names; a
monomial is the tuple of its exponents in that order.  Terms are kept in a
dict ``{monomial: coefficient}`` with no zero coefficients.  Term order only
matters when a :class:`MonomialOrder` is supplied (leading terms, printing).
"""

from __future__ import annotations

import operator
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .field import Field, FieldError, RawValue

Monomial = tuple  # exponent vector, aligned with the ring's variables


class PolynomialError(ValueError):
    pass


class MonomialOrder:
    """``lex`` or ``degrevlex`` on monomials over ``variables`` (first variable is largest)."""

    KINDS = ("lex", "degrevlex")

    def __init__(self, kind: str = "degrevlex", variables: Sequence[str] = ()):
        kind = kind.lower()
        if kind not in self.KINDS:
            raise PolynomialError(f"unknown monomial order {kind!r}")
        self.kind = kind
        self.variables = tuple(variables)
        self._cache: dict[Monomial, tuple] = {}

    def key(self, m: Monomial):
        k = self._cache.get(m)
        if k is None:
            if self.kind == "lex":
                k = m
            else:
                k = (sum(m), tuple(-e for e in reversed(m)))
            self._cache[m] = k
        return k

    def with_variables(self, variables: Sequence[str]) -> MonomialOrder:
        return MonomialOrder(self.kind, variables)

    def __eq__(self, other):
        return isinstance(other, MonomialOrder) and (self.kind, self.variables) == (other.kind, other.variables)

    def __hash__(self):
        return hash((self.kind, self.variables))

    def __repr__(self):
        return f"MonomialOrder({self.kind!r}, {list(self.variables)!r})"


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(map(operator.add, a, b))


def mono_divides(a: Monomial, b: Monomial) -> bool:
    return all(map(operator.le, a, b))


def mono_div(b: Monomial, a: Monomial) -> Monomial:
    return tuple(map(operator.sub, b, a))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(map(max, a, b))


def mono_coprime(a: Monomial, b: Monomial) -> bool:
    return not any(map(operator.and_, map(bool, a), map(bool, b)))


class Polynomial:
    __slots__ = ("variables", "field", "terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, RawValue], variables: Sequence[str], field: Field):
        self.variables = tuple(variables)
        self.field = field
        n = len(self.variables)
        clean = {}
        for m, c in terms.items():
            if len(m) != n:
                raise PolynomialError(f"monomial {m} does not match {n} variables")
            c = field.canon(c)
            if c != 0:
                clean[tuple(m)] = c
        self.terms = clean
        self._hash = None

    # -- constructors -------------------------------------------------------
    @classmethod
    def zero(cls, variables: Sequence[str], field: Field) -> Polynomial:
        return cls({}, variables, field)

    @classmethod
    def constant(cls, c, variables: Sequence[str], field: Field) -> Polynomial:
        return cls({(0,) * len(variables): c}, variables, field)

    @classmethod
    def var(cls, name: str, variables: Sequence[str], field: Field) -> Polynomial:
        variables = tuple(variables)
        if name not in variables:
            raise PolynomialError(f"unknown variable {name!r}")
        m = tuple(1 if v == name else 0 for v in variables)
        return cls({m: 1}, variables, field)

    @classmethod
    def _raw(cls, terms: dict, variables: tuple, field: Field) -> Polynomial:
        # trusted path: terms already canonical and zero-free
        obj = cls.__new__(cls)
        obj.variables = variables
        obj.field = field
        obj.terms = terms
        obj._hash = None
        return obj

    # -- arithmetic ---------------------------------------------------------
    def _coerce(self, other) -> Polynomial:
        if isinstance(other, Polynomial):
            if other.field != self.field:
                raise FieldError("mixed fields")
            if other.variables != self.variables:
                raise PolynomialError("polynomials over different variable sets")
            return other
        return Polynomial.constant(other, self.variables, self.field)

    def __add__(self, other) -> Polynomial:
        other = self._coerce(other)
        f = self.field
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = f.add(out.get(m, f.zero), c)
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Polynomial._raw(out, self.variables, f)

    __radd__ = __add__

    def __neg__(self) -> Polynomial:
        f = self.field
        return Polynomial._raw({m: f.neg(c) for m, c in self.terms.items()}, self.variables, f)

    def __sub__(self, other) -> Polynomial:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> Polynomial:
        return self._coerce(other) - self

    def __mul__(self, other) -> Polynomial:
        other = self._coerce(other)
        f = self.field
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                v = f.add(out.get(m, f.zero), f.mul(c1, c2))
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
        return Polynomial._raw(out, self.variables, f)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> Polynomial:
        if k < 0:
            raise PolynomialError("negative power")
        out = Polynomial.constant(1, self.variables, self.field)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def scale(self, c) -> Polynomial:
        f = self.field
        c = f.canon(c)
        if c == 0:
            return Polynomial.zero(self.variables, f)
        return Polynomial._raw({m: f.mul(c, v) for m, v in self.terms.items()}, self.variables, f)

    # -- inspection ---------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def total_degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def used_variables(self) -> tuple[str, ...]:
        used = set()
        for m in self.terms:
            used.update(i for i, e in enumerate(m) if e)
        return tuple(v for i, v in enumerate(self.variables) if i in used)

    def leading_term(self, order: MonomialOrder) -> tuple[Monomial, RawValue]:
        if not self.terms:
            raise PolynomialError("zero polynomial has no leading term")
        m = max(self.terms, key=order.key)
        return m, self.terms[m]

    def leading_monomial(self, order: MonomialOrder) -> Monomial:
        return self.leading_term(order)[0]

    def monic(self, order: MonomialOrder) -> Polynomial:
        if not self.terms:
            return self
        _, c = self.leading_term(order)
        return self.scale(self.field.inv(c))

    def sorted_terms(self, order: MonomialOrder) -> list[tuple[Monomial, RawValue]]:
        return sorted(self.terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    def evaluate(self, point: Mapping[str, RawValue]) -> RawValue:
        f = self.field
        vals = [f.canon(point[v]) if v in point else None for v in self.variables]
        acc = f.zero
        for m, c in self.terms.items():
            t = c
            for i, e in enumerate(m):
                if e:
                    if vals[i] is None:
                        raise PolynomialError(f"no value for {self.variables[i]}")
                    t = f.mul(t, vals[i] ** e if isinstance(vals[i], Fraction) else pow(vals[i], e))
            acc = f.add(acc, t)
        return acc

    def reorder(self, variables: Sequence[str]) -> Polynomial:
        """Express the same polynomial over another variable tuple (a superset of the used ones)."""
        variables = tuple(variables)
        if variables == self.variables:
            return self
        idx = {v: i for i, v in enumerate(variables)}
        out = {}
        for m, c in self.terms.items():
            nm = [0] * len(variables)
            for i, e in enumerate(m):
                if e:
                    if self.variables[i] not in idx:
                        raise PolynomialError(f"variable {self.variables[i]!r} missing from target ring")
                    nm[idx[self.variables[i]]] = e
            out[tuple(nm)] = c
        return Polynomial._raw(out, variables, self.field)

    def __eq__(self, other):
        return (
            isinstance(other, Polynomial)
            and self.field == other.field
            and self.variables == other.variables
            and self.terms == other.terms
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((frozenset(self.terms.items()), self.variables, self.field))
        return self._hash

    def to_text(self, order: MonomialOrder | None = None) -> str:
        order = order or MonomialOrder("degrevlex", self.variables)
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms(order):
            factors = []
            for v, e in zip(self.variables, m):
                if e == 1:
                    factors.append(v)
                elif e > 1:
                    factors.append(f"{v}^{e}")
            neg = isinstance(c, Fraction) and c < 0
            mag = -c if neg else c
            cs = self.field.format(mag)
            if factors:
                body = "*".join(factors) if cs == "1" else cs + "*" + "*".join(factors)
            else:
                body = cs
            parts.append(("- " if neg else "+ ") + body)
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"Polynomial({self.to_text()!r} over {self.field!r})"


@dataclass(frozen=True)
class Ideal:
    """A finite generator list over one field and one variable tuple (zero generators allowed)."""

    generators: tuple[Polynomial, ...]
    variables: tuple[str, ...]
    field: Field

    def __post_init__(self):
        for g in self.generators:
            if g.field != self.field or g.variables != self.variables:
                raise PolynomialError("generator over a different field or variable set")

    @classmethod
    def of(cls, generators: Iterable[Polynomial], variables: Sequence[str] | None = None, field: Field | None = None):
        gens = list(generators)
        if variables is None:
            if not gens:
                raise PolynomialError("need variables for an empty ideal")
            variables = gens[0].variables
        if field is None:
            if not gens:
                raise PolynomialError("need a field for an empty ideal")
            field = gens[0].field
        return cls(tuple(g.reorder(variables) for g in gens), tuple(variables), field)

    def nonzero_generators(self) -> list[Polynomial]:
        return [g for g in self.generators if g]

    def __len__(self):
        return len(self.generators)


# --- text format ---------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\S))")


def _tokens(text: str):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:  # trailing whitespace
            break
        if m.group(0).strip() == "":
            break
        kind = "int" if m.group(1) else "ident" if m.group(2) else "sym"
        out.append((kind, m.group(m.lastindex), m.start(m.lastindex)))
        pos = m.end()
    return out


def scan_variables(texts: Iterable[str]) -> tuple[str, ...]:
    """Identifiers in order of first appearance."""
    seen: dict[str, None] = {}
    for t in texts:
        for kind, val, _ in _tokens(t):
            if kind == "ident":
                seen.setdefault(val, None)
    return tuple(seen)


def parse_polynomial(text: str, field: Field, variables: Sequence[str] | None = None) -> Polynomial:
    """Parse e.g. ``"2*f11*g12^2 + 3"`` (whitespace-insensitive, ``^`` for powers)."""
    if variables is None:
        variables = scan_variables([text])
    variables = tuple(variables)
    idx = {v: i for i, v in enumerate(variables)}
    toks = _tokens(text)
    if not toks:
        raise PolynomialError("empty polynomial")
    n = len(variables)
    pos = 0
    terms: dict = {}

    def peek():
        return toks[pos] if pos < len(toks) else (None, None, len(text))

    def expect_int():
        nonlocal pos
        kind, val, at = peek()
        if kind != "int":
            raise PolynomialError(f"expected integer at position {at}")
        pos += 1
        return int(val)

    sign = 1
    kind, val, at = peek()
    if kind == "sym" and val in "+-":
        sign = -1 if val == "-" else 1
        pos += 1
    while True:
        coef = Fraction(sign)
        mono = [0] * n
        while True:
            kind, val, at = peek()
            if kind == "int":
                pos += 1
                num = int(val)
                if peek()[0] == "sym" and peek()[1] == "/":
                    pos += 1
                    den = expect_int()
                    if den == 0:
                        raise PolynomialError(f"zero denominator at position {at}")
                    coef *= Fraction(num, den)
                else:
                    coef *= num
            elif kind == "ident":
                pos += 1
                if val not in idx:
                    raise PolynomialError(f"unknown variable {val!r} at position {at}")
                e = 1
                if peek()[0] == "sym" and peek()[1] == "^":
                    pos += 1
                    e = expect_int()
                mono[idx[val]] += e
            else:
                raise PolynomialError(f"unexpected {val!r} at position {at}")
            kind, val, at = peek()
            if kind == "sym" and val == "*":
                pos += 1
                continue
            break
        m = tuple(mono)
        c = field.add(terms.get(m, field.zero), field.canon(coef))
        if c:
            terms[m] = c
        else:
            terms.pop(m, None)
        kind, val, at = peek()
        if kind is None:
            break
        if kind == "sym" and val in "+-":
            sign = -1 if val == "-" else 1
            pos += 1
            continue
        raise PolynomialError(f"unexpected {val!r} at position {at}")
    return Polynomial._raw(terms, variables, field)


def parse_polynomials(text: str, field: Field, variables: Sequence[str] | None = None) -> list[Polynomial]:
    """Parse a generator list separated by newlines, commas or semicolons (``#`` starts a comment)."""
    chunks = []
    for line in text.splitlines():
        line = line.split("#", 1)[0]
        chunks.extend(c.strip() for c in re.split(r"[,;]", line))
    chunks = [c for c in chunks if c]
    if variables is None:
        variables = scan_variables(chunks)
    return [parse_polynomial(c, field, variables) for c in chunks]
