"""Exact scalars: prime fields GF(p) and the rationals.

Field objects do the arithmetic on *raw* canonical values (``int`` residues in
``[0, p)`` for GF(p), reduced :class:`fractions.Fraction` for Q).  Raw values
are what matrices and polynomials store; :class:`Scalar` wraps a raw value
together with its field for the user-facing API.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Union

RawValue = Union[int, Fraction]


class FieldError(ValueError):
    """Bad field construction, mixed-field operands or division by zero."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


class Field:
    """Common interface of :class:`PrimeField` and :class:`Rationals`."""

    is_finite: bool = False
    characteristic: int = 0

    def canon(self, value) -> RawValue:
        raise NotImplementedError

    def __call__(self, value) -> Scalar:
        if isinstance(value, Scalar):
            if value.field != self:
                raise FieldError(f"cannot coerce {value!r} into {self}")
            return value
        return Scalar(self.canon(value), self)

    @property
    def zero(self) -> RawValue:
        return self.canon(0)

    @property
    def one(self) -> RawValue:
        return self.canon(1)

    def add(self, a, b):
        return self.canon(a + b)

    def sub(self, a, b):
        return self.canon(a - b)

    def neg(self, a):
        return self.canon(-a)

    def mul(self, a, b):
        return self.canon(a * b)

    def inv(self, a):
        raise NotImplementedError

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def parse(self, text: str) -> RawValue:
        """Parse ``"3"``, ``"-2"`` or ``"1/2"`` into a raw value of this field."""
        text = text.strip()
        if "/" in text:
            num, den = text.split("/", 1)
            return self.div(self.canon(int(num)), self.canon(int(den)))
        return self.canon(int(text))

    def format(self, a: RawValue) -> str:
        return str(a)


class PrimeField(Field):
    is_finite = True

    def __init__(self, p: int):
        if not isinstance(p, int) or not is_prime(p):
            raise FieldError(f"GF({p}) is not a prime field")
        self.p = p
        self.characteristic = p

    @property
    def order(self) -> int:
        return self.p

    def canon(self, value) -> int:
        if isinstance(value, Scalar):
            if value.field != self:
                raise FieldError(f"mixed fields: {value.field} and {self}")
            return value.value
        if isinstance(value, Fraction):
            if value.denominator % self.p == 0:
                raise FieldError(f"{value} has no image in {self}")
            return value.numerator * pow(value.denominator, -1, self.p) % self.p
        return int(value) % self.p

    # int-only fast paths
    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return 1

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return -a % self.p

    def mul(self, a, b):
        return a * b % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise FieldError("division by zero")
        return pow(a, -1, self.p)

    def elements(self) -> Iterator[int]:
        return iter(range(self.p))

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def __repr__(self):
        return f"gf({self.p})"


class Rationals(Field):
    def canon(self, value) -> Fraction:
        if isinstance(value, Scalar):
            if value.field != self:
                raise FieldError(f"mixed fields: {value.field} and {self}")
            return value.value
        return Fraction(value)

    def inv(self, a):
        if a == 0:
            raise FieldError("division by zero")
        return 1 / Fraction(a)

    def format(self, a) -> str:
        return str(a)

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("Q")

    def __repr__(self):
        return "q"


QQ = Rationals()


@lru_cache(maxsize=None)
def gf(p: int) -> PrimeField:
    return PrimeField(p)


_FIELD_RE = re.compile(r"^\s*(?:gf\(\s*(\d+)\s*\)|(q))\s*$", re.IGNORECASE)


def parse_field(text: str) -> Field:
    """Parse a field selector: ``gf(p)`` with p prime, or ``q``."""
    m = _FIELD_RE.match(text)
    if not m:
        raise FieldError(f"unsupported field {text!r}")
    if m.group(2):
        return QQ
    p = int(m.group(1))
    if not is_prime(p):
        raise FieldError(f"unsupported field {text!r}: only prime fields gf(p) are available")
    return gf(p)


class Scalar:
    """An element of a :class:`Field` in canonical form.

    Equality is plain value comparison, so equal elements are ``==`` and hash alike.
    """

    __slots__ = ("value", "field")

    def __init__(self, value: RawValue, field: Field):
        self.value = value
        self.field = field

    def _other(self, other) -> RawValue:
        if isinstance(other, Scalar):
            if other.field != self.field:
                raise FieldError(f"mixed fields: {self.field} and {other.field}")
            return other.value
        return self.field.canon(other)

    def __add__(self, other):
        return Scalar(self.field.add(self.value, self._other(other)), self.field)

    __radd__ = __add__

    def __sub__(self, other):
        return Scalar(self.field.sub(self.value, self._other(other)), self.field)

    def __rsub__(self, other):
        return Scalar(self.field.sub(self._other(other), self.value), self.field)

    def __mul__(self, other):
        return Scalar(self.field.mul(self.value, self._other(other)), self.field)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return Scalar(self.field.div(self.value, self._other(other)), self.field)

    def __rtruediv__(self, other):
        return Scalar(self.field.div(self._other(other), self.value), self.field)

    def __neg__(self):
        return Scalar(self.field.neg(self.value), self.field)

    def __pow__(self, k: int):
        if k < 0:
            return Scalar(self.field.inv(self.value), self.field) ** (-k)
        out = self.field.one
        for _ in range(k):
            out = self.field.mul(out, self.value)
        return Scalar(out, self.field)

    def inverse(self) -> Scalar:
        return Scalar(self.field.inv(self.value), self.field)

    def is_zero(self) -> bool:
        return self.value == 0

    def __bool__(self):
        return self.value != 0

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.field == other.field and self.value == other.value
        try:
            return self.value == self.field.canon(other)
        except (TypeError, ValueError, FieldError):
            return NotImplemented

    def __hash__(self):
        return hash((self.value, self.field))

    def __int__(self):
        return int(self.value)

    def __repr__(self):
        return f"{self.field.format(self.value)} in {self.field!r}"

    def __str__(self):
        return self.field.format(self.value)


def scalar_arith(a: Scalar, b: Scalar, op: str) -> Scalar:
    """Apply ``add``, ``sub``, ``mul`` or ``div`` to two scalars of one field."""
    if a.field != b.field:
        raise FieldError(f"mixed fields: {a.field} and {b.field}")
    fn = {"add": a.field.add, "sub": a.field.sub, "mul": a.field.mul, "div": a.field.div}[op]
    return Scalar(fn(a.value, b.value), a.field)


def sqrt_raw(field: Field, a: RawValue) -> RawValue | None:
    """Return some ``m`` with ``m*m == a``, or ``None`` when ``a`` is not a square."""
    if isinstance(field, PrimeField):
        p = field.p
        a %= p
        if a == 0 or p == 2:
            return a
        if pow(a, (p - 1) // 2, p) != 1:
            return None
        for m in range(1, p):
            if m * m % p == a:
                return m
        raise AssertionError("Euler criterion and search disagree")
    a = Fraction(a)
    if a < 0:
        return None
    num, den = a.numerator, a.denominator
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Fraction(rn, rd)
    return None


def is_square(a: Scalar) -> tuple[bool, Scalar | None]:
    """Decide whether ``a`` is a square; on success also return a witness ``m`` with ``m**2 == a``."""
    m = sqrt_raw(a.field, a.value)
    if m is None:
        return False, None
    return True, Scalar(m, a.field)


def squares(field: PrimeField) -> frozenset[int]:
    """Nonzero squares of GF(p)."""
    return frozenset(x * x % field.p for x in range(1, field.p))
