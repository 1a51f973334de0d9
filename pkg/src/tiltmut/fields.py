"""Exact scalar fields: the rationals and prime fields GF(p).

Every computation in this package is exact.  Field elements support the
usual operators (+, -, *, /, unary -, ==, bool), so the linear algebra in
:mod:`tiltmut.linalg` is written once against that interface.  Rationals
are plain :class:`fractions.Fraction`; prime-field elements are a thin
wrapper around ints mod p.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


class Rationals:
    """Field descriptor for Q.  Elements are Fraction instances."""

    name = "Q"

    @property
    def zero(self):
        return Fraction(0)

    @property
    def one(self):
        return Fraction(1)

    def of(self, n, d=1):
        return Fraction(n, d)

    def parse(self, text: str) -> Fraction:
        return Fraction(text)

    def fmt(self, x) -> str:
        return str(x)

    def inv(self, x):
        return Fraction(1) / x

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("Q")

    def __repr__(self):
        return "QQ"


@dataclass(frozen=True, slots=True)
class GFElement:
    """An element of GF(p), reduced to 0 <= value < p."""

    value: int
    p: int

    def _coerce(self, other) -> "GFElement":
        if isinstance(other, GFElement):
            if other.p != self.p:
                raise ValueError("mixed prime fields")
            return other
        if isinstance(other, int):
            return GFElement(other % self.p, self.p)
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other):
        o = self._coerce(other)
        return GFElement((self.value + o.value) % self.p, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return GFElement((self.value - o.value) % self.p, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        return GFElement((self.value * o.value) % self.p, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o.value == 0:
            raise ZeroDivisionError("division by zero in GF(p)")
        return self * GFElement(pow(o.value, self.p - 2, self.p), self.p)

    def __neg__(self):
        return GFElement((-self.value) % self.p, self.p)

    def __bool__(self):
        return self.value != 0

    def __eq__(self, other):
        if isinstance(other, GFElement):
            return self.p == other.p and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.p))

    def __repr__(self):
        return f"{self.value}"


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class PrimeField:
    """Field descriptor for GF(p), p prime."""

    def __init__(self, p: int):
        if not _is_prime(p):
            raise ValueError(f"modulus {p} is not prime")
        self.p = p
        self.name = f"F {p}"

    @property
    def zero(self):
        return GFElement(0, self.p)

    @property
    def one(self):
        return GFElement(1, self.p)

    def of(self, n, d=1):
        x = GFElement(n % self.p, self.p)
        if d != 1:
            x = x / GFElement(d % self.p, self.p)
        return x

    def parse(self, text: str) -> GFElement:
        if "/" in text:
            num, den = text.split("/")
            return self.of(int(num), int(den))
        return self.of(int(text))

    def fmt(self, x) -> str:
        return str(x.value)

    def inv(self, x):
        return self.one / x

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("F", self.p))

    def __repr__(self):
        return f"GF({self.p})"


QQ = Rationals()


def field_from_name(name: str):
    """Parse a field descriptor line body: 'Q' or 'F <p>'."""
    parts = name.split()
    if parts == ["Q"]:
        return QQ
    if len(parts) == 2 and parts[0] == "F":
        return PrimeField(int(parts[1]))
    raise ValueError(f"unknown field descriptor {name!r}")
