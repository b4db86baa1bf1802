"""Exact arithmetic: rationals, the field Q(sqrt2, sqrt3), and dyadic rationals.

Rationals are plain :class:`fractions.Fraction` objects, which are always kept
in lowest terms with a positive denominator.
"""

from __future__ import annotations

import enum
import math
from fractions import Fraction
from typing import Iterable, Sequence, Union

BigRational = Fraction

Rational = Union[int, Fraction]

SQRT2_F = math.sqrt(2.0)
SQRT3_F = math.sqrt(3.0)
SQRT6_F = math.sqrt(6.0)


class Order(enum.IntEnum):
    LT = -1
    EQ = 0
    GT = 1


def lex_compare(xs: Sequence[Rational], ys: Sequence[Rational]) -> Order:
    """Compare two equal-length rational sequences lexicographically."""
    if len(xs) != len(ys):
        raise ValueError(f"length mismatch: {len(xs)} vs {len(ys)}")
    for x, y in zip(xs, ys):
        if x < y:
            return Order.LT
        if x > y:
            return Order.GT
    return Order.EQ


def _q(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v)
    raise TypeError(f"not an exact rational: {v!r}")


class QF:
    """Element a + b*sqrt2 + c*sqrt3 + d*sqrt6 of Q(sqrt2, sqrt3)."""

    __slots__ = ("a", "b", "c", "d", "_hash")

    def __init__(self, a: Rational = 0, b: Rational = 0, c: Rational = 0, d: Rational = 0):
        self.a = _q(a)
        self.b = _q(b)
        self.c = _q(c)
        self.d = _q(d)
        self._hash = None

    @classmethod
    def coerce(cls, v) -> "QF":
        if isinstance(v, QF):
            return v
        return cls(v)

    def coeffs(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.a, self.b, self.c, self.d)

    def is_zero(self) -> bool:
        return not (self.a or self.b or self.c or self.d)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = QF(other)
        if not isinstance(other, QF):
            return NotImplemented
        return self.coeffs() == other.coeffs()

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.coeffs())
        return self._hash

    def __repr__(self) -> str:
        return f"QF({self.a}, {self.b}, {self.c}, {self.d})"

    def __str__(self) -> str:
        parts = []
        for coef, name in zip(self.coeffs(), ("", "√2", "√3", "√6")):
            if coef:
                parts.append(f"{coef}{name}" if name else f"{coef}")
        return " + ".join(parts) if parts else "0"

    def __float__(self) -> float:
        return float(self.a) + float(self.b) * SQRT2_F + float(self.c) * SQRT3_F + float(self.d) * SQRT6_F

    def __neg__(self) -> "QF":
        return QF(-self.a, -self.b, -self.c, -self.d)

    def __add__(self, other) -> "QF":
        o = QF.coerce(other)
        return QF(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)

    __radd__ = __add__

    def __sub__(self, other) -> "QF":
        o = QF.coerce(other)
        return QF(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)

    def __rsub__(self, other) -> "QF":
        return QF.coerce(other) - self

    def __mul__(self, other) -> "QF":
        if isinstance(other, (int, Fraction)):
            return QF(self.a * other, self.b * other, self.c * other, self.d * other)
        o = QF.coerce(other)
        a1, b1, c1, d1 = self.a, self.b, self.c, self.d
        a2, b2, c2, d2 = o.a, o.b, o.c, o.d
        # sqrt2*sqrt3 = sqrt6, sqrt2*sqrt6 = 2sqrt3, sqrt3*sqrt6 = 3sqrt2, sqrt6^2 = 6
        return QF(
            a1 * a2 + 2 * b1 * b2 + 3 * c1 * c2 + 6 * d1 * d2,
            a1 * b2 + b1 * a2 + 3 * (c1 * d2 + d1 * c2),
            a1 * c2 + c1 * a2 + 2 * (b1 * d2 + d1 * b2),
            a1 * d2 + d1 * a2 + b1 * c2 + c1 * b2,
        )

    __rmul__ = __mul__

    def conj2(self) -> "QF":
        """Image under sqrt2 -> -sqrt2."""
        return QF(self.a, -self.b, self.c, -self.d)

    def conj3(self) -> "QF":
        """Image under sqrt3 -> -sqrt3."""
        return QF(self.a, self.b, -self.c, -self.d)

    def inverse(self) -> "QF":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in Q(√2,√3)")
        n1 = self * self.conj2()  # lies in Q(sqrt3)
        n2 = n1 * n1.conj3()  # rational
        assert not (n2.b or n2.c or n2.d)
        return (self.conj2() * n1.conj3()) * (1 / n2.a)

    def __truediv__(self, other) -> "QF":
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return self * (1 / Fraction(other))
        return self * QF.coerce(other).inverse()

    def __rtruediv__(self, other) -> "QF":
        return QF.coerce(other) * self.inverse()


ZERO = QF(0)
ONE = QF(1)
SQRT2 = QF(0, 1)
SQRT3 = QF(0, 0, 1)
SQRT6 = QF(0, 0, 0, 1)


def qf_arith(x: QF, y: QF, op: str) -> QF:
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    raise ValueError(f"unknown op {op!r}")


def qf_inverse(x: QF) -> QF:
    return x.inverse()


class Dyadic:
    """mantissa * 2**exponent with the mantissa odd (or zero, exponent 0)."""

    __slots__ = ("mantissa", "exponent")

    def __init__(self, mantissa: int = 0, exponent: int = 0):
        mantissa = int(mantissa)
        exponent = int(exponent)
        if mantissa == 0:
            exponent = 0
        else:
            tz = (mantissa & -mantissa).bit_length() - 1
            mantissa >>= tz
            exponent += tz
        self.mantissa = mantissa
        self.exponent = exponent

    @classmethod
    def from_value(cls, v) -> "Dyadic":
        if isinstance(v, Dyadic):
            return v
        f = Fraction(v)
        den = f.denominator
        if den & (den - 1):
            raise ValueError(f"{v!r} is not a dyadic rational")
        return cls(f.numerator, -(den.bit_length() - 1))

    @classmethod
    def pow2(cls, k: int) -> "Dyadic":
        return cls(1, k)

    def to_fraction(self) -> Fraction:
        if self.exponent >= 0:
            return Fraction(self.mantissa << self.exponent)
        return Fraction(self.mantissa, 1 << -self.exponent)

    def __float__(self) -> float:
        return math.ldexp(float(self.mantissa), self.exponent)

    def _align(self, other: "Dyadic") -> tuple[int, int, int]:
        e = min(self.exponent, other.exponent)
        return self.mantissa << (self.exponent - e), other.mantissa << (other.exponent - e), e

    def __add__(self, other) -> "Dyadic":
        o = Dyadic.from_value(other)
        m1, m2, e = self._align(o)
        return Dyadic(m1 + m2, e)

    __radd__ = __add__

    def __sub__(self, other) -> "Dyadic":
        o = Dyadic.from_value(other)
        m1, m2, e = self._align(o)
        return Dyadic(m1 - m2, e)

    def __rsub__(self, other) -> "Dyadic":
        return Dyadic.from_value(other) - self

    def __neg__(self) -> "Dyadic":
        return Dyadic(-self.mantissa, self.exponent)

    def __mul__(self, other) -> "Dyadic":
        o = Dyadic.from_value(other)
        return Dyadic(self.mantissa * o.mantissa, self.exponent + o.exponent)

    __rmul__ = __mul__

    def shift(self, k: int) -> "Dyadic":
        """Multiply by 2**k."""
        return Dyadic(self.mantissa, self.exponent + k)

    def floor_div_pow2(self, k: int) -> int:
        """floor(self / 2**k)."""
        f = self.to_fraction() / Fraction(2) ** k
        return math.floor(f)

    def mod_pow2(self, k: int) -> "Dyadic":
        """self - 2**k * floor(self / 2**k), in [0, 2**k)."""
        return self - Dyadic(self.floor_div_pow2(k), k)

    def _cmp_key(self) -> Fraction:
        return self.to_fraction()

    def __eq__(self, other) -> bool:
        if isinstance(other, Dyadic):
            return self.mantissa == other.mantissa and self.exponent == other.exponent
        if isinstance(other, (int, Fraction)):
            return self.to_fraction() == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.to_fraction())

    def __lt__(self, other) -> bool:
        return self.to_fraction() < Fraction(other.to_fraction() if isinstance(other, Dyadic) else other)

    def __le__(self, other) -> bool:
        return self == other or self < other

    def __gt__(self, other) -> bool:
        return not self <= other

    def __ge__(self, other) -> bool:
        return not self < other

    def __repr__(self) -> str:
        return f"Dyadic({self.mantissa}, {self.exponent})"

    def __str__(self) -> str:
        return str(self.to_fraction())


def fraction_str(f: Fraction) -> str:
    """Serialize as "num/den", always with an explicit denominator."""
    f = Fraction(f)
    return f"{f.numerator}/{f.denominator}"


def parse_fraction(s: str) -> Fraction:
    return Fraction(s)


def qf_to_json(x: QF) -> dict:
    return {k: fraction_str(v) for k, v in zip("abcd", x.coeffs())}


def qf_from_json(obj: dict) -> QF:
    return QF(*(parse_fraction(obj[k]) for k in "abcd"))


def rational_vector(elements: Iterable[QF]) -> list[Fraction]:
    out: list[Fraction] = []
    for e in elements:
        out.extend(e.coeffs())
    return out
