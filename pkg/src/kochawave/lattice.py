"""Exact arithmetic on the triangular lattice Z[omega], omega = exp(i*pi/3).

A lattice point is a + b*omega with integer a, b.  The sixth root of unity
omega satisfies

    omega**2 = omega - 1,    omega**3 = -1,    omega**6 = 1,

so multiplication closes on integer pairs:

    (a + b*omega)(c + d*omega) = (a*c - b*d) + (a*d + b*c + b*d)*omega.

Cartesian embedding: Re = a + b/2, Im = b*sqrt(3)/2.

Three exact scalar types cover everything downstream needs:

  * EisensteinInt  -- integer pairs (a, b); Python ints never overflow, so
    no wraparound is possible here (the compiled kernel separately guards
    its fixed-width range).
  * QOmega         -- pairs of Fractions, i.e. the field Q(omega).
  * SqrtThreeScalar -- p + q*sqrt(3) with rational p, q; ordering is decided
    exactly (sqrt(3) is irrational, so p + q*sqrt(3) = 0 only at p = q = 0).
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

_OMEGA_POW = ((1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1))


class EisensteinInt:
    """Integer point a + b*omega of the triangular lattice."""

    __slots__ = ("a", "b")

    def __init__(self, a: int, b: int = 0):
        self.a = a
        self.b = b

    def __repr__(self) -> str:
        return f"EisensteinInt({self.a}, {self.b})"

    def __eq__(self, other) -> bool:
        other = _coerce_eis(other)
        if other is None:
            return NotImplemented
        return self.a == other.a and self.b == other.b

    def __hash__(self):
        return hash((self.a, self.b))

    def __add__(self, other) -> "EisensteinInt":
        other = _coerce_eis(other)
        if other is None:
            return NotImplemented
        return EisensteinInt(self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __sub__(self, other) -> "EisensteinInt":
        other = _coerce_eis(other)
        if other is None:
            return NotImplemented
        return EisensteinInt(self.a - other.a, self.b - other.b)

    def __rsub__(self, other) -> "EisensteinInt":
        other = _coerce_eis(other)
        if other is None:
            return NotImplemented
        return other - self

    def __neg__(self) -> "EisensteinInt":
        return EisensteinInt(-self.a, -self.b)

    def __mul__(self, other) -> "EisensteinInt":
        other = _coerce_eis(other)
        if other is None:
            return NotImplemented
        a, b, c, d = self.a, self.b, other.a, other.b
        return EisensteinInt(a * c - b * d, a * d + b * c + b * d)

    __rmul__ = __mul__

    def conjugate(self) -> "EisensteinInt":
        """Complex conjugate: conj(a + b*omega) = (a + b) - b*omega."""
        return EisensteinInt(self.a + self.b, -self.b)

    def norm(self) -> int:
        """Squared modulus a**2 + a*b + b**2 (always a nonnegative integer)."""
        return self.a * self.a + self.a * self.b + self.b * self.b

    def divide_int(self, m: int) -> "EisensteinInt":
        """Exact division by a nonzero integer; ValueError if not divisible."""
        if m == 0:
            raise ZeroDivisionError("division of lattice point by zero")
        if self.a % m or self.b % m:
            raise ValueError(f"{self!r} is not divisible by {m}")
        return EisensteinInt(self.a // m, self.b // m)

    def re_exact(self) -> Fraction:
        return Fraction(2 * self.a + self.b, 2)

    def im_half_sqrt3(self) -> int:
        """Imaginary part is (this integer) * sqrt(3)/2."""
        return self.b

    def to_qomega(self, denominator: int = 1) -> "QOmega":
        return QOmega(Fraction(self.a, denominator), Fraction(self.b, denominator))

    def to_complex(self) -> complex:
        return complex(self.a + self.b * 0.5, self.b * _HALF_SQRT3)


def _coerce_eis(value) -> Union[EisensteinInt, None]:
    if isinstance(value, EisensteinInt):
        return value
    if isinstance(value, int):
        return EisensteinInt(value, 0)
    return None


_HALF_SQRT3 = math.sqrt(3.0) / 2.0

ZERO = EisensteinInt(0, 0)
ONE = EisensteinInt(1, 0)
OMEGA = EisensteinInt(0, 1)
ONE_PLUS_OMEGA = EisensteinInt(1, 1)


def omega_pow(k: int) -> EisensteinInt:
    """omega**k for any integer k (period 6), e.g. omega_pow(-2) == EisensteinInt(0, -1)."""
    a, b = _OMEGA_POW[k % 6]
    return EisensteinInt(a, b)


def cross2(p: EisensteinInt, q: EisensteinInt) -> int:
    """Integer c with Re(p)*Im(q) - Re(q)*Im(p) = c * sqrt(3)/2."""
    return p.a * q.b - q.a * p.b


class QOmega:
    """Element x + y*omega of the field Q(omega), x and y rational."""

    __slots__ = ("x", "y")

    def __init__(self, x, y=0):
        self.x = Fraction(x)
        self.y = Fraction(y)

    @classmethod
    def from_eis(cls, z: EisensteinInt, denominator: int = 1) -> "QOmega":
        return cls(Fraction(z.a, denominator), Fraction(z.b, denominator))

    def __repr__(self) -> str:
        return f"QOmega({self.x!r}, {self.y!r})"

    def __eq__(self, other) -> bool:
        other = _coerce_qomega(other)
        if other is None:
            return NotImplemented
        return self.x == other.x and self.y == other.y

    def __hash__(self):
        return hash((self.x, self.y))

    def __add__(self, other) -> "QOmega":
        other = _coerce_qomega(other)
        if other is None:
            return NotImplemented
        return QOmega(self.x + other.x, self.y + other.y)

    __radd__ = __add__

    def __sub__(self, other) -> "QOmega":
        other = _coerce_qomega(other)
        if other is None:
            return NotImplemented
        return QOmega(self.x - other.x, self.y - other.y)

    def __rsub__(self, other) -> "QOmega":
        other = _coerce_qomega(other)
        if other is None:
            return NotImplemented
        return other - self

    def __neg__(self) -> "QOmega":
        return QOmega(-self.x, -self.y)

    def __mul__(self, other) -> "QOmega":
        other = _coerce_qomega(other)
        if other is None:
            return NotImplemented
        a, b, c, d = self.x, self.y, other.x, other.y
        return QOmega(a * c - b * d, a * d + b * c + b * d)

    __rmul__ = __mul__

    def conjugate(self) -> "QOmega":
        return QOmega(self.x + self.y, -self.y)

    def norm(self) -> Fraction:
        return self.x * self.x + self.x * self.y + self.y * self.y

    def inverse(self) -> "QOmega":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero in Q(omega)")
        c = self.conjugate()
        return QOmega(c.x / n, c.y / n)

    def __truediv__(self, other) -> "QOmega":
        other = _coerce_qomega(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def re_exact(self) -> Fraction:
        return self.x + self.y / 2

    def im_exact(self) -> "SqrtThreeScalar":
        return SqrtThreeScalar(0, self.y / 2)

    def to_complex(self) -> complex:
        return complex(float(self.x) + float(self.y) * 0.5, float(self.y) * _HALF_SQRT3)


def _coerce_qomega(value) -> Union[QOmega, None]:
    if isinstance(value, QOmega):
        return value
    if isinstance(value, (int, Fraction)):
        return QOmega(value, 0)
    if isinstance(value, EisensteinInt):
        return QOmega(value.a, value.b)
    return None


class SqrtThreeScalar:
    """Real number p + q*sqrt(3) with rational p, q; all comparisons exact."""

    __slots__ = ("p", "q")

    def __init__(self, p, q=0):
        self.p = Fraction(p)
        self.q = Fraction(q)

    def __repr__(self) -> str:
        return f"SqrtThreeScalar({self.p!r}, {self.q!r})"

    def is_rational(self) -> bool:
        return self.q == 0

    def as_fraction(self) -> Fraction:
        if self.q != 0:
            raise ValueError(f"{self!r} is irrational")
        return self.p

    def __eq__(self, other) -> bool:
        other = _coerce_s3(other)
        if other is None:
            return NotImplemented
        return self.p == other.p and self.q == other.q

    def __hash__(self):
        return hash((self.p, self.q))

    def _sign(self) -> int:
        p, q = self.p, self.q
        if p == 0 and q == 0:
            return 0
        if p >= 0 and q >= 0:
            return 1
        if p <= 0 and q <= 0:
            return -1
        # opposite signs, both nonzero: the square comparison decides
        # (p*p == 3*q*q is impossible for nonzero rationals)
        pp, qq3 = p * p, 3 * q * q
        if p > 0:
            return 1 if pp > qq3 else -1
        return -1 if pp > qq3 else 1

    def __lt__(self, other) -> bool:
        other = _coerce_s3(other)
        if other is None:
            return NotImplemented
        return (self - other)._sign() < 0

    def __le__(self, other) -> bool:
        other = _coerce_s3(other)
        if other is None:
            return NotImplemented
        return (self - other)._sign() <= 0

    def __gt__(self, other) -> bool:
        other = _coerce_s3(other)
        if other is None:
            return NotImplemented
        return (self - other)._sign() > 0

    def __ge__(self, other) -> bool:
        other = _coerce_s3(other)
        if other is None:
            return NotImplemented
        return (self - other)._sign() >= 0

    def __add__(self, other) -> "SqrtThreeScalar":
        other = _coerce_s3(other)
        if other is None:
            return NotImplemented
        return SqrtThreeScalar(self.p + other.p, self.q + other.q)

    __radd__ = __add__

    def __sub__(self, other) -> "SqrtThreeScalar":
        other = _coerce_s3(other)
        if other is None:
            return NotImplemented
        return SqrtThreeScalar(self.p - other.p, self.q - other.q)

    def __rsub__(self, other) -> "SqrtThreeScalar":
        other = _coerce_s3(other)
        if other is None:
            return NotImplemented
        return other - self

    def __neg__(self) -> "SqrtThreeScalar":
        return SqrtThreeScalar(-self.p, -self.q)

    def __mul__(self, other) -> "SqrtThreeScalar":
        other = _coerce_s3(other)
        if other is None:
            return NotImplemented
        return SqrtThreeScalar(
            self.p * other.p + 3 * self.q * other.q,
            self.p * other.q + self.q * other.p,
        )

    __rmul__ = __mul__

    def inverse(self) -> "SqrtThreeScalar":
        d = self.p * self.p - 3 * self.q * self.q
        if self.p == 0 and self.q == 0:
            raise ZeroDivisionError("inverse of zero")
        return SqrtThreeScalar(self.p / d, -self.q / d)

    def __truediv__(self, other) -> "SqrtThreeScalar":
        other = _coerce_s3(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other) -> "SqrtThreeScalar":
        other = _coerce_s3(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, k: int) -> "SqrtThreeScalar":
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        out = SqrtThreeScalar(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __abs__(self) -> "SqrtThreeScalar":
        return self if self._sign() >= 0 else -self

    def __float__(self) -> float:
        return float(self.p) + float(self.q) * math.sqrt(3.0)


def _coerce_s3(value) -> Union[SqrtThreeScalar, None]:
    if isinstance(value, SqrtThreeScalar):
        return value
    if isinstance(value, (int, Fraction)):
        return SqrtThreeScalar(value, 0)
    return None


SQRT3 = SqrtThreeScalar(0, 1)
