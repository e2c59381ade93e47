"""
Lattice arithmetic in N = Z^2 and N_Q = N (x) Q.

The second coordinate is the height. Quotients N_R / R.u are represented by
the scalar <rot90(u), x> with rot90(a, b) = (-b, a), which equals det(u, x).
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Tuple, Union

from corals.core.errors import NotPrimitive, ZeroVector

Rational = Union[int, Fraction]


@dataclass(frozen=True, order=True)
class LatticeVector:
    """Integral vector (a, b); b is the height."""
    a: int
    b: int

    def __post_init__(self):
        if not isinstance(self.a, int) or not isinstance(self.b, int):
            raise TypeError(f"lattice coordinates must be integers, got ({self.a!r}, {self.b!r})")

    @property
    def height(self) -> int:
        return self.b

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def __add__(self, other: "LatticeVector") -> "LatticeVector":
        return LatticeVector(self.a + other.a, self.b + other.b)

    def __sub__(self, other: "LatticeVector") -> "LatticeVector":
        return LatticeVector(self.a - other.a, self.b - other.b)

    def __neg__(self) -> "LatticeVector":
        return LatticeVector(-self.a, -self.b)

    def __mul__(self, k: int) -> "LatticeVector":
        return LatticeVector(k * self.a, k * self.b)

    __rmul__ = __mul__

    def rot90(self) -> "LatticeVector":
        return LatticeVector(-self.b, self.a)

    def slope(self) -> Fraction:
        """Radial projection a/b to height 1."""
        return Fraction(self.a, self.b)

    def as_list(self) -> list:
        return [self.a, self.b]


@dataclass(frozen=True, order=True)
class RationalPoint:
    """Point (x, h) of N_Q."""
    x: Fraction
    h: Fraction

    def __post_init__(self):
        object.__setattr__(self, "x", Fraction(self.x))
        object.__setattr__(self, "h", Fraction(self.h))

    def __add__(self, other: "RationalPoint") -> "RationalPoint":
        return RationalPoint(self.x + other.x, self.h + other.h)

    def __sub__(self, other: "RationalPoint") -> "RationalPoint":
        return RationalPoint(self.x - other.x, self.h - other.h)

    def scale(self, s: Rational) -> "RationalPoint":
        return RationalPoint(self.x * s, self.h * s)

    def step(self, t: Rational, u: LatticeVector) -> "RationalPoint":
        """The point self + t*u."""
        return RationalPoint(self.x + t * u.a, self.h + t * u.b)

    def radial(self) -> Fraction:
        """x/h, the image under radial projection to height 1."""
        return self.x / self.h

    def as_list(self) -> list:
        return [self.x, self.h]


@dataclass(frozen=True)
class QuotientClass:
    """Class of a point in N_R / R.direction, stored as <rot90(direction), x>."""
    direction: LatticeVector
    value: Fraction

    def __post_init__(self):
        if not is_primitive(self.direction):
            raise NotPrimitive(f"quotient direction {self.direction} is not primitive")
        object.__setattr__(self, "value", Fraction(self.value))

    def scaled(self, s: Rational) -> "QuotientClass":
        return QuotientClass(self.direction, self.value * s)


def as_vector(point: RationalPoint) -> LatticeVector:
    if point.x.denominator != 1 or point.h.denominator != 1:
        raise TypeError(f"{point} is not integral")
    return LatticeVector(int(point.x), int(point.h))


def is_primitive(v: LatticeVector) -> bool:
    return gcd(v.a, v.b) == 1


def primitive(v: LatticeVector) -> Tuple[LatticeVector, int]:
    """Split v = g*p with p primitive and g = gcd(|a|, |b|)."""
    if v.is_zero():
        raise ZeroVector("the zero vector has no primitive direction")
    g = gcd(v.a, v.b)
    return LatticeVector(v.a // g, v.b // g), g


def primitive_of(dx: Rational, dh: Rational) -> Tuple[LatticeVector, Fraction]:
    """Primitive integral direction of a nonzero rational vector and its length factor.

    Returns (p, t) with (dx, dh) = t*p and t > 0.
    """
    dx, dh = Fraction(dx), Fraction(dh)
    if dx == 0 and dh == 0:
        raise ZeroVector("the zero vector has no primitive direction")
    den = dx.denominator * dh.denominator // gcd(dx.denominator, dh.denominator)
    p, _ = primitive(LatticeVector(int(dx * den), int(dh * den)))
    t = dx / p.a if p.a != 0 else dh / p.b
    return p, t


def direction_between(p: RationalPoint, q: RationalPoint) -> Tuple[LatticeVector, Fraction]:
    """Primitive direction from p to q and the length parameter t with q = p + t*dir."""
    return primitive_of(q.x - p.x, q.h - p.h)


def det2(u: LatticeVector, v: LatticeVector) -> int:
    return u.a * v.b - u.b * v.a


def pairing(u: LatticeVector, x: RationalPoint) -> Fraction:
    """<rot90(u), x> = det(u, x)."""
    return u.a * x.h - u.b * x.x


def project_mod(u: LatticeVector, x: RationalPoint) -> QuotientClass:
    if not is_primitive(u):
        raise NotPrimitive(f"{u} is not primitive")
    return QuotientClass(u, pairing(u, x))


def parallel(u: LatticeVector, v: LatticeVector) -> bool:
    return det2(u, v) == 0


def sign(q: Rational) -> int:
    return (q > 0) - (q < 0)


def angle_key(u: LatticeVector, start: LatticeVector = LatticeVector(1, 0)) -> Fraction:
    """Exact key ordering directions anticlockwise from `start` (which maps to 0).

    A direction is replaced by its point on the boundary of the square
    max(|x|, |y|) = 1; the perimeter position is monotone in the angle.
    """
    return (_perimeter(u) - _perimeter(start)) % 8


def _perimeter(v: LatticeVector) -> Fraction:
    if v.is_zero():
        raise ZeroVector("the zero vector has no angle")
    m = max(abs(v.a), abs(v.b))
    x, y = Fraction(v.a, m), Fraction(v.b, m)
    if x == 1 and 0 <= y < 1:
        return y
    if y == 1:
        return 1 + (1 - x)
    if x == -1:
        return 3 + (1 - y)
    if y == -1:
        return 5 + (x + 1)
    return 7 + (y + 1)
