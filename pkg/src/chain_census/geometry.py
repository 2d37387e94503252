"""Exact planar and spatial primitives over the rationals.

Every coordinate is a :class:`fractions.Fraction`, so equality of distances,
incidence of points and lines, and coplanarity are all decided exactly.
Lines and planes are kept in a canonical form so that set equality reduces
to tuple equality and they can be used as dictionary keys.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional, Sequence, Union

from .errors import DegenerateInput, SkewInput

Rational = Fraction
SquaredDistance = Fraction
RationalLike = Union[int, str, Fraction]


def as_rational(value: RationalLike) -> Fraction:
    """Coerce an int, ``"a"``/``"a/b"`` string or Fraction into a reduced Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not coordinates")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        num, sep, den = text.partition("/")
        try:
            n = int(num)
            d = int(den) if sep else 1
        except ValueError:
            raise ValueError(f"not a rational literal: {value!r}") from None
        if d <= 0:
            raise ValueError(f"denominator must be positive: {value!r}")
        return Fraction(n, d)
    raise TypeError(f"cannot interpret {type(value).__name__} as a rational")


def format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


class PlanePoint(NamedTuple):
    x: Fraction
    y: Fraction

    @classmethod
    def of(cls, x: RationalLike, y: RationalLike) -> "PlanePoint":
        return cls(as_rational(x), as_rational(y))


class SpacePoint(NamedTuple):
    x: Fraction
    y: Fraction
    z: Fraction

    @classmethod
    def of(cls, x: RationalLike, y: RationalLike, z: RationalLike) -> "SpacePoint":
        return cls(as_rational(x), as_rational(y), as_rational(z))


def squared_distance(p: PlanePoint, q: PlanePoint) -> SquaredDistance:
    dx = p.x - q.x
    dy = p.y - q.y
    return dx * dx + dy * dy


# --- small vector helpers (work for ints and Fractions alike) ---

def cross(u: Sequence, v: Sequence) -> tuple:
    return (
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    )


def dot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v))


def sub(u: Sequence, v: Sequence) -> tuple:
    return tuple(a - b for a, b in zip(u, v))


def primitive_vector(values: Sequence[RationalLike]) -> tuple[int, ...]:
    """Scale a nonzero rational vector to coprime integers with first nonzero entry > 0."""
    qs = [as_rational(v) for v in values]
    if not any(qs):
        raise DegenerateInput("zero vector has no primitive form")
    lcm = 1
    for q in qs:
        lcm = lcm * q.denominator // math.gcd(lcm, q.denominator)
    ints = [int(q * lcm) for q in qs]
    g = 0
    for v in ints:
        g = math.gcd(g, v)
    ints = [v // g for v in ints]
    lead = next(v for v in ints if v != 0)
    if lead < 0:
        ints = [-v for v in ints]
    return tuple(ints)


@dataclass(frozen=True)
class SpaceLine:
    """A line in canonical form.

    ``direction`` is a primitive integer vector whose first nonzero entry is
    positive; ``base`` is the unique point of the line whose coordinate along
    that first nonzero direction component is zero.
    """

    base: SpacePoint
    direction: tuple[int, int, int]

    @classmethod
    def through(cls, point: Sequence[RationalLike], direction: Sequence[RationalLike]) -> "SpaceLine":
        d = primitive_vector(direction)
        p = [as_rational(c) for c in point]
        axis = next(i for i, v in enumerate(d) if v != 0)
        s = -p[axis] / d[axis]
        base = SpacePoint(*(p[i] + s * d[i] for i in range(3)))
        return cls(base, d)  # type: ignore[arg-type]

    def canonical(self) -> "SpaceLine":
        return SpaceLine.through(self.base, self.direction)

    def at(self, s: RationalLike) -> SpacePoint:
        s = as_rational(s)
        return SpacePoint(*(b + s * d for b, d in zip(self.base, self.direction)))

    def contains(self, point: Sequence[RationalLike]) -> bool:
        w = sub([as_rational(c) for c in point], self.base)
        return not any(cross(w, self.direction))


@dataclass(frozen=True)
class SpacePlane:
    """Plane ``a*x + b*y + c*z + d = 0`` with a primitive integer coefficient vector."""

    coefficients: tuple[int, int, int, int]

    @classmethod
    def from_normal(cls, normal: Sequence[RationalLike], point: Sequence[RationalLike]) -> "SpacePlane":
        n = [as_rational(c) for c in normal]
        if not any(n):
            raise DegenerateInput("plane normal is zero")
        d = -dot(n, [as_rational(c) for c in point])
        return cls(primitive_vector([*n, d]))  # type: ignore[arg-type]

    @property
    def normal(self) -> tuple[int, int, int]:
        return self.coefficients[:3]  # type: ignore[return-value]

    def contains_point(self, point: Sequence[RationalLike]) -> bool:
        a, b, c, d = self.coefficients
        x, y, z = (as_rational(v) for v in point)
        return a * x + b * y + c * z + d == 0

    def contains_line(self, line: SpaceLine) -> bool:
        return dot(self.normal, line.direction) == 0 and self.contains_point(line.base)


class MeetKind(enum.Enum):
    EQUAL = "equal"
    PARALLEL = "parallel"
    INTERSECT = "intersect"
    SKEW = "skew"


class Meeting(NamedTuple):
    kind: MeetKind
    point: Optional[SpacePoint] = None


def line_meet_classify(l1: SpaceLine, l2: SpaceLine) -> Meeting:
    """Classify two canonical lines as equal, parallel, intersecting or skew."""
    if l1.direction == l2.direction:
        if l1.base == l2.base:
            return Meeting(MeetKind.EQUAL)
        return Meeting(MeetKind.PARALLEL)
    w = sub(l2.base, l1.base)
    c = cross(l1.direction, l2.direction)
    if dot(w, c) != 0:
        return Meeting(MeetKind.SKEW)
    s = Fraction(dot(cross(w, l2.direction), c), dot(c, c))
    return Meeting(MeetKind.INTERSECT, l1.at(s))


def plane_through(l1: SpaceLine, l2: SpaceLine) -> SpacePlane:
    """The unique plane containing two distinct coplanar lines."""
    kind = line_meet_classify(l1, l2).kind
    if kind is MeetKind.EQUAL:
        raise DegenerateInput("equal lines do not determine a plane")
    if kind is MeetKind.SKEW:
        raise SkewInput("skew lines are not coplanar")
    if kind is MeetKind.PARALLEL:
        normal = cross(l1.direction, sub(l2.base, l1.base))
    else:
        normal = cross(l1.direction, l2.direction)
    return SpacePlane.from_normal(normal, l1.base)
