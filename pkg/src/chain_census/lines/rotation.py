"""Rotation lines: the ordered pair (p, q) becomes the line of rigid motions taking p to q.

Parametrize proper rotations by their center c and by t = cot(theta/2).
The rotation of angle theta about c sends p to q exactly when
c = midpoint(p, q) + (t/2) * perp(q - p), with perp(x, y) = (-y, x).  The
points (c, t) therefore sweep the line

    l_pq = {(midpoint(p, q) + (t/2) * perp(q - p), t) : t rational}.

For p == q this is the vertical line over p.  Translations by q - p have
no finite t; two lines share a direction exactly when their pairs differ
by the same translation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

from ..configs import PointConfig
from ..geometry import (
    MeetKind,
    PlanePoint,
    RationalLike,
    SpaceLine,
    as_rational,
    line_meet_classify,
)


@dataclass(frozen=True)
class RotationLine:
    geometry: SpaceLine
    source: tuple[PlanePoint, PlanePoint]

    @property
    def p(self) -> PlanePoint:
        return self.source[0]

    @property
    def q(self) -> PlanePoint:
        return self.source[1]


def rotation_line(p: PlanePoint, q: PlanePoint) -> RotationLine:
    mx = (p.x + q.x) / 2
    my = (p.y + q.y) / 2
    dx = q.x - p.x
    dy = q.y - p.y
    geometry = SpaceLine.through((mx, my, 0), (-dy / 2, dx / 2, 1))
    return RotationLine(geometry, (p, q))


def build_lines(config: PointConfig, include_diagonal: bool = True) -> list[RotationLine]:
    """One line per ordered pair of points, in row-major pair order."""
    return [
        rotation_line(p, q)
        for p in config.points
        for q in config.points
        if include_diagonal or p != q
    ]


class RigidMotion(NamedTuple):
    """Rotation by theta about ``center``, stored as exact (cos theta, sin theta)."""

    center: PlanePoint
    cos: Fraction
    sin: Fraction

    def apply(self, point: PlanePoint) -> PlanePoint:
        x = point.x - self.center.x
        y = point.y - self.center.y
        return PlanePoint(
            self.center.x + self.cos * x - self.sin * y,
            self.center.y + self.sin * x + self.cos * y,
        )


def motion_at(line: RotationLine, t: RationalLike) -> RigidMotion:
    """The rotation sitting at height t on the line."""
    t = as_rational(t)
    p, q = line.source
    half = t / 2
    center = PlanePoint(
        (p.x + q.x) / 2 - half * (q.y - p.y),
        (p.y + q.y) / 2 + half * (q.x - p.x),
    )
    denom = t * t + 1
    return RigidMotion(center, (t * t - 1) / denom, 2 * t / denom)


def meets(l1: RotationLine, l2: RotationLine) -> bool:
    """True when the lines are equal, parallel, or cross at a point."""
    return line_meet_classify(l1.geometry, l2.geometry).kind is not MeetKind.SKEW


def source_pairs(lines: Sequence[RotationLine]) -> list[tuple[PlanePoint, PlanePoint]]:
    return [l.source for l in lines]
