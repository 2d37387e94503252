"""Planar point configurations: generators and the JSON point-set file format."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Optional, Sequence, Union

from .errors import DuplicatePoint, ExhaustedSampling, MalformedFile
from .geometry import PlanePoint, RationalLike, as_rational, format_rational

PathLike = Union[str, Path]


@dataclass(frozen=True)
class PointConfig:
    """A named, ordered set of distinct rational points.

    The list order is the canonical indexing every downstream count uses.
    """

    name: str
    points: tuple[PlanePoint, ...]
    seed: Optional[int] = None
    _index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        pts = tuple(PlanePoint(as_rational(p[0]), as_rational(p[1])) for p in self.points)
        object.__setattr__(self, "points", pts)
        index = {}
        for i, p in enumerate(pts):
            if p in index:
                raise DuplicatePoint(
                    f"{self.name}: point {i} ({format_rational(p.x)}, {format_rational(p.y)}) "
                    f"repeats point {index[p]}"
                )
            index[p] = i
        object.__setattr__(self, "_index", index)

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def index(self, p: PlanePoint) -> int:
        return self._index[p]


def make_config(name: str, points: Iterable[Sequence[RationalLike]], seed: Optional[int] = None) -> PointConfig:
    return PointConfig(name, tuple(PlanePoint.of(*p) for p in points), seed)


def gen_lattice(m: int) -> PointConfig:
    """The m x m integer grid in row-major order (x varies fastest)."""
    if m < 1:
        raise ValueError("lattice side must be >= 1")
    pts = tuple(PlanePoint(Fraction(x), Fraction(y)) for y in range(m) for x in range(m))
    return PointConfig(f"lattice-{m}", pts)


def circle_point(radius: Fraction, t: int) -> PlanePoint:
    """Rational point on the circle of the given radius via the half-angle parametrization."""
    t2 = t * t
    return PlanePoint(radius * Fraction(1 - t2, 1 + t2), radius * Fraction(2 * t, 1 + t2))


def gen_star_circles(count_per_circle: int, radii: Sequence[RationalLike]) -> PointConfig:
    """The origin plus ``count_per_circle`` rational points on each concentric circle."""
    if count_per_circle < 1:
        raise ValueError("count_per_circle must be >= 1")
    rs = [as_rational(r) for r in radii]
    if any(r <= 0 for r in rs):
        raise ValueError("radii must be positive")
    if len(set(rs)) != len(rs):
        raise DuplicatePoint("radii must be distinct")
    pts = [PlanePoint(Fraction(0), Fraction(0))]
    for r in rs:
        pts.extend(circle_point(r, t) for t in range(1, count_per_circle + 1))
    label = ",".join(format_rational(r) for r in rs)
    return PointConfig(f"star-{count_per_circle}x[{label}]", tuple(pts))


def gen_random(n: int, seed: int, denominator_bound: int) -> PointConfig:
    """n distinct points with coordinates a/b, |a| <= bound**2, 1 <= b <= bound.

    Draws come from ``random.Random(seed)``; duplicates are rejected and
    redrawn. Gives up with ExhaustedSampling after a fixed number of
    consecutive rejections.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if denominator_bound < 1:
        raise ValueError("denominator_bound must be >= 1")
    rng = random.Random(seed)
    top = denominator_bound * denominator_bound
    max_rejects = 1000 + 10 * n
    seen: set[PlanePoint] = set()
    pts: list[PlanePoint] = []
    rejects = 0
    while len(pts) < n:
        coords = []
        for _ in range(2):
            a = rng.randint(-top, top)
            b = rng.randint(1, denominator_bound)
            coords.append(Fraction(a, b))
        p = PlanePoint(*coords)
        if p in seen:
            rejects += 1
            if rejects > max_rejects:
                raise ExhaustedSampling(
                    f"could not draw {n} distinct points with denominator_bound={denominator_bound}"
                )
            continue
        rejects = 0
        seen.add(p)
        pts.append(p)
    return PointConfig(f"random-{n}-s{seed}-b{denominator_bound}", tuple(pts), seed)


# --- persistence ---

def config_to_json(c: PointConfig) -> str:
    doc = {
        "name": c.name,
        "seed": c.seed,
        "points": [[format_rational(p.x), format_rational(p.y)] for p in c.points],
    }
    return json.dumps(doc, separators=(", ", ": "))


def config_from_json(text: str, source: str = "<string>") -> PointConfig:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedFile(f"{source}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise MalformedFile(f"{source}: top level must be an object")
    missing = [k for k in ("name", "points") if k not in doc]
    if missing:
        raise MalformedFile(f"{source}: missing field(s) {', '.join(missing)}")
    name = doc["name"]
    if not isinstance(name, str):
        raise MalformedFile(f"{source}: field 'name' must be a string")
    seed = doc.get("seed")
    if seed is not None and (not isinstance(seed, int) or isinstance(seed, bool)):
        raise MalformedFile(f"{source}: field 'seed' must be an integer or null")
    raw = doc["points"]
    if not isinstance(raw, list):
        raise MalformedFile(f"{source}: field 'points' must be a list")
    pts = []
    for i, entry in enumerate(raw):
        if not isinstance(entry, list) or len(entry) != 2:
            raise MalformedFile(f"{source}: points[{i}] must be a pair of coordinate strings")
        coords = []
        for j, v in enumerate(entry):
            if not isinstance(v, str):
                raise MalformedFile(f"{source}: points[{i}][{j}] must be a string, got {v!r}")
            try:
                coords.append(as_rational(v))
            except ValueError as exc:
                raise MalformedFile(f"{source}: points[{i}][{j}]: {exc}") from None
        pts.append(PlanePoint(*coords))
    return PointConfig(name, tuple(pts), seed)


def save_config(c: PointConfig, path: PathLike) -> None:
    Path(path).write_text(config_to_json(c) + "\n", encoding="utf-8")


def load_config(path: PathLike) -> PointConfig:
    return config_from_json(Path(path).read_text(encoding="utf-8"), source=str(path))
