"""Exact incidence structure of a line arrangement and the richness families built on it.

Pairwise classification runs on an integer encoding of the canonical lines:
each base point is stored as ``B / den`` with integer ``B`` and ``den > 0``,
directions are already primitive integers.  All comparisons are then
integer identities, evaluated with numpy in int64 when a magnitude bound
proves it safe and with Python integers otherwise.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .._parallel import chunk, pmap
from ..errors import MalformedNesting, SizeGuard
from ..geometry import SpaceLine, SpacePoint
from .rotation import RotationLine

DEFAULT_LINE_BUDGET = 10_000
_INT64_SAFE = 2**62

EQUAL, PARALLEL, INTERSECT = 0, 1, 2


def _encode(lines: Sequence[SpaceLine]):
    n = len(lines)
    dens = []
    bases = []
    for l in lines:
        den = math.lcm(*(c.denominator for c in l.base))
        dens.append(den)
        bases.append([int(c * den) for c in l.base])
    d = np.array([l.direction for l in lines], dtype=object).reshape(n, 3)
    b = np.array(bases, dtype=object).reshape(n, 3)
    den = np.array(dens, dtype=object)
    bb = max((abs(v) for v in b.flat), default=0)
    bd = max(dens, default=1)
    bD = max((abs(v) for v in d.flat), default=0)
    w = 2 * bb * bd
    c = 2 * bD * bD
    cc = 3 * c * c
    sn = 3 * (2 * w * bD) * c
    worst = max(3 * w * c, sn, bb * bd * cc + sn * bD, bd * bd * cc, 2 * w * bD)
    dtype = np.int64 if worst < _INT64_SAFE else object
    return d.astype(dtype), b.astype(dtype), den.astype(dtype)


def _classify_rows(d, b, den, rows: Sequence[int]):
    """Classify pairs (i, j), i in rows, j > i; returns (i, j, kind, point-key) tuples."""
    out = []
    for i in rows:
        dj, bj, nj = d[i + 1:], b[i + 1:], den[i + 1:]
        if len(dj) == 0:
            continue
        par = (dj == d[i]).all(axis=1)
        w = bj * den[i] - b[i][None, :] * nj[:, None]
        c = np.cross(np.broadcast_to(d[i], dj.shape), dj)
        trip = (w * c).sum(axis=1)
        for j in np.nonzero(par)[0].tolist():
            kind = EQUAL if not any(w[j]) else PARALLEL
            out.append((i, i + 1 + j, kind, None))
        hit = np.nonzero(~par & (trip == 0))[0]
        if len(hit) == 0:
            continue
        wh, ch, dh, nh = w[hit], c[hit], dj[hit], nj[hit]
        sn = (np.cross(wh, dh) * ch).sum(axis=1)
        cc = (ch * ch).sum(axis=1)
        x = b[i][None, :] * (nh * cc)[:, None] + sn[:, None] * d[i][None, :]
        h = den[i] * nh * cc
        g = np.gcd(np.gcd(np.gcd(x[:, 0], x[:, 1]), x[:, 2]), h)
        x = x // g[:, None]
        h = h // g
        for j, key in zip(hit.tolist(), zip(x[:, 0].tolist(), x[:, 1].tolist(), x[:, 2].tolist(), h.tolist())):
            out.append((i, i + 1 + j, INTERSECT, tuple(int(v) for v in key)))
    return out


@dataclass
class IncidenceStructure:
    """All pairwise meets of an arrangement, grouped exactly.

    ``points`` holds only points where at least two lines cross;
    ``point_lines[k]`` lists the lines through ``points[k]`` and
    ``line_points[i]`` the crossing points on line i.  ``neighbours[i]``
    are the lines crossing line i at a point (parallel lines are kept in
    ``direction_classes`` instead).
    """

    lines: list[SpaceLine]
    points: list[SpacePoint]
    point_lines: list[tuple[int, ...]]
    line_points: list[tuple[int, ...]]
    neighbours: list[tuple[int, ...]]
    direction_classes: dict[tuple[int, int, int], tuple[int, ...]]
    equal_pairs: list[tuple[int, int]]
    sources: Optional[list] = None
    _enc: tuple = field(default=None, repr=False)

    @property
    def size(self) -> int:
        return len(self.lines)

    def multiplicity(self, k: int) -> int:
        return len(self.point_lines[k])

    def multiplicities(self) -> list[int]:
        return [len(pl) for pl in self.point_lines]

    def parallel_partners(self, i: int) -> tuple[int, ...]:
        return tuple(j for j in self.direction_classes[self.lines[i].direction] if j != i)

    def ordered_intersect_pairs(self) -> int:
        return sum(len(nb) for nb in self.neighbours)

    def encoded(self):
        if self._enc is None:
            self._enc = _encode(self.lines)
        return self._enc


def build_incidence(
    lines: Sequence[Union[SpaceLine, RotationLine]],
    *,
    workers: int = 1,
    budget: int = DEFAULT_LINE_BUDGET,
) -> IncidenceStructure:
    if len(lines) > budget:
        raise SizeGuard(f"{len(lines)} lines exceed budget {budget}")
    sources = None
    if lines and isinstance(lines[0], RotationLine):
        sources = [l.source for l in lines]
        geo = [l.geometry for l in lines]
    else:
        geo = list(lines)
    n = len(geo)
    enc = _encode(geo)
    d, b, den = enc
    # interleave rows so that chunks get similar amounts of work
    order = list(range(n))
    parts = [order[k::max(1, workers)] for k in range(max(1, min(workers, n)))] if n else []
    results = pmap(_classify_rows, [(d, b, den, part) for part in parts], workers)
    records = sorted(r for part in results for r in part)

    groups: dict[tuple, set] = {}
    neighbours: list[list[int]] = [[] for _ in range(n)]
    equal_pairs = []
    for i, j, kind, key in records:
        if kind == INTERSECT:
            s = groups.setdefault(key, set())
            s.add(i)
            s.add(j)
            neighbours[i].append(j)
            neighbours[j].append(i)
        elif kind == EQUAL:
            equal_pairs.append((i, j))
    keys = sorted(groups)
    points = [SpacePoint(Fraction(k[0], k[3]), Fraction(k[1], k[3]), Fraction(k[2], k[3])) for k in keys]
    point_lines = [tuple(sorted(groups[k])) for k in keys]
    line_points: list[list[int]] = [[] for _ in range(n)]
    for idx, pl in enumerate(point_lines):
        for i in pl:
            line_points[i].append(idx)
    classes: dict[tuple, list[int]] = {}
    for i, l in enumerate(geo):
        classes.setdefault(l.direction, []).append(i)
    return IncidenceStructure(
        lines=geo,
        points=points,
        point_lines=point_lines,
        line_points=[tuple(lp) for lp in line_points],
        neighbours=[tuple(sorted(nb)) for nb in neighbours],
        direction_classes={k: tuple(v) for k, v in sorted(classes.items())},
        equal_pairs=equal_pairs,
        sources=sources,
        _enc=enc,
    )


# --- dyadic helpers ---

def dyadic_values(start: int, top: int) -> list[int]:
    """Powers of two t >= start (start itself if a power of two) with t <= top."""
    out = []
    t = 1
    while t < start:
        t *= 2
    while t <= top:
        out.append(t)
        t *= 2
    return out


def in_dyadic(value: int, t: int) -> bool:
    return t <= value < 2 * t


# --- rich points and lines ---

def rich_points(IS: IncidenceStructure, t: int) -> list[int]:
    """Indices of points with at least t lines through them."""
    return [k for k, pl in enumerate(IS.point_lines) if len(pl) >= t]


def dyadic_rich_points(IS: IncidenceStructure, t: int) -> list[int]:
    """Indices of points with between t (inclusive) and 2t (exclusive) lines."""
    return [k for k, pl in enumerate(IS.point_lines) if in_dyadic(len(pl), t)]


def rich_lines_kt(IS: IncidenceStructure, k: int, t: int) -> list[int]:
    """Lines carrying [t, 2t) points whose multiplicity lies in [k, 2k)."""
    out = []
    for i, pts in enumerate(IS.line_points):
        count = sum(1 for p in pts if in_dyadic(len(IS.point_lines[p]), k))
        if in_dyadic(count, t):
            out.append(i)
    return out


# --- nested families ---

@dataclass(frozen=True)
class Family:
    kind: str  # "points" or "lines"
    members: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.members)


def points_in(IS: IncidenceStructure, t: int, lines: Iterable[int], count: str = "M") -> Family:
    """P_t(M).

    ``count="M"`` (default): points with [t, 2t) lines of M through them.
    ``count="L"``: points where at least two lines of M meet and which have
    [t, 2t) lines of the whole arrangement through them.
    """
    member = set(lines)
    out = []
    for k, pl in enumerate(IS.point_lines):
        inside = sum(1 for i in pl if i in member)
        if count == "M":
            if in_dyadic(inside, t):
                out.append(k)
        elif count == "L":
            if inside >= 2 and in_dyadic(len(pl), t):
                out.append(k)
        else:
            raise ValueError(f"unknown point counter {count!r}")
    return Family("points", tuple(out))


def lines_meeting(IS: IncidenceStructure, s: int, lines: Iterable[int]) -> Family:
    """L_s(M): lines of L crossing [s, 2s) distinct lines of M (other than themselves)."""
    member = set(lines)
    out = [i for i, nb in enumerate(IS.neighbours) if in_dyadic(sum(1 for j in nb if j in member), s)]
    return Family("lines", tuple(out))


def lines_through_points(IS: IncidenceStructure, s: int, points: Iterable[int]) -> Family:
    """L_s(P'): lines of L containing [s, 2s) points of P'."""
    member = set(points)
    out = [i for i, pts in enumerate(IS.line_points) if in_dyadic(sum(1 for p in pts if p in member), s)]
    return Family("lines", tuple(out))


_TOKEN = re.compile(r"\s*(?:(P|L)_(\d+)|(L|M)\b|(\()|(\)))")


def parse_nesting(text: str):
    """Parse expressions like ``P_2(L_4)``, ``L_1(P_2(L_4(M)))`` into a nested tuple.

    Grammar: ``L`` | ``M`` | ``P_t(expr)`` | ``L_s`` | ``L_s(expr)``; a bare
    ``L_s`` means ``L_s(L)``.
    """
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise MalformedNesting(f"unexpected input at {pos}: {text[pos:]!r}")
        tokens.append(m.groups())
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1

    def expr(k):
        if k >= len(tokens):
            raise MalformedNesting("unexpected end of expression")
        op, num, atom, lp, rp = tokens[k]
        if atom:
            return atom, k + 1
        if not op:
            raise MalformedNesting(f"unexpected token at position {k}")
        value = int(num)
        if value < 1:
            raise MalformedNesting("thresholds must be >= 1")
        if k + 1 < len(tokens) and tokens[k + 1][3]:
            inner, k2 = expr(k + 2)
            if k2 >= len(tokens) or not tokens[k2][4]:
                raise MalformedNesting("missing ')'")
            return (op, value, inner), k2 + 1
        if op == "P":
            raise MalformedNesting("P_t needs an argument")
        return (op, value, "L"), k + 1

    tree, end = expr(0)
    if end != len(tokens):
        raise MalformedNesting("trailing tokens")
    return tree


def nested_sets(IS: IncidenceStructure, specification, M: Optional[Iterable[int]] = None,
                count: str = "M") -> Family:
    """Evaluate a nesting expression (string or nested tuple) to a point or line family."""
    tree = parse_nesting(specification) if isinstance(specification, str) else specification
    cache: dict = {}
    base_m = None if M is None else tuple(sorted(set(M)))

    def ev(node) -> Family:
        if node == "L":
            return Family("lines", tuple(range(IS.size)))
        if node == "M":
            if base_m is None:
                raise MalformedNesting("expression uses M but no line subset was given")
            return Family("lines", base_m)
        if not (isinstance(node, tuple) and len(node) == 3):
            raise MalformedNesting(f"bad node {node!r}")
        key = node
        if key in cache:
            return cache[key]
        op, value, inner = node
        arg = ev(inner)
        if op == "P":
            if arg.kind != "lines":
                raise MalformedNesting("P_t expects a line family")
            fam = points_in(IS, value, arg.members, count)
        elif op == "L":
            if arg.kind == "lines":
                fam = lines_meeting(IS, value, arg.members)
            else:
                fam = lines_through_points(IS, value, arg.members)
        else:
            raise MalformedNesting(f"unknown operator {op!r}")
        cache[key] = fam
        return fam

    return ev(tree)


# --- iterated rich lines ---

def _count_against(IS: IncidenceStructure, i: int, member: set, counter: str) -> int:
    if counter == "lines":
        return sum(1 for j in IS.neighbours[i] if j in member)
    if counter == "points":
        return sum(
            1 for p in IS.line_points[i]
            if any(j != i and j in member for j in IS.point_lines[p])
        )
    raise ValueError(f"unknown counter {counter!r}")


def iterated_lines(IS: IncidenceStructure, thresholds: Sequence[int], counter: str = "lines") -> list[int]:
    """The family of lines built from the innermost threshold outwards.

    The last threshold selects lines with at least that many crossings
    with L; each earlier threshold selects lines with at least that many
    crossings with the family built so far.  ``counter="lines"`` counts
    distinct crossing lines, ``counter="points"`` distinct crossing points.
    """
    if not thresholds:
        raise ValueError("need at least one threshold")
    family = set(range(IS.size))
    for t in reversed(list(thresholds)):
        family = {i for i in range(IS.size) if _count_against(IS, i, family, counter) >= t}
    return sorted(family)


# --- nu iterates and walks ---

@dataclass(frozen=True)
class NuTables:
    lines: dict[int, list[int]]
    points: dict[int, list[int]]


def nu_iterates(IS: IncidenceStructure, k_max: int) -> NuTables:
    """nu_k on lines and points for k = 1..k_max, starting from nu_0 = 1 on lines.

    nu_{k+1}(l) sums nu_k over the lines crossing l; nu_{k+1}(p) sums
    nu_k over the lines through p.  So nu_1(l) counts crossing lines and
    nu_1(p) is the multiplicity of p.
    """
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    prev = [1] * IS.size
    lines: dict[int, list[int]] = {}
    points: dict[int, list[int]] = {}
    for k in range(1, k_max + 1):
        points[k] = [sum(prev[i] for i in pl) for pl in IS.point_lines]
        cur = [sum(prev[j] for j in nb) for nb in IS.neighbours]
        lines[k] = cur
        prev = cur
    return NuTables(lines, points)


def line_walk_count(IS: IncidenceStructure, n: int, *, parallel: bool = True, stay: bool = True) -> int:
    """Number of (n+1)-tuples of lines whose consecutive members meet.

    Crossing lines always count as meeting; ``parallel`` adds distinct
    lines of equal direction and ``stay`` adds repeating the same line.
    """
    vec = [1] * IS.size
    for _ in range(n):
        nxt = []
        class_sum = {}
        if parallel:
            for direction, members in IS.direction_classes.items():
                class_sum[direction] = sum(vec[i] for i in members)
        for i, nb in enumerate(IS.neighbours):
            total = sum(vec[j] for j in nb)
            if parallel:
                total += class_sum[IS.lines[i].direction] - vec[i]
            if stay:
                total += vec[i]
            nxt.append(total)
        vec = nxt
    return sum(vec)
