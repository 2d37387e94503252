"""Degeneracy audits: largest coplanar family, largest concurrent family, regulus transversals."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from itertools import combinations
from typing import Optional

import numpy as np

from ..geometry import SpacePlane, SpacePoint, format_rational
from .incidence import IncidenceStructure

DEFAULT_REGULUS_BUDGET = 2_000_000


@dataclass
class DegeneracyReport:
    plane_max: int
    plane_witness: Optional[tuple[int, int, int, int]]
    concurrency_max: int
    concurrency_witness: Optional[SpacePoint]
    regulus_computed: bool
    regulus_max: Optional[int]
    regulus_witness: Optional[tuple[int, int, int]]
    regulus_triples: int

    def to_dict(self) -> dict:
        out = asdict(self)
        if self.concurrency_witness is not None:
            out["concurrency_witness"] = [format_rational(c) for c in self.concurrency_witness]
        if self.plane_witness is not None:
            out["plane_witness"] = list(self.plane_witness)
        if self.regulus_witness is not None:
            out["regulus_witness"] = list(self.regulus_witness)
        return out


def _coplanar_pairs(IS: IncidenceStructure) -> np.ndarray:
    pairs = [(i, j) for i, nb in enumerate(IS.neighbours) for j in nb if j > i]
    equal = set(IS.equal_pairs)
    for members in IS.direction_classes.values():
        pairs.extend(p for p in combinations(members, 2) if p not in equal)
    return np.array(sorted(pairs), dtype=np.int64).reshape(-1, 2)


def _plane_keys(IS: IncidenceStructure, pairs: np.ndarray) -> np.ndarray:
    d, b, den = IS.encoded()
    i, j = pairs[:, 0], pairs[:, 1]
    di, dj = d[i], d[j]
    par = (di == dj).all(axis=1)
    w = b[j] * den[i][:, None] - b[i] * den[j][:, None]
    normal = np.where(par[:, None], np.cross(di, w), np.cross(di, dj))
    keys = np.concatenate([normal * den[i][:, None], -(normal * b[i]).sum(axis=1)[:, None]], axis=1)
    g = np.gcd(np.gcd(keys[:, 0], keys[:, 1]), np.gcd(keys[:, 2], keys[:, 3]))
    keys = keys // g[:, None]
    lead = np.where(keys[:, 0] != 0, keys[:, 0], np.where(keys[:, 1] != 0, keys[:, 1], keys[:, 2]))
    sign = np.where(lead < 0, -1, 1)
    return keys * sign[:, None]


def lines_in_plane(IS: IncidenceStructure, plane: SpacePlane) -> list[int]:
    return [i for i, l in enumerate(IS.lines) if plane.contains_line(l)]


def audit_planes(IS: IncidenceStructure) -> tuple[int, Optional[SpacePlane]]:
    """Largest number of lines in one plane, with a witness plane.

    Every coplanar pair votes for its plane; a plane with m lines receives
    m(m-1)/2 votes.  The winner is confirmed by recounting its lines.
    """
    if IS.size == 0:
        return 0, None
    pairs = _coplanar_pairs(IS)
    if len(pairs) == 0:
        return 1, None
    keys = _plane_keys(IS, pairs)
    as_tuples = [tuple(int(v) for v in row) for row in keys.tolist()]
    votes: dict[tuple, int] = {}
    for key in as_tuples:
        votes[key] = votes.get(key, 0) + 1
    best_votes = max(votes.values())
    best = min(k for k, v in votes.items() if v == best_votes)
    plane = SpacePlane(best)  # type: ignore[arg-type]
    count = len(lines_in_plane(IS, plane))
    expected = (1 + math.isqrt(1 + 8 * best_votes)) // 2
    if count != expected:
        raise AssertionError(f"plane recount {count} disagrees with {best_votes} pair votes")
    return count, plane


def audit_concurrency(IS: IncidenceStructure) -> tuple[int, Optional[SpacePoint]]:
    if not IS.points:
        return (1 if IS.size else 0), None
    mults = IS.multiplicities()
    top = max(mults)
    return top, IS.points[mults.index(top)]


def audit_regulus(IS: IncidenceStructure, budget: int = DEFAULT_REGULUS_BUDGET):
    """Most lines of L meeting all three lines of a pairwise-skew triple.

    "Meeting" means coplanar (crossing or parallel), so transversals that
    are parallel to a ruling line still count.  Returns
    ``(computed, max, witness, triples_examined)``; when the number of
    pairwise-skew triples exceeds ``budget`` nothing is computed.
    """
    n = IS.size
    everyone = (1 << n) - 1
    near = [0] * n
    for i, nb in enumerate(IS.neighbours):
        for j in nb:
            near[i] |= 1 << j
    for members in IS.direction_classes.values():
        mask = 0
        for j in members:
            mask |= 1 << j
        for j in members:
            near[j] |= mask & ~(1 << j)
    skew = [everyone & ~near[i] & ~(1 << i) for i in range(n)]

    total = 0
    for i in range(n):
        above_i = skew[i] >> (i + 1) << (i + 1)
        rest = above_i
        while rest:
            low = rest & -rest
            j = low.bit_length() - 1
            rest ^= low
            total += bin(skew[j] & above_i >> (j + 1) << (j + 1)).count("1")
            if total > budget:
                return False, None, None, total

    best, witness = 0, None
    for i in range(n):
        above_i = skew[i] >> (i + 1) << (i + 1)
        rest = above_i
        while rest:
            low = rest & -rest
            j = low.bit_length() - 1
            rest ^= low
            common = near[i] & near[j]
            if bin(common).count("1") <= best:
                continue
            ks = skew[j] & above_i >> (j + 1) << (j + 1)
            while ks:
                lk = ks & -ks
                k = lk.bit_length() - 1
                ks ^= lk
                c = bin(common & near[k]).count("1")
                if c > best:
                    best, witness = c, (i, j, k)
    return True, best, witness, total


def audit(IS: IncidenceStructure, regulus_budget: int = DEFAULT_REGULUS_BUDGET) -> DegeneracyReport:
    plane_max, plane = audit_planes(IS)
    conc_max, point = audit_concurrency(IS)
    computed, reg_max, reg_witness, triples = audit_regulus(IS, regulus_budget)
    return DegeneracyReport(
        plane_max=plane_max,
        plane_witness=None if plane is None else plane.coefficients,
        concurrency_max=conc_max,
        concurrency_witness=point,
        regulus_computed=computed,
        regulus_max=reg_max,
        regulus_witness=reg_witness,
        regulus_triples=triples,
    )
