"""Both-sides evaluation of the incidence bounds on a concrete arrangement.

Each report is a sweep over dyadic parameters.  A row carries the measured
count, the value of the bound's right-hand side with every hidden constant
set to 1, and their ratio.  Nothing is asserted about the ratios.  Rows
whose measured count is zero are omitted, so a sweep lists exactly the
support of the corresponding dyadic sum.

Logarithms are natural and clamped below at 1.
"""

from __future__ import annotations

import csv
import itertools
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

from ..errors import MissingAudit
from .audits import DegeneracyReport
from .incidence import (
    IncidenceStructure,
    dyadic_values,
    in_dyadic,
    iterated_lines,
    line_walk_count,
    rich_lines_kt,
    rich_points,
)

BOUND_IDS = (
    "GuthKatz",
    "tRichPoints",
    "RichLines",
    "GenRichLines",
    "kRichLines",
    "IterativeLines",
    "EnergyEstimate",
)
_NEEDS_S = {"GuthKatz", "tRichPoints", "GenRichLines", "kRichLines"}


@dataclass
class BoundRow:
    params: dict
    measured: int
    expression: float
    extra: dict = field(default_factory=dict)

    @property
    def ratio(self) -> float:
        return self.measured / self.expression


@dataclass
class BoundReport:
    bound_id: str
    param_names: tuple[str, ...]
    rows: list[BoundRow]
    metadata: dict

    def to_dict(self) -> dict:
        return {
            "bound_id": self.bound_id,
            "metadata": self.metadata,
            "rows": [
                {**r.params, "measured": str(r.measured), "expression": repr(r.expression),
                 "ratio": repr(r.ratio), **{k: str(v) for k, v in r.extra.items()}}
                for r in self.rows
            ],
        }


def clamped_log(x: float) -> float:
    return max(1.0, math.log(x)) if x > 0 else 1.0


def resolve_s(IS: IncidenceStructure, audit: Optional[DegeneracyReport], s: Optional[int]) -> tuple[int, str]:
    """The s parameter and where it came from.

    Defaults to the largest of the plane audit, the concurrency audit, the
    regulus audit (when computed) and ceil(sqrt|L|).
    """
    if s is not None:
        return int(s), "override"
    if audit is None:
        raise MissingAudit("this bound needs s: pass an audit report or an explicit s")
    candidates = [
        ("plane", audit.plane_max),
        ("concurrency", audit.concurrency_max),
    ]
    if audit.regulus_computed and audit.regulus_max is not None:
        candidates.append(("regulus", audit.regulus_max))
    candidates.append(("sqrt|L|", math.isqrt(max(IS.size - 1, 0)) + 1 if IS.size else 0))
    best = max(v for _, v in candidates)
    source = next(name for name, v in candidates if v == best)
    return best, source


# --- dyadic splitting used by the energy estimate ---

def _split_points(IS: IncidenceStructure, members: Sequence[int]) -> dict[int, list[int]]:
    member = set(members)
    out: dict[int, list[int]] = {}
    for k, pl in enumerate(IS.point_lines):
        c = sum(1 for i in pl if i in member)
        if c:
            out.setdefault(1 << (c.bit_length() - 1), []).append(k)
    return out


def _split_lines_meeting(IS: IncidenceStructure, members: Sequence[int]) -> dict[int, list[int]]:
    member = set(members)
    out: dict[int, list[int]] = {}
    for i, nb in enumerate(IS.neighbours):
        c = sum(1 for j in nb if j in member)
        if c:
            out.setdefault(1 << (c.bit_length() - 1), []).append(i)
    return out


def _split_lines_through(IS: IncidenceStructure, points: Sequence[int]) -> dict[int, list[int]]:
    member = set(points)
    out: dict[int, list[int]] = {}
    for i, pts in enumerate(IS.line_points):
        c = sum(1 for p in pts if p in member)
        if c:
            out.setdefault(1 << (c.bit_length() - 1), []).append(i)
    return out


def energy_estimate_sum(IS: IncidenceStructure, n: int) -> int:
    """The dyadic sum (without the log prefactor) bounding the n-chain line energy.

    Odd n: sum of |P_t1(L_t2(...L_tk))| (t1...tk)^2 with k = (n+1)/2.
    Even n: sum of |L_t1(P_t2(L_t3(...L_tk)))| (t1...tk)^2 with k = (n+2)/2.
    """
    k = (n + 1) // 2 if n % 2 else (n + 2) // 2
    meeting_levels = k - 1 if n % 2 else k - 2
    families = [(1, list(range(IS.size)))]
    for _ in range(meeting_levels):
        nxt = []
        for w, fam in families:
            for s, sub in _split_lines_meeting(IS, fam).items():
                nxt.append((w * s * s, sub))
        families = nxt
    total = 0
    for w, fam in families:
        for t, pts in _split_points(IS, fam).items():
            if n % 2:
                total += w * t * t * len(pts)
            else:
                for s, lines in _split_lines_through(IS, pts).items():
                    total += w * t * t * s * s * len(lines)
    return total


# --- reports ---

def bound_report(
    IS: IncidenceStructure,
    bound_id: str,
    *,
    audit: Optional[DegeneracyReport] = None,
    s: Optional[int] = None,
    values: Optional[Sequence[int]] = None,
    depth: int = 2,
    counter: str = "points",
    n_max: int = 3,
) -> BoundReport:
    """Sweep one bound over its dyadic parameters.

    ``values`` overrides the dyadic parameter ladder (an empty list gives
    an empty report).  ``depth``/``counter`` apply to IterativeLines and
    ``n_max`` to EnergyEstimate.
    """
    if bound_id not in BOUND_IDS:
        raise ValueError(f"unknown bound id {bound_id!r}; expected one of {', '.join(BOUND_IDS)}")
    size = IS.size
    logL = clamped_log(size)
    meta = {"lines": size, "log_L": logL, "points": len(IS.points)}
    if bound_id in _NEEDS_S:
        s_val, s_src = resolve_s(IS, audit, s)
        meta.update({"s": s_val, "s_source": s_src})
    if audit is not None:
        meta.update({
            "plane_max": audit.plane_max,
            "concurrency_max": audit.concurrency_max,
            "regulus_max": audit.regulus_max if audit.regulus_computed else "not computed",
        })
    mults = IS.multiplicities()
    top_mult = max(mults, default=0)
    nu1 = [len(nb) for nb in IS.neighbours]
    rows: list[BoundRow] = []

    def ladder(start: int, top: int) -> list[int]:
        return list(values) if values is not None else dyadic_values(start, top)

    if bound_id == "GuthKatz":
        names = ("t",)
        for t in ladder(2, top_mult):
            pts = rich_points(IS, t)
            if not pts:
                continue
            inc = sum(mults[p] for p in pts)
            npts = len(pts)
            expr = size ** 0.75 * npts ** 0.5 + s_val ** (1 / 3) * size ** (1 / 3) * npts ** (2 / 3) + size + npts
            rows.append(BoundRow({"t": t}, inc, expr, {"rich_points": npts}))
    elif bound_id == "tRichPoints":
        names = ("t",)
        for t in ladder(2, top_mult):
            count = len(rich_points(IS, t))
            if count:
                expr = size ** 1.5 / t**2 + s_val * size / t**3 + size / t
                rows.append(BoundRow({"t": t}, count, expr))
    elif bound_id in ("RichLines", "GenRichLines"):
        names = ("k", "t")
        max_on_line = max((len(lp) for lp in IS.line_points), default=0)
        ks = ladder(2, top_mult)
        ts = list(values) if values is not None else dyadic_values(1, max_on_line)
        for k, t in itertools.product(ks, ts):
            count = len(rich_lines_kt(IS, k, t))
            if not count:
                continue
            if bound_id == "RichLines":
                expr = size**2 / (k * k * t * t)
                extra = {"measured_scaled": count * k * k * t * t, "L_squared": size * size}
            else:
                expr = size * s_val**2 / (k * k * t * t) + size * s_val * clamped_log(s_val) / (k * t)
                extra = {}
            rows.append(BoundRow({"k": k, "t": t}, count, expr, extra))
    elif bound_id == "kRichLines":
        names = ("r",)
        for r in ladder(1, max(nu1, default=0)):
            count = sum(1 for v in nu1 if v >= r)
            if count:
                expr = size * s_val**2 * logL**2 / r**2 + size * s_val * logL**3 / r
                rows.append(BoundRow({"r": r}, count, expr))
    elif bound_id == "IterativeLines":
        names = ("depth", "thresholds", "counter")
        root = math.sqrt(size)
        steps = ladder(1, max(nu1, default=0))
        for d in range(1, depth + 1):
            for ts in itertools.product(steps, repeat=d):
                fam = iterated_lines(IS, ts, counter)
                if not fam:
                    continue
                big = [t for t in ts if t >= root]
                small = [t for t in ts if t < root]
                j, k = len(big), len(small)
                expr = (size * size ** (j / 2) * size**k * logL ** (2 * k + 3 * j)
                        / (math.prod(big) * math.prod(t * t for t in small)))
                rows.append(BoundRow({"depth": d, "thresholds": ";".join(map(str, ts)), "counter": counter},
                                     len(fam), expr))
    else:  # EnergyEstimate
        names = ("n",)
        for n in (list(values) if values is not None else range(1, n_max + 1)):
            crossing = line_walk_count(IS, n, parallel=False, stay=False)
            if not crossing:
                continue
            full = line_walk_count(IS, n, parallel=True, stay=True)
            dyadic = energy_estimate_sum(IS, n)
            power = (n - 1) // 2 if n % 2 else n // 2
            rows.append(BoundRow({"n": n}, crossing, logL**power * dyadic, {
                "dyadic_sum": dyadic,
                "energy_all_meets": full,
                "translation_share": repr(1 - crossing / full) if full else "nan",
            }))
    return BoundReport(bound_id, names, rows, meta)


def write_report_csv(report: BoundReport, path) -> None:
    extras: list[str] = []
    for r in report.rows:
        for k in r.extra:
            if k not in extras:
                extras.append(k)
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["bound_id", *report.param_names, "measured", "expression", "ratio", *extras])
        for r in report.rows:
            writer.writerow([report.bound_id, *(r.params[p] for p in report.param_names),
                             r.measured, repr(r.expression), repr(r.ratio),
                             *(r.extra.get(k, "") for k in extras)])


# --- independent recount ---

class _PointTableView:
    """Per-line statistics rebuilt from the point -> lines table alone."""

    def __init__(self, IS: IncidenceStructure):
        self.size = IS.size
        self.point_lines = [tuple(pl) for pl in IS.point_lines]
        self.on_line: list[list[int]] = [[] for _ in range(self.size)]
        self.crossing: list[set[int]] = [set() for _ in range(self.size)]
        for k, pl in enumerate(self.point_lines):
            for i in pl:
                self.on_line[i].append(k)
                self.crossing[i].update(j for j in pl if j != i)

    def iterated(self, ts, counter) -> set[int]:
        fam = set(range(self.size))
        for t in reversed(ts):
            if counter == "lines":
                fam = {i for i in range(self.size) if len(self.crossing[i] & fam) >= t}
            else:
                fam = {
                    i for i in range(self.size)
                    if sum(1 for k in self.on_line[i] if any(j != i and j in fam for j in self.point_lines[k])) >= t
                }
        return fam

    def crossing_walks(self, n: int) -> int:
        vec = [1] * self.size
        for _ in range(n):
            vec = [sum(vec[j] for j in self.crossing[i]) for i in range(self.size)]
        return sum(vec)


def recount_measured(IS: IncidenceStructure, report: BoundReport) -> list[tuple[int, int, int]]:
    """Recompute every measured cell from the point table; return (row, reported, recounted) mismatches."""
    view = _PointTableView(IS)
    mults = [len(pl) for pl in view.point_lines]
    bad = []
    for idx, row in enumerate(report.rows):
        p = row.params
        bid = report.bound_id
        if bid == "GuthKatz":
            got = sum(m for m in mults if m >= p["t"])
        elif bid == "tRichPoints":
            got = sum(1 for m in mults if m >= p["t"])
        elif bid in ("RichLines", "GenRichLines"):
            got = sum(
                1 for i in range(view.size)
                if in_dyadic(sum(1 for k in view.on_line[i] if in_dyadic(mults[k], p["k"])), p["t"])
            )
        elif bid == "kRichLines":
            got = sum(1 for i in range(view.size) if len(view.crossing[i]) >= p["r"])
        elif bid == "IterativeLines":
            ts = [int(v) for v in str(p["thresholds"]).split(";")]
            got = len(view.iterated(ts, p["counter"]))
        elif bid == "EnergyEstimate":
            got = view.crossing_walks(p["n"])
        else:
            raise ValueError(bid)
        if got != row.measured:
            bad.append((idx, row.measured, got))
    return bad
