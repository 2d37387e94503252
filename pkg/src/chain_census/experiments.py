"""Plan-driven sweeps over configuration families, power-law fits and CSV/SVG output."""

from __future__ import annotations

import csv
import math
import re
import signal
import threading
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence
from xml.sax.saxutils import escape

import numpy as np

from ._parallel import pmap
from .census import ChainMode, GraphSpec, complete_graph, cycle_graph, delta_graph_census, delta_n_census, path_graph, star_graph
from .configs import PointConfig, gen_lattice, gen_random, gen_star_circles
from .energy import energy_chain, energy_graph
from .errors import ChainCensusError, InsufficientData, PlanInvalid

GENERATORS = ("lattice", "star", "random")
BUILTIN_GRAPHS = {
    "edge": path_graph(2),
    "path3": path_graph(3),
    "path4": path_graph(4),
    "triangle": cycle_graph(3),
    "cycle4": cycle_graph(4),
    "star3": star_graph(3),
    "k4": complete_graph(4),
}
_QUANTITY = re.compile(r"^(delta|energy|energy_lines)_(\d+)$|^(delta_graph|energy_graph):(\w+)$|^bound:(\w+)$")
CSV_HEADER = ("config", "points", "quantity", "mode", "value", "wall_time", "error")


@dataclass
class ExperimentPlan:
    generator: str
    sizes: list[int]
    quantities: list[str]
    params: dict = field(default_factory=dict)
    modes: list[str] = field(default_factory=lambda: ["proper"])
    budgets: dict = field(default_factory=dict)
    graphs: dict = field(default_factory=dict)
    workers: int = 1
    outputs: dict = field(default_factory=dict)

    @classmethod
    def from_dict(cls, doc: dict) -> "ExperimentPlan":
        try:
            gen = doc["generator"]
            plan = cls(
                generator=gen["name"],
                sizes=[int(v) for v in gen["sizes"]],
                params=dict(gen.get("params", {})),
                quantities=list(doc["quantities"]),
                modes=list(doc.get("modes", ["proper"])),
                budgets=dict(doc.get("budgets", {})),
                graphs=dict(doc.get("graphs", {})),
                workers=int(doc.get("workers", 1)),
                outputs=dict(doc.get("outputs", {})),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise PlanInvalid(f"malformed plan: {exc}") from None
        plan.validate()
        return plan

    def graph(self, name: str) -> GraphSpec:
        if name in self.graphs:
            return GraphSpec.from_dict(self.graphs[name])
        return BUILTIN_GRAPHS[name]

    def validate(self) -> None:
        if self.generator not in GENERATORS:
            raise PlanInvalid(f"unknown generator {self.generator!r}")
        if not self.sizes:
            raise PlanInvalid("size ladder is empty")
        if any(b <= a for a, b in zip(self.sizes, self.sizes[1:])):
            raise PlanInvalid("size ladder must be strictly increasing")
        if not self.quantities:
            raise PlanInvalid("quantity list is empty")
        for mode in self.modes:
            try:
                ChainMode.parse(mode)
            except ValueError:
                raise PlanInvalid(f"unknown mode {mode!r}") from None
        for q in self.quantities:
            m = _QUANTITY.match(q)
            if not m:
                raise PlanInvalid(f"unknown quantity {q!r}")
            if m.group(4) and m.group(4) not in self.graphs and m.group(4) not in BUILTIN_GRAPHS:
                raise PlanInvalid(f"unknown graph {m.group(4)!r}")
            if m.group(5):
                from .lines import BOUND_IDS
                if m.group(5) not in BOUND_IDS:
                    raise PlanInvalid(f"unknown bound id {m.group(5)!r}")
        if self.generator == "star" and "radii" not in self.params:
            raise PlanInvalid("star generator needs params.radii")

    def make_config(self, size: int) -> PointConfig:
        if self.generator == "lattice":
            return gen_lattice(size)
        if self.generator == "star":
            return gen_star_circles(size, self.params["radii"])
        return gen_random(size, int(self.params.get("seed", 0)), int(self.params.get("denominator_bound", 100)))


@dataclass(frozen=True)
class ResultRow:
    config: str
    points: int
    quantity: str
    mode: str
    value: str
    wall_time: float
    error: str = ""

    @property
    def ok(self) -> bool:
        return not self.error

    def as_int(self) -> int:
        return int(self.value)


class CellTimeout(ChainCensusError):
    pass


@contextmanager
def _time_limit(seconds: Optional[float]):
    usable = seconds and hasattr(signal, "setitimer") and threading.current_thread() is threading.main_thread()
    if not usable:
        yield
        return

    def _raise(signum, frame):
        raise CellTimeout(f"cell exceeded {seconds}s")

    previous = signal.signal(signal.SIGALRM, _raise)
    signal.setitimer(signal.ITIMER_REAL, seconds)
    try:
        yield
    finally:
        signal.setitimer(signal.ITIMER_REAL, 0)
        signal.signal(signal.SIGALRM, previous)


def compute_quantity(config: PointConfig, quantity: str, mode: str, budgets: dict,
                     graph: Optional[GraphSpec] = None) -> int:
    """The exact integer value of one plan quantity on one configuration."""
    m = _QUANTITY.match(quantity)
    if not m:
        raise PlanInvalid(f"unknown quantity {quantity!r}")
    mode_ = ChainMode.parse(mode)
    kind, n, gkind, _, bound = m.groups()
    assignments = int(budgets.get("assignments", 10_000_000))
    if kind == "delta":
        return delta_n_census(config, int(n), mode_, budget=int(budgets.get("states", 20_000_000)))[0]
    if kind == "energy":
        return energy_chain(config, int(n), mode_)
    if kind == "energy_lines":
        from .lines import energy_via_lines
        return energy_via_lines(config, int(n), mode_)
    if gkind == "delta_graph":
        return delta_graph_census(config, graph, mode_, budget=assignments)
    if gkind == "energy_graph":
        return energy_graph(config, graph, mode_, budget=assignments)
    from .lines import audit, bound_report, build_incidence, build_lines
    IS = build_incidence(build_lines(config, include_diagonal=True), budget=int(budgets.get("lines", 10_000)))
    rep = audit(IS, regulus_budget=int(budgets.get("regulus", 0)))
    report = bound_report(IS, bound, audit=rep)
    return report.rows[0].measured if report.rows else 0


def _run_cell(config: PointConfig, quantity: str, mode: str, budgets: dict, graph) -> ResultRow:
    start = time.perf_counter()
    try:
        with _time_limit(budgets.get("time_limit")):
            value = compute_quantity(config, quantity, mode, budgets, graph)
        return ResultRow(config.name, len(config), quantity, mode, str(value), time.perf_counter() - start)
    except (ChainCensusError, ValueError, MemoryError) as exc:
        return ResultRow(config.name, len(config), quantity, mode, "", time.perf_counter() - start,
                         f"{type(exc).__name__}: {exc}")


def run_plan(plan: ExperimentPlan, workers: Optional[int] = None) -> list[ResultRow]:
    """Evaluate every (size, quantity, mode) cell; failures become error rows."""
    plan.validate()
    workers = plan.workers if workers is None else workers
    jobs = []
    for size in plan.sizes:
        config = plan.make_config(size)
        for q in plan.quantities:
            m = _QUANTITY.match(q)
            graph = plan.graph(m.group(4)) if m.group(4) else None
            for mode in plan.modes:
                jobs.append((config, q, mode, plan.budgets, graph))
    rows = pmap(_run_cell, jobs, workers)
    order = {q: k for k, q in enumerate(plan.quantities)}
    return sorted(rows, key=lambda r: (r.points, r.config, order[r.quantity], r.mode))


@dataclass(frozen=True)
class FitSummary:
    quantity: str
    slope: float
    intercept: float
    residual: float
    count: int
    gamma: float = 0.0

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def fit_exponent(rows: Sequence[ResultRow], quantity: str, *, gamma: float = 0.0,
                 mode: Optional[str] = None) -> FitSummary:
    """Least-squares slope of log(value * log(|P|)^gamma) against log |P|.

    With gamma = 0 this is the plain power-law exponent.  The residual is
    the root-mean-square deviation of the fitted log values.
    """
    xs, ys = [], []
    for r in rows:
        if r.quantity != quantity or not r.ok or (mode is not None and r.mode != mode):
            continue
        v = int(r.value)
        if v <= 0:
            continue
        x = math.log(r.points)
        xs.append(x)
        ys.append(math.log(v) + gamma * math.log(max(1.0, x)))
    if len(xs) < 3:
        raise InsufficientData(f"{quantity}: need at least 3 positive rows, have {len(xs)}")
    X = np.column_stack([np.asarray(xs), np.ones(len(xs))])
    (slope, intercept), *_ = np.linalg.lstsq(X, np.asarray(ys), rcond=None)
    resid = np.asarray(ys) - (slope * np.asarray(xs) + intercept)
    rms = float(np.sqrt(np.mean(resid**2)))
    return FitSummary(quantity, float(slope), float(intercept), rms, len(xs), gamma)


def emit_csv(rows: Sequence[ResultRow], path) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(CSV_HEADER)
        for r in rows:
            w.writerow([r.config, r.points, r.quantity, r.mode, r.value, f"{r.wall_time:.6f}", r.error])


def load_rows(path) -> list[ResultRow]:
    with Path(path).open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != CSV_HEADER:
            raise ValueError(f"{path}: unexpected header {reader.fieldnames}")
        return [
            ResultRow(d["config"], int(d["points"]), d["quantity"], d["mode"], d["value"],
                      float(d["wall_time"]), d["error"])
            for d in reader
        ]


def emit_svg_loglog(rows: Sequence[ResultRow], fit: Optional[FitSummary], path, *,
                    width: int = 640, height: int = 480) -> None:
    """Scatter of (log |P|, log value) with the fitted line, as a standalone SVG 1.1 file."""
    quantity = fit.quantity if fit else None
    pts = [(math.log(r.points), math.log(int(r.value))) for r in rows
           if r.ok and (quantity is None or r.quantity == quantity) and int(r.value) > 0]
    if not pts:
        raise ValueError("no positive rows to plot")
    margin = 60
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    if fit:
        y0 = min(y0, fit.slope * x0 + fit.intercept)
        y1 = max(y1, fit.slope * x1 + fit.intercept)
    if x1 == x0:
        x0, x1 = x0 - 0.5, x1 + 0.5
    if y1 == y0:
        y0, y1 = y0 - 0.5, y1 + 0.5

    def sx(x):
        return margin + (x - x0) / (x1 - x0) * (width - 2 * margin)

    def sy(y):
        return height - margin - (y - y0) / (y1 - y0) * (height - 2 * margin)

    title = quantity or (rows[0].quantity if rows else "")
    out = [
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{margin}" y1="{height - margin}" x2="{width - margin}" y2="{height - margin}" stroke="black"/>',
        f'<line x1="{margin}" y1="{margin}" x2="{margin}" y2="{height - margin}" stroke="black"/>',
        f'<text x="{width / 2:.1f}" y="{margin / 2:.1f}" text-anchor="middle" font-size="16">'
        f'{escape(title)}</text>',
        f'<text x="{width / 2:.1f}" y="{height - 15}" text-anchor="middle" font-size="12">log |P|</text>',
        f'<text x="15" y="{height / 2:.1f}" text-anchor="middle" font-size="12" '
        f'transform="rotate(-90 15 {height / 2:.1f})">log value</text>',
    ]
    for k in range(5):
        xv = x0 + (x1 - x0) * k / 4
        yv = y0 + (y1 - y0) * k / 4
        out.append(f'<text x="{sx(xv):.1f}" y="{height - margin + 16}" text-anchor="middle" '
                   f'font-size="10">{xv:.2f}</text>')
        out.append(f'<text x="{margin - 6}" y="{sy(yv) + 3:.1f}" text-anchor="end" font-size="10">{yv:.2f}</text>')
    for x, y in pts:
        out.append(f'<circle cx="{sx(x):.2f}" cy="{sy(y):.2f}" r="4" fill="steelblue"/>')
    if fit:
        out.append(
            f'<line x1="{sx(x0):.2f}" y1="{sy(fit.slope * x0 + fit.intercept):.2f}" '
            f'x2="{sx(x1):.2f}" y2="{sy(fit.slope * x1 + fit.intercept):.2f}" stroke="firebrick"/>'
        )
        out.append(f'<text x="{width - margin}" y="{margin + 10}" text-anchor="end" font-size="12">'
                   f'slope {fit.slope:.4f} (rms {fit.residual:.2e}, n={fit.count})</text>')
    out.append("</svg>")
    Path(path).write_text("\n".join(out) + "\n", encoding="utf-8")
