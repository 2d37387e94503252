"""Command-line entry point: ``chain-census gen|census|energy|lines|bounds|run|fit|plot``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from .census import ChainMode, GraphSpec, delta_graph_census, delta_n_census
from .configs import gen_lattice, gen_random, gen_star_circles, load_config, save_config
from .energy import check_cauchy_schwarz, energy_bruteforce, energy_graph
from .errors import ChainCensusError, InsufficientData, PlanInvalid
from .experiments import ExperimentPlan, emit_csv, emit_svg_loglog, fit_exponent, load_rows, run_plan
from .geometry import format_rational

EXIT_PLAN_INVALID = 2
EXIT_CELL_FAILURES = 3


def _write_json(doc: dict, out: Optional[str]) -> None:
    text = json.dumps(doc, indent=1)
    if out:
        Path(out).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)


def _load_graph(path: str) -> GraphSpec:
    return GraphSpec.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def _cmd_gen(args) -> int:
    if args.family == "lattice":
        config = gen_lattice(args.m)
    elif args.family == "star":
        config = gen_star_circles(args.count, [r for r in args.radii.split(",") if r])
    else:
        config = gen_random(args.n, args.seed, args.bound)
    save_config(config, args.out)
    return 0


def _cmd_census(args) -> int:
    config = load_config(args.config)
    mode = ChainMode.parse(args.mode)
    if args.kind == "chains":
        card, table = delta_n_census(config, args.n, mode, workers=args.workers)
        doc = {
            "config": config.name,
            "points": str(len(config)),
            "n": str(args.n),
            "mode": mode.value,
            "cardinality": str(card),
            "total": str(table.total()),
            "table": [{"signature": [format_rational(d) for d in sig], "count": str(c)}
                      for sig, c in table.counts.items()],
        }
    else:
        graph = _load_graph(args.graph)
        doc = {
            "config": config.name,
            "points": str(len(config)),
            "graph": graph.to_dict(),
            "mode": mode.value,
            "cardinality": str(delta_graph_census(config, graph, mode, workers=args.workers)),
        }
    _write_json(doc, args.out)
    return 0


def _cmd_energy(args) -> int:
    config = load_config(args.config)
    mode = ChainMode.parse(args.mode)
    if args.graph:
        graph = _load_graph(args.graph)
        doc = {
            "config": config.name,
            "graph": graph.to_dict(),
            "mode": mode.value,
            "energy": str(energy_graph(config, graph, mode, workers=args.workers)),
            "distinct": str(delta_graph_census(config, graph, mode, workers=args.workers)),
        }
    else:
        report = check_cauchy_schwarz(config, args.n, mode, workers=args.workers)
        doc = {"config": config.name, **report.to_dict()}
        if args.oracle:
            oracle = energy_bruteforce(config, args.n, mode)
            doc["oracle_energy"] = str(oracle)
            doc["oracle_agrees"] = oracle == report.energy
    _write_json(doc, args.out)
    return 0


def _arrangement_structure(path: str):
    from .lines import build_incidence
    from .lines.arrangement_io import load_arrangement

    _, lines, _ = load_arrangement(path)
    return build_incidence(lines)


def _cmd_lines(args) -> int:
    from .lines import audit, bound_report, build_lines, write_report_csv
    from .lines.arrangement_io import save_arrangement

    if args.action == "build":
        config = load_config(args.config)
        diagonal = args.diagonal == "on"
        save_arrangement(config, build_lines(config, include_diagonal=diagonal), diagonal, args.out)
        return 0
    IS = _arrangement_structure(args.arr)
    if args.action == "audit":
        _write_json(audit(IS, regulus_budget=args.regulus_budget).to_dict(), args.out)
        return 0
    rep = None if args.s is not None else audit(IS, regulus_budget=args.regulus_budget)
    report = bound_report(IS, args.bound, audit=rep, s=args.s)
    write_report_csv(report, args.out)
    return 0


def _cmd_run(args) -> int:
    try:
        plan = ExperimentPlan.from_dict(json.loads(Path(args.plan).read_text(encoding="utf-8")))
        rows = run_plan(plan, workers=args.workers)
    except (PlanInvalid, json.JSONDecodeError) as exc:
        print(f"invalid plan: {exc}", file=sys.stderr)
        return EXIT_PLAN_INVALID
    out = args.out or plan.outputs.get("csv")
    if out:
        emit_csv(rows, out)
    else:
        for r in rows:
            print(f"{r.config}\t{r.points}\t{r.quantity}\t{r.mode}\t{r.value}\t{r.error}")
    svg = plan.outputs.get("svg")
    if svg:
        q = plan.outputs.get("fit", plan.quantities[0])
        try:
            emit_svg_loglog(rows, fit_exponent(rows, q), svg)
        except InsufficientData as exc:
            print(f"no plot: {exc}", file=sys.stderr)
    failures = [r for r in rows if not r.ok]
    for r in failures:
        print(f"cell failed: {r.config} {r.quantity} {r.mode}: {r.error}", file=sys.stderr)
    return EXIT_CELL_FAILURES if failures else 0


def _cmd_fit(args) -> int:
    fit = fit_exponent(load_rows(args.rows), args.quantity, gamma=args.gamma, mode=args.mode)
    _write_json(fit.to_dict(), args.out)
    return 0


def _cmd_plot(args) -> int:
    rows = load_rows(args.rows)
    emit_svg_loglog(rows, fit_exponent(rows, args.quantity, gamma=args.gamma, mode=args.mode), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="chain-census", description="Exact distance-chain statistics of planar point sets.")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a point configuration")
    gsub = g.add_subparsers(dest="family", required=True)
    gl = gsub.add_parser("lattice", help="m x m integer grid")
    gl.add_argument("--m", type=int, required=True)
    gs = gsub.add_parser("star", help="origin plus rational points on concentric circles")
    gs.add_argument("--count", type=int, required=True)
    gs.add_argument("--radii", required=True, help="comma-separated rationals, e.g. 1,2,3/2")
    gr = gsub.add_parser("random", help="seeded random rational points")
    gr.add_argument("--n", type=int, required=True)
    gr.add_argument("--seed", type=int, required=True)
    gr.add_argument("--bound", type=int, default=100, help="denominator bound")
    for q in (gl, gs, gr):
        q.add_argument("--out", required=True)
    g.set_defaults(func=_cmd_gen)

    c = sub.add_parser("census", help="distinct chain or graph distance sets")
    csub = c.add_subparsers(dest="kind", required=True)
    cc = csub.add_parser("chains")
    cc.add_argument("--n", type=int, required=True)
    cg = csub.add_parser("graph")
    cg.add_argument("--graph", required=True, help='JSON {"m": int, "edges": [[i, j], ...]}')
    for q in (cc, cg):
        q.add_argument("--config", required=True)
        q.add_argument("--mode", default="repeats", choices=["repeats", "proper"])
        q.add_argument("--workers", type=int, default=1)
        q.add_argument("--out")
    c.set_defaults(func=_cmd_census)

    e = sub.add_parser("energy", help="chain or graph energy with the Cauchy-Schwarz check")
    e.add_argument("--config", required=True)
    e.add_argument("--n", type=int, default=1)
    e.add_argument("--mode", default="repeats", choices=["repeats", "proper"])
    e.add_argument("--oracle", action="store_true", help="also run the enumeration oracle")
    e.add_argument("--graph")
    e.add_argument("--workers", type=int, default=1)
    e.add_argument("--out")
    e.set_defaults(func=_cmd_energy)

    def bounds_args(q):
        from .lines import BOUND_IDS
        q.add_argument("--arr", required=True)
        q.add_argument("--bound", required=True, choices=list(BOUND_IDS))
        q.add_argument("--s", type=int, help="degeneracy parameter; skips the audit")
        q.add_argument("--regulus-budget", type=int, default=0)
        q.add_argument("--out", required=True)

    ln = sub.add_parser("lines", help="rotation-line arrangements")
    lsub = ln.add_subparsers(dest="action", required=True)
    lb = lsub.add_parser("build")
    lb.add_argument("--config", required=True)
    lb.add_argument("--diagonal", choices=["on", "off"], default="on")
    lb.add_argument("--out", required=True)
    la = lsub.add_parser("audit")
    la.add_argument("--arr", required=True)
    la.add_argument("--regulus-budget", type=int, default=2_000_000)
    la.add_argument("--out")
    bounds_args(lsub.add_parser("bounds"))
    ln.set_defaults(func=_cmd_lines)

    b = sub.add_parser("bounds", help="same as 'lines bounds'")
    bounds_args(b)
    b.set_defaults(func=_cmd_lines, action="bounds")

    r = sub.add_parser("run", help="run an experiment plan (JSON)")
    r.add_argument("--plan", required=True)
    r.add_argument("--workers", type=int)
    r.add_argument("--out", help="CSV path; overrides the plan's outputs.csv")
    r.set_defaults(func=_cmd_run)

    for name, fn, helptext in (("fit", _cmd_fit, "fit a log-log slope to CSV rows"),
                               ("plot", _cmd_plot, "log-log SVG of CSV rows with the fitted line")):
        q = sub.add_parser(name, help=helptext)
        q.add_argument("--rows", required=True)
        q.add_argument("--quantity", required=True)
        q.add_argument("--mode")
        q.add_argument("--gamma", type=float, default=0.0)
        q.add_argument("--out", required=name == "plot")
        q.set_defaults(func=fn)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except PlanInvalid as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PLAN_INVALID
    except (ChainCensusError, ValueError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
