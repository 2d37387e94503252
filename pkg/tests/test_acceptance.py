"""Acceptance gate: one check per criterion, each printing a PASS/FAIL line.

Every ``crit_NN(workers)`` returns ``{"ok": bool, "values": ..., "detail": str}``.
``values`` holds only exact outputs (no timings) so criterion 14 can compare
the serialized bytes produced at 1 and 8 workers.

Run standalone with ``python tests/test_acceptance.py``.
"""

from __future__ import annotations

import json
import math
import random
import time
from fractions import Fraction
from itertools import product

import pytest

from chain_census.census import (
    ChainMode,
    census_bruteforce,
    chain_mass,
    connected_graphs,
    delta_graph_census,
    delta_n_census,
    spanning_tree,
    star_graph,
)
from chain_census.configs import gen_lattice, gen_star_circles, make_config
from chain_census.corpus import corpus_upto, standard_corpus
from chain_census.energy import (
    check_cauchy_schwarz,
    check_moment_inequalities,
    energy_bruteforce,
    energy_chain,
    energy_graph,
)
from chain_census.experiments import ExperimentPlan, ResultRow, fit_exponent, run_plan
from chain_census.geometry import MeetKind, PlanePoint, line_meet_classify, squared_distance
from chain_census.lines import (
    audit,
    bound_report,
    build_incidence,
    build_lines,
    dyadic_rich_points,
    energy_via_lines,
    meets,
    motion_at,
    recount_measured,
    rich_lines_kt,
    rotation_line,
)
from chain_census.lines.incidence import dyadic_values

MODES = (ChainMode.REPEATS, ChainMode.PROPER)


def _result(ok: bool, values, detail: str) -> dict:
    return {"ok": bool(ok), "values": values, "detail": detail}


def crit_01(workers: int) -> dict:
    values, bad = {}, []
    for config in corpus_upto(7):
        for mode in MODES:
            for n in range(1, 5):
                card, table = delta_n_census(config, n, mode, workers=workers)
                oracle = census_bruteforce(config, n, mode)
                if table != oracle or card != len(oracle):
                    bad.append((config.name, mode.value, n))
                values[f"{config.name}/{mode.value}/{n}"] = str(card)
    return _result(not bad, values, f"{len(values)} cases, mismatches {bad}")


def crit_02(workers: int) -> dict:
    values, bad = {}, []
    for config in corpus_upto(7):
        top = 4 if len(config) <= 5 else 3
        for mode in MODES:
            for n in range(1, top + 1):
                e = energy_chain(config, n, mode, workers=workers)
                if e != energy_bruteforce(config, n, mode):
                    bad.append((config.name, mode.value, n))
                values[f"{config.name}/{mode.value}/{n}"] = str(e)
    return _result(not bad, values, f"{len(values)} cases, mismatches {bad}")


def crit_03(workers: int) -> dict:
    values, bad = {}, []
    for config in standard_corpus():
        for mode in MODES:
            for n in range(1, 5):
                r = check_cauchy_schwarz(config, n, mode, workers=workers)
                if not r.holds or r.left != chain_mass(len(config), n, mode) ** 2:
                    bad.append((config.name, mode.value, n))
                values[f"{config.name}/{mode.value}/{n}"] = [str(r.left), str(r.right)]
    two = check_cauchy_schwarz(make_config("two", [(0, 0), (1, 0)]), 2, ChainMode.REPEATS, workers=workers)
    eq = (two.left, two.distinct, two.energy, two.equality) == (64, 4, 16, True)
    values["two/equality"] = [str(two.left), str(two.distinct), str(two.energy)]
    return _result(not bad and eq, values, f"violations {bad}; two-point equality 64 = 4*16: {eq}")


def crit_04(workers: int) -> dict:
    values, bad = {}, []
    for config in standard_corpus():
        for mode in MODES:
            for c in check_moment_inequalities(config, 5, mode, workers=workers):
                if not c.holds:
                    bad.append((config.name, mode.value, c.n))
                values[f"{config.name}/{mode.value}/{c.n}"] = [str(c.square), str(c.product), c.lo, c.hi]
    return _result(not bad, values, f"{len(values)} inequalities (n=3,5 adjacent; n=4 against E_2*E_6), failures {bad}")


def crit_05(workers: int) -> dict:
    values, mismatches, checked = {}, 0, 0
    for config in corpus_upto(8):
        pairs = list(product(config.points, repeat=2))
        lines = {pq: rotation_line(*pq) for pq in pairs}
        met = 0
        for (p1, q1), (p2, q2) in product(pairs, repeat=2):
            m = meets(lines[(p1, q1)], lines[(p2, q2)])
            met += m
            checked += 1
            mismatches += m != (squared_distance(p1, p2) == squared_distance(q1, q2))
        values[config.name] = str(met)
    return _result(mismatches == 0, values, f"{checked} pair-of-pairs, mismatches {mismatches}")


def crit_06(workers: int) -> dict:
    values, bad = {}, []
    for config in corpus_upto(6):
        for mode in MODES:
            for n in range(1, 4):
                via = energy_via_lines(config, n, mode, workers=workers)
                if via != energy_chain(config, n, mode):
                    bad.append((config.name, mode.value, n))
                values[f"{config.name}/{mode.value}/{n}"] = str(via)
    return _result(not bad, values, f"{len(values)} cases, mismatches {bad}")


def crit_07(workers: int) -> dict:
    rng = random.Random(20240607)

    def q():
        return Fraction(rng.randint(-60, 60), rng.randint(1, 12))

    fails, digest = 0, []
    for _ in range(200):
        p, target, t = PlanePoint(q(), q()), PlanePoint(q(), q()), q()
        m = motion_at(rotation_line(p, target), t)
        fails += not (m.apply(p) == target and m.cos**2 + m.sin**2 == 1)
        digest.append(f"{m.cos}|{m.sin}")
    return _result(fails == 0, {"motions": digest[:10]}, f"200 samples, failures {fails}")


def crit_08(workers: int) -> dict:
    values, ok = {}, True
    for N in (2, 3, 4):
        config = gen_star_circles(N, [1, 2, 3])
        e = energy_graph(config, star_graph(3), workers=workers)
        ok &= e >= N**6
        values[str(N)] = {"points": len(config), "energy": str(e),
                          "ratio_N6": f"{e / N**6:.6g}", "ratio_P6": f"{e / len(config)**6:.6g}"}
    trend = ", ".join(f"N={k}: E/N^6={v['ratio_N6']}, E/|P|^6={v['ratio_P6']}" for k, v in values.items())
    return _result(ok, values, trend)


def crit_09(workers: int) -> dict:
    graphs = [g for m in (2, 3, 4) for g in connected_graphs(m)]
    values, violations = {}, []
    for config in corpus_upto(10):
        for g in graphs:
            full = delta_graph_census(config, g, workers=workers)
            tree = delta_graph_census(config, spanning_tree(g), workers=workers)
            if full < tree:
                violations.append((config.name, g.edges))
            values[f"{config.name}/{g.edges}"] = [str(full), str(tree)]
    return _result(not violations, values,
                   f"{len(values)} (config, graph) cases in all-assignments mode, violations {len(violations)}")


def crit_10(workers: int) -> dict:
    got = {}
    for m, want in ((3, 5), (2, 2)):
        config = gen_lattice(m)
        card = delta_n_census(config, 1, ChainMode.PROPER, workers=workers)[0]
        oracle = len(census_bruteforce(config, 1, ChainMode.PROPER))
        got[f"lattice-{m}"] = [str(card), str(oracle), str(want)]
    ok = all(a == b == c for a, b, c in got.values())
    return _result(ok, got, "proper mode |Delta_1|: " + ", ".join(f"{k}={v[0]}" for k, v in got.items()))


def crit_11(workers: int) -> dict:
    values, bad = {}, []
    for config in standard_corpus():
        for diagonal in (True, False):
            lines = build_lines(config, include_diagonal=diagonal)
            if len(lines) > 1600:
                continue
            IS = build_incidence(lines, workers=workers)
            geo = [l.geometry for l in lines]
            ordered = sum(
                1 for i, j in product(range(len(geo)), repeat=2)
                if i != j and line_meet_classify(geo[i], geo[j]).kind is MeetKind.INTERSECT
            )
            lhs = sum(m * (m - 1) for m in IS.multiplicities())
            top = max(IS.multiplicities(), default=1)
            dyadic_pts = sum(len(dyadic_rich_points(IS, t)) for t in dyadic_values(1, top))
            incid = sum(IS.multiplicities())
            per_k = []
            for k in dyadic_values(1, top):
                classes = [set(rich_lines_kt(IS, k, t)) for t in dyadic_values(1, IS.size)]
                union = set().union(*classes)
                direct = sum(1 for pts in IS.line_points if any(k <= len(IS.point_lines[p]) < 2 * k for p in pts))
                per_k.append(sum(map(len, classes)) == len(union) == direct)
            line_incid = sum(len(p) for p in IS.line_points)
            row_ok = lhs == ordered and dyadic_pts == len(IS.points) and incid == line_incid and all(per_k)
            if not row_ok:
                bad.append((config.name, diagonal))
            values[f"{config.name}/{diagonal}"] = [str(lhs), str(ordered), str(len(IS.points))]
    return _result(not bad, values, f"{len(values)} arrangements, failures {bad}")


def crit_12(workers: int) -> dict:
    values, bad = {}, []
    for m in (4, 5, 6):
        IS = build_incidence(build_lines(gen_lattice(m)), workers=workers)
        rep = audit(IS, regulus_budget=0)
        for bound_id in ("tRichPoints", "RichLines", "GenRichLines", "kRichLines"):
            report = bound_report(IS, bound_id, audit=rep)
            ratios_ok = all(math.isfinite(r.ratio) and r.ratio > 0 for r in report.rows)
            mismatches = recount_measured(IS, report)
            if not report.rows or not ratios_ok or mismatches:
                bad.append((m, bound_id, len(report.rows), ratios_ok, mismatches[:3]))
            values[f"lattice-{m}/{bound_id}"] = [[str(v) for v in r.params.values()] + [str(r.measured)]
                                                for r in report.rows]
    return _result(not bad, values, f"lattices 4..6, 4 bound ids; failures {bad}")


def crit_13(workers: int) -> dict:
    synth = []
    for k in (1, 2, 3, 5):
        rows = [ResultRow(f"s{n}", n, "q", "repeats", str(3 * n**k), 0.0) for n in (50, 100, 200, 400)]
        synth.append(abs(fit_exponent(rows, "q").slope - k) / k)
    synth_ok = max(synth) < 1e-9
    plan = ExperimentPlan.from_dict({
        "generator": {"name": "random", "sizes": [50, 100, 200, 400], "params": {"seed": 2024, "denominator_bound": 100}},
        "quantities": ["delta_1"],
        "modes": ["repeats", "proper"],
    })
    rows = run_plan(plan, workers=workers)
    fits = {mode: fit_exponent(rows, "delta_1", mode=mode) for mode in plan.modes}
    slope_ok = all(1.8 <= f.slope <= 2.0 for f in fits.values())
    values = {
        "ladder": {f"{r.points}/{r.mode}": r.value for r in rows},
        "slopes": {m: f"{f.slope:.12f}" for m, f in fits.items()},
        "synthetic_max_rel_error": f"{max(synth):.3e}",
    }
    detail = (f"synthetic max rel error {max(synth):.1e} ({'ok' if synth_ok else 'FAIL'}); ladder slopes "
              + ", ".join(f"{m}={f.slope:.4f}" for m, f in fits.items()) + " vs window [1.8, 2.0]")
    return _result(synth_ok and slope_ok, values, detail)


CRITERIA = {n: globals()[f"crit_{n:02d}"] for n in range(1, 14)}
_CACHE: dict[int, dict] = {}


def _serial(n: int) -> dict:
    if n not in _CACHE:
        start = time.perf_counter()
        res = CRITERIA[n](1)
        res["seconds"] = time.perf_counter() - start
        _CACHE[n] = res
    return _CACHE[n]


def crit_14(workers: int = 8) -> dict:
    diffs = []
    for n in CRITERIA:
        one = json.dumps(_serial(n)["values"], sort_keys=True).encode()
        many = json.dumps(CRITERIA[n](workers)["values"], sort_keys=True).encode()
        if one != many:
            diffs.append(n)
    return _result(not diffs, {}, f"criteria 1-13 at workers=1 vs {workers}: differing {diffs}")


def _line(n: int, res: dict) -> str:
    secs = f" [{res['seconds']:.1f}s]" if "seconds" in res else ""
    return f"criterion {n:2d}: {'PASS' if res['ok'] else 'FAIL'}{secs} - {res['detail']}"


@pytest.mark.parametrize("n", list(CRITERIA))
def test_criterion(n, capsys):
    res = _serial(n)
    with capsys.disabled():
        print("\n" + _line(n, res))
    assert res["ok"], res["detail"]


def test_criterion_14_determinism(capsys):
    start = time.perf_counter()
    res = crit_14(8)
    res["seconds"] = time.perf_counter() - start
    with capsys.disabled():
        print("\n" + _line(14, res))
    assert res["ok"], res["detail"]


if __name__ == "__main__":
    for n in CRITERIA:
        print(_line(n, _serial(n)), flush=True)
    start = time.perf_counter()
    r14 = crit_14(8)
    r14["seconds"] = time.perf_counter() - start
    print(_line(14, r14))
