import math
import xml.etree.ElementTree as ET

import pytest
from hypothesis import given
from hypothesis import strategies as st

from chain_census.configs import gen_lattice
from chain_census.energy import energy_chain
from chain_census.errors import InsufficientData, PlanInvalid
from chain_census.experiments import (
    CSV_HEADER,
    ExperimentPlan,
    ResultRow,
    compute_quantity,
    emit_csv,
    emit_svg_loglog,
    fit_exponent,
    load_rows,
    run_plan,
)


def synthetic(fn, sizes=(10, 20, 40, 80, 160), quantity="q"):
    return [ResultRow(f"s{n}", n, quantity, "repeats", str(fn(n)), 0.0) for n in sizes]


def plan(**kw):
    doc = {"generator": {"name": "lattice", "sizes": [2, 3, 4]}, "quantities": ["delta_1"]}
    doc.update(kw)
    return ExperimentPlan.from_dict(doc)


def test_run_plan_example():
    rows = run_plan(plan())
    assert [(r.config, r.value) for r in rows] == [("lattice-2", "2"), ("lattice-3", "5"), ("lattice-4", "9")]


def test_run_plan_values_match_operations():
    rows = run_plan(plan(quantities=["energy_2", "energy_lines_1", "delta_graph:triangle"], modes=["repeats", "proper"]))
    assert len(rows) == 3 * 3 * 2
    for r in rows:
        if r.quantity == "energy_2":
            assert r.as_int() == energy_chain(gen_lattice(int(math.isqrt(r.points))), 2, r.mode)
    energy = {(r.points, r.mode): r.value for r in rows if r.quantity == "energy_2"}
    lines = {(r.points, r.mode): r.value for r in rows if r.quantity == "energy_lines_1"}
    assert all(v for v in energy.values()) and all(v for v in lines.values())


def test_run_plan_deterministic_across_workers():
    p = plan(quantities=["delta_2", "energy_1", "bound:tRichPoints"])
    strip = lambda rows: [(r.config, r.points, r.quantity, r.mode, r.value, r.error) for r in rows]
    assert strip(run_plan(p, workers=1)) == strip(run_plan(p, workers=3)) == strip(run_plan(p, workers=1))


def test_plan_validation():
    with pytest.raises(PlanInvalid):
        plan(quantities=[])
    with pytest.raises(PlanInvalid):
        plan(generator={"name": "lattice", "sizes": [3, 3]})
    with pytest.raises(PlanInvalid):
        plan(quantities=["delta_x"])
    with pytest.raises(PlanInvalid):
        plan(quantities=["bound:Nope"])
    with pytest.raises(PlanInvalid):
        plan(quantities=["delta_graph:mystery"])
    with pytest.raises(PlanInvalid):
        plan(generator={"name": "spiral", "sizes": [1]})
    with pytest.raises(PlanInvalid):
        plan(modes=["sometimes"])
    with pytest.raises(PlanInvalid):
        ExperimentPlan.from_dict({"quantities": ["delta_1"]})
    custom = plan(quantities=["delta_graph:hinge"], graphs={"hinge": {"m": 3, "edges": [[0, 1], [1, 2]]}})
    assert [r.value for r in run_plan(custom)] == ["4", "25", "81"]


def test_cell_failures_are_rows():
    p = plan(generator={"name": "lattice", "sizes": [2, 6]}, quantities=["energy_graph:k4"],
             budgets={"assignments": 1000})
    ok, bad = run_plan(p)
    assert ok.ok and ok.value == "192"
    assert not bad.ok and bad.value == "" and bad.error.startswith("SizeGuard")


def test_time_limit():
    p = plan(generator={"name": "random", "sizes": [200], "params": {"seed": 1}}, quantities=["delta_3"],
             budgets={"time_limit": 0.05, "states": 10**9})
    (row,) = run_plan(p)
    assert row.error.startswith("CellTimeout")


def test_other_generators():
    star = plan(generator={"name": "star", "sizes": [1, 2], "params": {"radii": [1, 2]}})
    assert [r.points for r in run_plan(star)] == [3, 5]
    rnd = plan(generator={"name": "random", "sizes": [5, 10], "params": {"seed": 3, "denominator_bound": 50}})
    assert [r.value for r in run_plan(rnd)] == ["10", "45"]
    with pytest.raises(PlanInvalid):
        plan(generator={"name": "star", "sizes": [1]})


def test_fit_synthetic():
    f = fit_exponent(synthetic(lambda n: n * n), "q")
    assert abs(f.slope - 2) < 1e-12 and f.residual < 1e-12 and f.count == 5
    f = fit_exponent(synthetic(lambda n: 7 * n), "q")
    assert abs(f.slope - 1) < 1e-12 and abs(f.intercept - math.log(7)) < 1e-12


@given(st.integers(1, 6), st.integers(1, 1000))
def test_fit_recovers_exponent(k, c):
    f = fit_exponent(synthetic(lambda n: c * n**k, sizes=(5, 17, 60, 333, 1000)), "q")
    assert abs(f.slope - k) / k < 1e-9


def test_fit_gamma_and_filters():
    rows = synthetic(lambda n: n**3) + [ResultRow("x", 7, "q", "repeats", "0", 0.0),
                                        ResultRow("y", 9, "q", "repeats", "", 0.0, "SizeGuard: no")]
    plain = fit_exponent(rows, "q")
    assert plain.count == 5
    shifted = fit_exponent(rows, "q", gamma=2.0)
    assert shifted.slope > plain.slope
    with pytest.raises(InsufficientData):
        fit_exponent(rows[:2], "q")
    with pytest.raises(InsufficientData):
        fit_exponent(rows, "q", mode="proper")


def test_csv_round_trip(tmp_path):
    path = tmp_path / "rows.csv"
    emit_csv(synthetic(lambda n: n)[:1], path)
    lines = path.read_text().splitlines()
    assert len(lines) == 2 and tuple(lines[0].split(",")) == CSV_HEADER
    rows = synthetic(lambda n: 3**n, sizes=(3, 40, 90))
    emit_csv(rows, path)
    back = load_rows(path)
    assert [r.value for r in back] == [r.value for r in rows]
    assert back[2].as_int() == 3**90
    assert fit_exponent(back, "q") == fit_exponent(rows, "q")


def test_svg(tmp_path):
    rows = synthetic(lambda n: n**2)
    path = tmp_path / "fig.svg"
    emit_svg_loglog(rows, fit_exponent(rows, "q"), path)
    root = ET.parse(path).getroot()
    assert root.tag == "{http://www.w3.org/2000/svg}svg" and root.get("version") == "1.1"
    assert len(root.findall("{http://www.w3.org/2000/svg}circle")) == 5
    emit_svg_loglog(rows[:1], None, path)
    ET.parse(path)
    with pytest.raises(ValueError):
        emit_svg_loglog([], None, path)


def test_compute_quantity_bound():
    assert compute_quantity(gen_lattice(2), "bound:tRichPoints", "repeats", {}) > 0
