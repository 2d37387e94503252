import json
import xml.etree.ElementTree as ET

import pytest

from chain_census.cli import main
from chain_census.configs import gen_lattice, load_config


def run(*argv):
    return main([str(a) for a in argv])


def test_gen_and_census(tmp_path):
    cfg = tmp_path / "l3.json"
    assert run("gen", "lattice", "--m", 3, "--out", cfg) == 0
    assert load_config(cfg) == gen_lattice(3)
    out = tmp_path / "c.json"
    assert run("census", "chains", "--config", cfg, "--n", 1, "--mode", "proper", "--out", out) == 0
    doc = json.loads(out.read_text())
    assert doc["cardinality"] == "5" and doc["total"] == "72"
    assert [e["signature"] for e in doc["table"]] == [["1"], ["2"], ["4"], ["5"], ["8"]]
    graph = tmp_path / "g.json"
    graph.write_text(json.dumps({"m": 3, "edges": [[0, 1], [1, 2]]}))
    assert run("census", "graph", "--config", cfg, "--graph", graph, "--mode", "proper", "--out", out) == 0
    assert json.loads(out.read_text())["cardinality"] == "25"


def test_gen_other_families(tmp_path):
    star, rnd = tmp_path / "s.json", tmp_path / "r.json"
    assert run("gen", "star", "--count", 2, "--radii", "1,3/2", "--out", star) == 0
    assert len(load_config(star)) == 5
    assert run("gen", "random", "--n", 6, "--seed", 4, "--bound", 10, "--out", rnd) == 0
    assert len(load_config(rnd)) == 6


def test_energy(tmp_path):
    cfg = tmp_path / "two.json"
    cfg.write_text(json.dumps({"name": "two", "points": [["0", "0"], ["1", "0"]]}))
    out = tmp_path / "e.json"
    assert run("energy", "--config", cfg, "--n", 2, "--oracle", "--out", out) == 0
    doc = json.loads(out.read_text())
    assert (doc["energy"], doc["left"], doc["right"], doc["equality"]) == ("16", "64", "64", True)
    assert doc["oracle_energy"] == "16"
    graph = tmp_path / "edge.json"
    graph.write_text(json.dumps({"m": 2, "edges": [[0, 1]]}))
    assert run("energy", "--config", cfg, "--graph", graph, "--out", out) == 0
    assert json.loads(out.read_text())["energy"] == "8"


def test_lines_commands(tmp_path):
    cfg, arr = tmp_path / "l.json", tmp_path / "arr.json"
    run("gen", "lattice", "--m", 2, "--out", cfg)
    assert run("lines", "build", "--config", cfg, "--diagonal", "off", "--out", arr) == 0
    assert len(json.loads(arr.read_text())["lines"]) == 12
    audit = tmp_path / "audit.json"
    assert run("lines", "audit", "--arr", arr, "--regulus-budget", 10**6, "--out", audit) == 0
    assert json.loads(audit.read_text())["regulus_computed"] is True
    rep = tmp_path / "rep.csv"
    assert run("lines", "bounds", "--arr", arr, "--bound", "RichLines", "--out", rep) == 0
    assert rep.read_text().startswith("bound_id,k,t,measured,expression,ratio")
    assert run("bounds", "--arr", arr, "--bound", "tRichPoints", "--s", 4, "--out", rep) == 0
    assert rep.read_text().splitlines()[1].startswith("tRichPoints,2,")


def test_run_fit_plot(tmp_path, capsys):
    plan = tmp_path / "plan.json"
    rows, svg = tmp_path / "rows.csv", tmp_path / "fig.svg"
    plan.write_text(json.dumps({
        "generator": {"name": "lattice", "sizes": [2, 3, 4, 5]},
        "quantities": ["delta_1", "energy_1"],
        "outputs": {"csv": str(rows), "svg": str(svg), "fit": "energy_1"},
    }))
    assert run("run", "--plan", plan) == 0
    assert rows.read_text().splitlines()[1].split(",")[:5] == ["lattice-2", "4", "delta_1", "proper", "2"]
    ET.parse(svg)
    fit = tmp_path / "fit.json"
    assert run("fit", "--rows", rows, "--quantity", "delta_1", "--out", fit) == 0
    assert json.loads(fit.read_text())["count"] == 4
    assert run("plot", "--rows", rows, "--quantity", "delta_1", "--out", svg) == 0
    assert run("fit", "--rows", rows, "--quantity", "nothing") == 1


def test_run_exit_codes(tmp_path):
    plan = tmp_path / "plan.json"
    plan.write_text(json.dumps({"generator": {"name": "lattice", "sizes": [2]}, "quantities": []}))
    assert run("run", "--plan", plan) == 2
    plan.write_text("{not json")
    assert run("run", "--plan", plan) == 2
    plan.write_text(json.dumps({"generator": {"name": "lattice", "sizes": [2, 5]}, "quantities": ["energy_graph:k4"],
                                "budgets": {"assignments": 5000}}))
    assert run("run", "--plan", plan, "--out", tmp_path / "r.csv") == 3


def test_help_per_subcommand(capsys):
    for cmd in ("gen", "census", "energy", "lines", "bounds", "run", "fit", "plot"):
        with pytest.raises(SystemExit) as exc:
            main([cmd, "--help"])
        assert exc.value.code == 0
    assert "chain-census" in capsys.readouterr().out


def test_bad_config_reports_error(tmp_path, capsys):
    cfg = tmp_path / "bad.json"
    cfg.write_text("{")
    assert run("census", "chains", "--config", cfg, "--n", 1) == 1
    assert "MalformedFile" in capsys.readouterr().err
