from __future__ import annotations

import csv
import io
import json

import numpy as np
import pytest

from pursuitlab import registry
from pursuitlab.board import Grid, Tunnel
from pursuitlab.cli import CSV_COLUMNS, SEED_ENV, main, parse_board, sweep_csv
from pursuitlab.engine import ConfigurationError, GameState
from pursuitlab.render import render, render_state


def _play(tmp_path, *extra):
    return main(["play", "--board", "grid:6:1", "--cops", "path_guard", "--robber", "random_walker",
                 "--horizon", "30", "--seed", "4", "--out", str(tmp_path), *extra])


def test_play_writes_a_trace_and_a_summary(tmp_path, capsys):
    assert _play(tmp_path) == 0
    out = capsys.readouterr().out.strip().splitlines()
    assert out[-1].startswith("CopsWin\treason=")
    lines = (tmp_path / "trace.jsonl").read_text().splitlines()
    assert json.loads(lines[0])
    assert main(["validate-trace", str(tmp_path / "trace.jsonl")]) == 0
    assert capsys.readouterr().out.strip() == "ok"


def test_play_is_reproducible(tmp_path, capsys):
    _play(tmp_path / "a")
    _play(tmp_path / "b")
    a = (tmp_path / "a" / "trace.jsonl").read_bytes()
    assert a == (tmp_path / "b" / "trace.jsonl").read_bytes()


def test_seed_from_environment(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv(SEED_ENV, "11")
    assert main(["play", "--board", "grid:6:2", "--cops", "random_cops", "--cop-count", "2",
                 "--variant", "capture", "--horizon", "20", "--out", str(tmp_path)]) == 0
    first = json.loads((tmp_path / "trace.jsonl").read_text().splitlines()[0])
    assert first["spec"]["seed"] == 11


def test_tampered_trace_fails_validation(tmp_path, capsys):
    _play(tmp_path)
    path = tmp_path / "trace.jsonl"
    lines = path.read_text().splitlines()
    rec = json.loads(lines[2])
    rec["robber"] = [rec["robber"][0] + 5]
    lines[2] = json.dumps(rec)
    path.write_text("\n".join(lines) + "\n")
    assert main(["validate-trace", str(path)]) == 1


def test_bad_configuration_exit_code(tmp_path, capsys):
    assert main(["play", "--board", "grid:6", "--cops", "no_such_cops", "--out", str(tmp_path)]) == 2
    assert "unknown strategy" in capsys.readouterr().err
    assert main(["play", "--board", "hexagon:6:1", "--out", str(tmp_path)]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["play", "--config", str(bad)]) == 2


def test_solver_budget_exit_code(capsys):
    assert main(["solve", "--board", "grid:30:2", "--variant", "covering", "--m-max", "3"]) == 3


def test_solve_path(tmp_path, capsys):
    assert main(["solve", "--board", "grid:5:1", "--variant", "covering", "--m-max", "4", "--out", str(tmp_path)]) == 0
    assert capsys.readouterr().out.strip() == "3"
    rec = json.loads((tmp_path / "solve.json").read_text())
    assert rec["value"] == 3
    assert main(["solve", "--board", "grid:5:1", "--variant", "covering", "--m-max", "2"]) == 0
    assert capsys.readouterr().out.strip() == "none"


def test_solve_fixed_time(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"board": {"kind": "grid", "n": 43, "d": 1}, "variant": {"kind": "fixed_time", "T": 1}, "m": 1}))
    assert main(["solve", "--config", str(cfg)]) == 0
    assert capsys.readouterr().out.strip() == "true"


def _sweep_cfg():
    return {
        "board": {"kind": "grid", "n": 6, "d": 1},
        "variant": {"kind": "covering", "horizon": 25},
        "cops": {"name": "path_guard", "params": {}},
        "robber": {"name": "random_walker", "params": {}},
        "grid": {"board.n": [4, 5], "cop_count": [1, 3]},
        "seeds": [0, 1],
    }


def test_sweep_csv_rows_and_header():
    text = sweep_csv(_sweep_cfg())
    rows = list(csv.DictReader(io.StringIO(text)))
    assert text.splitlines()[0].split(",") == CSV_COLUMNS
    assert len(rows) == 8
    assert [int(r["row"]) for r in rows] == list(range(8))
    for r in rows:
        params = json.loads(r["params"])
        want = "CopsWin" if params["cop_count"] == 3 else "RobberWins"
        assert r["error"] or r["result"] == want


def test_sweep_reports_errors_per_row():
    cfg = _sweep_cfg()
    cfg["grid"] = {"cops.name": ["path_guard", "no_such"]}
    rows = list(csv.DictReader(io.StringIO(sweep_csv(cfg))))
    assert rows[0]["error"] == "" and rows[-1]["error"].startswith("UnknownStrategy")


def test_sweep_cli_is_reproducible(tmp_path, capsys):
    cfg = tmp_path / "s.json"
    cfg.write_text(json.dumps(_sweep_cfg()))
    assert main(["sweep", "--config", str(cfg), "--out", str(tmp_path / "a")]) == 0
    assert main(["sweep", "--config", str(cfg), "--out", str(tmp_path / "b")]) == 0
    assert (tmp_path / "a" / "sweep.csv").read_bytes() == (tmp_path / "b" / "sweep.csv").read_bytes()


def test_parse_board():
    assert parse_board("torus:4:2") == {"kind": "torus", "n": 4, "d": 2}
    assert parse_board("grid:7") == {"kind": "grid", "n": 7, "d": 1}
    with pytest.raises(ConfigurationError):
        parse_board("grid")
    with pytest.raises(ConfigurationError):
        parse_board("grid:x")


def test_render_symbols():
    b = Grid(3, 2)
    pic = render(b, np.array([[1, 1], [2, 2]]), (2, 2), holes=[(3, 3)])
    assert pic.splitlines() == ["..·", ".X.", "C.."]
    assert render(Grid(4, 1), np.array([[1]]), (3,)) == "C.R."
    s = GameState(time=2, cops=np.array([[1]]), robber=(2,), phase="cops", covered_now=False, ever_covered=False,
                  coverage_broken=False, max_robber_x=2)
    assert render_state(Grid(3, 1), s).splitlines()[0] == "t=2 cops to move"


def test_render_limits():
    with pytest.raises(ConfigurationError):
        render(Grid(61, 1), np.array([[1]]), (2,))
    row = render(Tunnel(5, 1), np.array([[0, 1]]), (10, 5))
    assert len(row.splitlines()) == 5 and all(len(r) == 60 for r in row.splitlines())


def test_registry():
    assert "path_guard" in registry.names("cops")
    assert "interval_requester" in registry.names("robber")
    with pytest.raises(registry.UnknownStrategy):
        registry.make("cops", "nope", Grid(3, 1), {})
    with pytest.raises(ConfigurationError):
        registry.make("cops", "path_guard", Grid(3, 1), {"n": "3"})
    with pytest.raises(ConfigurationError):
        registry.make("cops", "path_guard", Grid(3, 1), {"n": True})
    with pytest.raises(ConfigurationError):
        registry.make("cops", "path_guard", Grid(3, 1), {"bogus": 1})
    dd = registry.make("robber", "density_descender", Grid(300, 2), {"f": 1.3, "levels": 3})
    assert dd.cfg.f == 1.3 and dd.cfg.levels == 3
    with pytest.raises(ConfigurationError):
        registry.make("robber", "density_descender", Grid(300, 2), {"levels": 2.5})
