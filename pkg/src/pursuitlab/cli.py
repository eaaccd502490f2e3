"""Command line: play, sweep, solve and validate-trace.

A run is described by one JSON config; flags override single fields.
Exit codes: 0 success, 1 failed check, 2 bad configuration, 3 solver
budget exceeded.
"""
from __future__ import annotations

import argparse
import copy
import csv
import io
import itertools
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Optional

from .board import InvalidInput, board_from_json
from .engine import (
    ConfigurationError,
    FixedTime,
    MatchSpec,
    RuleViolation,
    Trace,
    adjudicate,
    play,
    validate_trace,
    variant_from_json,
)
from .registry import make
from .render import MAX_SIDE, render_state
from . import solver

SEED_ENV = "PURSUITLAB_SEED"

CSV_COLUMNS = [
    "row", "seed", "params", "board", "variant", "cops", "robber", "cop_count",
    "result", "verdict", "reason", "time", "capture_time", "max_robber_x", "error",
]

DEFAULTS = {
    "board": {"kind": "grid", "n": 10, "d": 1},
    "variant": {"kind": "covering"},
    "cops": {"name": "path_guard", "params": {}},
    "robber": {"name": "random_walker", "params": {}},
    "cop_count": None,
    "robber_speed": 2,
    "robber_start": None,
    "seed": 0,
    "cover_at_start": False,
    "cover_after_robber": False,
}


def parse_board(text: str) -> dict:
    """``kind:n[:d]``, e.g. ``grid:5:1`` or ``torus:4:2``."""
    parts = text.split(":")
    if len(parts) not in (2, 3):
        raise ConfigurationError(f"board must look like kind:n[:d], got {text!r}")
    try:
        return {"kind": parts[0], "n": int(parts[1]), "d": int(parts[2]) if len(parts) == 3 else 1}
    except ValueError as exc:
        raise ConfigurationError(f"bad board {text!r}") from exc


def load_config(args) -> dict:
    cfg = copy.deepcopy(DEFAULTS)
    if getattr(args, "config", None):
        try:
            cfg.update(json.loads(Path(args.config).read_text()))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigurationError(f"cannot read config {args.config}: {exc}") from exc
    env_seed = os.environ.get(SEED_ENV)
    if env_seed is not None:
        cfg["seed"] = int(env_seed)
    if getattr(args, "seed", None) is not None:
        cfg["seed"] = args.seed
    if getattr(args, "board", None):
        cfg["board"] = parse_board(args.board)
    if getattr(args, "variant", None):
        cfg["variant"] = {**cfg.get("variant", {}), "kind": args.variant}
    if getattr(args, "horizon", None) is not None:
        cfg["variant"] = {**cfg["variant"], "horizon": args.horizon}
    if getattr(args, "cops", None):
        cfg["cops"] = {"name": args.cops, "params": {}}
    if getattr(args, "robber", None):
        cfg["robber"] = {"name": args.robber, "params": {}}
    if getattr(args, "cop_count", None) is not None:
        cfg["cop_count"] = args.cop_count
    if getattr(args, "cover_at_start", False):
        cfg["cover_at_start"] = True
    if getattr(args, "cover_after_robber", False):
        cfg["cover_after_robber"] = True
    return cfg


def build_match(cfg: dict):
    board = board_from_json(cfg["board"])
    variant = variant_from_json(cfg["variant"])
    cop_params = dict(cfg["cops"].get("params") or {})
    if isinstance(variant, FixedTime) and cfg["cops"]["name"] == "fixed_time_catcher":
        cop_params.setdefault("T", variant.T)
    cops = make("cops", cfg["cops"]["name"], board, cop_params)
    robber = make("robber", cfg["robber"]["name"], board, cfg["robber"].get("params") or {})
    count = cfg.get("cop_count")
    if count is None:
        count = cops.cops_needed(board)
        if count is None:
            raise ConfigurationError(f"{cfg['cops']['name']} needs an explicit cop_count")
    start = cfg.get("robber_start")
    spec = MatchSpec(
        board, variant, int(count),
        robber_speed=int(cfg.get("robber_speed", 2)),
        seed=int(cfg.get("seed", 0)),
        robber_start=tuple(start) if start is not None else None,
        cover_at_start=bool(cfg.get("cover_at_start", False)),
        cover_after_robber=bool(cfg.get("cover_after_robber", False)),
    )
    return spec, cops, robber


# ---------------------------------------------------------------------------
# play
# ---------------------------------------------------------------------------


def summary_line(trace: Trace) -> str:
    o = trace.outcome
    return f"{o.result}\treason={o.reason}\ttime={o.time}\tcapture_time={trace.capture_time}"


def cmd_play(args) -> int:
    cfg = load_config(args)
    spec, cops, robber = build_match(cfg)
    if args.render and spec.board.n > MAX_SIDE:
        raise ConfigurationError(f"--render needs n <= {MAX_SIDE}")
    trace = play(spec, cops, robber, record=True)
    out = Path(args.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    (out / "trace.jsonl").write_text(trace.to_jsonl())
    if args.render:
        for s in trace.states:
            print(render_state(spec.board, s))
            print()
    print(summary_line(trace))
    return 0


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------


def _set_path(cfg: dict, dotted: str, value) -> None:
    keys = dotted.split(".")
    node = cfg
    for k in keys[:-1]:
        node = node.setdefault(k, {})
    node[keys[-1]] = value


def sweep_rows(cfg: dict) -> list[tuple[int, int, dict, dict]]:
    """``(row, seed, assignment, config)`` for every grid point and seed, in order."""
    grid = cfg.get("grid") or {}
    keys = sorted(grid)
    if "seeds" in cfg and cfg["seeds"] is not None:
        seeds = [int(s) for s in cfg["seeds"]]
    else:
        base = int(cfg.get("seed", 0))
        seeds = list(range(base, base + int(cfg.get("repetitions", 1))))
    rows = []
    for values in itertools.product(*(grid[k] for k in keys)):
        assign = dict(zip(keys, values))
        for seed in seeds:
            c = copy.deepcopy({k: v for k, v in cfg.items() if k not in ("grid", "seeds", "repetitions")})
            for k, v in assign.items():
                _set_path(c, k, v)
            c["seed"] = seed
            rows.append((len(rows), seed, assign, c))
    return rows


def run_row(item) -> dict:
    idx, seed, assign, cfg = item
    row = {k: "" for k in CSV_COLUMNS}
    row.update(row=idx, seed=seed, params=json.dumps(assign, sort_keys=True),
               board=json.dumps(cfg["board"], sort_keys=True), variant=json.dumps(cfg["variant"], sort_keys=True),
               cops=cfg["cops"]["name"], robber=cfg["robber"]["name"])
    try:
        spec, cops, robber = build_match(cfg)
        row["cop_count"] = spec.cop_count
        trace = play(spec, cops, robber, record=False)
        o = trace.outcome
        row.update(result=o.result, verdict=o.verdict or o.result, reason=o.reason, time=o.time,
                   capture_time="" if trace.capture_time is None else trace.capture_time,
                   max_robber_x=trace.final.max_robber_x)
    except (ConfigurationError, InvalidInput, RuleViolation, AssertionError, ValueError) as exc:
        row["error"] = f"{type(exc).__name__}: {exc}"
    return row


def sweep_csv(cfg: dict, workers: int = 1) -> str:
    items = sweep_rows(cfg)
    if workers > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(run_row, items))  # map keeps row order
    else:
        rows = [run_row(it) for it in items]
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(r)
    return buf.getvalue()


def cmd_sweep(args) -> int:
    cfg = load_config(args)
    text = sweep_csv(cfg, args.workers)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "sweep.csv").write_text(text)
    else:
        sys.stdout.write(text)
    return 0


# ---------------------------------------------------------------------------
# solve
# ---------------------------------------------------------------------------


def cmd_solve(args) -> int:
    cfg = load_config(args)
    board = board_from_json(cfg["board"])
    kind = cfg["variant"]["kind"]
    speed = int(cfg.get("robber_speed", 2))
    budget = int(cfg.get("budget", solver.DEFAULT_BUDGET))
    symmetry = bool(cfg.get("symmetry", False))
    m_max = args.m_max if args.m_max is not None else cfg.get("m_max", 4)
    flags = dict(cover_at_start=bool(cfg.get("cover_at_start")), cover_after_robber=bool(cfg.get("cover_after_robber")))
    if kind == "fixed_time":
        T = int(cfg["variant"]["T"])
        m = int(cfg.get("m") or m_max)
        value = solver.fixed_time_value(board, m, T, cfg.get("robber_start"), speed, cfg.get("placement"), budget)
        shown = "true" if value else "false"
        record = solver.SolveResult(solver.instance_json(board, kind, m, T=T), value,
                                    solver.state_estimate(board, m, T), T)
    else:
        variant = variant_from_json(cfg["variant"])
        value = solver.min_cops(board, variant, int(m_max), speed=speed, symmetry=symmetry, budget=budget, **(
            flags if kind == "covering" else {}))
        shown = "none" if value is None else str(value)
        record = solver.SolveResult(solver.instance_json(board, kind, m_max=int(m_max), symmetry=symmetry, **flags),
                                    value, solver.state_estimate(board, int(m_max)), 0)
    print(shown)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "solve.json").write_text(record.to_json() + "\n")
    if kind in ("covering", "capture") and value is not None and not any(flags.values()):
        key = solver.constant_key(board, kind, speed)
        match = solver.check_frozen(key, value)
        if args.freeze:
            solver.freeze_constant(key, value)
        elif match is False:
            print(f"frozen constant mismatch for {key}: recorded {solver.frozen_constants()[key]}", file=sys.stderr)
            return 1
    return 0


# ---------------------------------------------------------------------------
# validate-trace
# ---------------------------------------------------------------------------


def cmd_validate(args) -> int:
    try:
        trace = Trace.from_jsonl(Path(args.trace).read_text())
    except OSError as exc:
        raise ConfigurationError(f"cannot read trace: {exc}") from exc
    problems = validate_trace(trace)
    if trace.outcome is not None:
        again = adjudicate(trace)
        if again.result != trace.outcome.result:
            problems.append(f"recorded outcome {trace.outcome.result} but replay says {again.result}")
    if problems:
        for p in problems:
            print(p)
        return 1
    print("ok")
    return 0


# ---------------------------------------------------------------------------


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON config file")
    p.add_argument("--seed", type=int)
    p.add_argument("--horizon", type=int)
    p.add_argument("--out", help="output directory")
    p.add_argument("--board", help="kind:n[:d], e.g. grid:10:1")
    p.add_argument("--variant", choices=["covering", "fixed_time", "rugby", "capture"])
    p.add_argument("--cover-at-start", action="store_true")
    p.add_argument("--cover-after-robber", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pursuitlab", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="cmd", required=True)
    p = sub.add_parser("play", help="run one match and write trace.jsonl")
    _common(p)
    p.add_argument("--cops")
    p.add_argument("--robber")
    p.add_argument("--cop-count", type=int)
    p.add_argument("--render", action="store_true", help="print every half-turn (n <= 60)")
    p.set_defaults(func=cmd_play)
    s = sub.add_parser("sweep", help="run a parameter grid and write CSV")
    _common(s)
    s.add_argument("--cops")
    s.add_argument("--robber")
    s.add_argument("--cop-count", type=int)
    s.add_argument("--workers", type=int, default=1)
    s.set_defaults(func=cmd_sweep)
    v = sub.add_parser("solve", help="exact value of a tiny instance")
    _common(v)
    v.add_argument("--m-max", type=int)
    v.add_argument("--freeze", action="store_true", help="record the value in the regression file")
    v.set_defaults(func=cmd_solve)
    t = sub.add_parser("validate-trace", help="check a JSONL trace")
    t.add_argument("trace")
    t.set_defaults(func=cmd_validate)
    return ap


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except solver.ResourceError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return 3
    except (ConfigurationError, InvalidInput) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
