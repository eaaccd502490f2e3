"""Strategy names, their parameters and factories, for configs and the CLI."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable

from . import controllers as ctl
from .board import BoardKind, Grid, Torus
from .cop_strategies import fixed_time, guards, nets, padding, tiling, torus
from .engine import ConfigurationError
from .robber_strategies import density, intervals, sprinters


class UnknownStrategy(ConfigurationError):
    pass


@dataclass(frozen=True)
class Entry:
    name: str
    side: str  # "cops" or "robber"
    factory: Callable[[BoardKind, dict], Any]
    params: dict = field(default_factory=dict)  # name -> (type, default)
    doc: str = ""


def _coords(v):
    return None if v is None else [tuple(int(x) for x in p) for p in v]


def _net_cfg(p: dict) -> nets.NetConfig:
    base = nets.FULL_NET if p.get("preset") == "full" else nets.DESK_NET
    keys = ("v_side", "h_side", "gap_period", "guard_margin")
    over = {k: p[k] for k in keys if p.get(k) is not None}
    return nets.NetConfig(**{**{k: getattr(base, k) for k in keys}, **over}) if over else base


def _interval_cfg(p: dict) -> intervals.IntervalConfig:
    k = p.get("k", 10)
    return intervals.IntervalConfig(k=k, enforce_k_bound=k > 50)


def _lifted(board, p):
    n = board.n
    inner = p.get("inner", "block_guard")
    return torus.torus_lifter(lambda: make("cops", inner, Grid(n, 2), {}), n)


_ENTRIES = [
    # cops
    Entry("stationary", "cops", lambda b, p: ctl.FixedPlacement(_coords(p.get("positions"))),
          {"positions": (list, None)}, "cops that never move"),
    Entry("greedy_chaser", "cops", lambda b, p: ctl.GreedyChaser(_coords(p.get("positions"))),
          {"positions": (list, None)}, "every cop steps toward the robber"),
    Entry("random_cops", "cops", lambda b, p: ctl.RandomCops(_coords(p.get("positions"))),
          {"positions": (list, None)}, "random king steps"),
    Entry("path_guard", "cops", lambda b, p: guards.path_guard(p.get("n") or b.n),
          {"n": (int, None)}, "ceil(n/2) cops on [n]"),
    Entry("block_guard", "cops", lambda b, p: guards.block_guard(p.get("n") or b.n, p.get("d") or b.dim),
          {"n": (int, None), "d": (int, None)}, "one cop per 2x..x2 block"),
    Entry("fixed_time_catcher", "cops",
          lambda b, p: fixed_time.fixed_time_catcher(p["T"], p.get("d") or b.dim, p.get("round_up", False)),
          {"T": (int, 4), "d": (int, None), "round_up": (bool, False)}, "lattice catcher for a known start"),
    Entry("covering_scheduler", "cops",
          lambda b, p: fixed_time.covering_scheduler(b.n, b.dim, **({"catch_time": p["catch_time"]} if p.get("catch_time") else {})),
          {"catch_time": (int, None)}, "rotating fixed-time teams"),
    Entry("recursive_tiler", "cops",
          lambda b, p: tiling.recursive_tiler(tiling.TileConfig(tile_factor=p.get("tile_factor", 15), depth=p.get("depth", 1)),
                                              b.n, p.get("strict", False)),
          {"tile_factor": (int, 15), "depth": (int, 1), "strict": (bool, False)}, "tiles of block guards with a moving hole"),
    Entry("torus_lifter", "cops", _lifted, {"inner": (str, "block_guard")}, "four grid copies on the torus"),
    Entry("grid_from_torus", "cops",
          lambda b, p: torus.grid_from_torus(make("cops", p.get("inner", "block_guard"), Torus(b.n, 2), {}), b.n),
          {"inner": (str, "block_guard")}, "folds of a torus strategy"),
    Entry("rugby_net", "cops",
          lambda b, p: nets.rugby_net(_net_cfg(p), p.get("depth", 1), p.get("require_margin", False)),
          {"preset": (str, "desk"), "v_side": (int, None), "h_side": (int, None), "gap_period": (int, None),
           "guard_margin": (int, None), "depth": (int, 1), "require_margin": (bool, False)}, "rectangular net in a tunnel"),
    Entry("fast_robber_net", "cops", lambda b, p: nets.fast_robber_net(_net_cfg(p)),
          {"preset": (str, "desk"), "v_side": (int, None), "h_side": (int, None)}, "shrinking net"),
    Entry("padded", "cops", lambda b, p: padding.pad_cops(make("cops", p["inner"], b, p.get("inner_params") or {})),
          {"inner": (str, "block_guard"), "inner_params": (dict, None)}, "5x5 padding of another strategy"),
    # robbers
    Entry("stay", "robber", lambda b, p: ctl.Stay(p.get("start")), {"start": (list, None)}),
    Entry("random_walker", "robber", lambda b, p: ctl.RandomWalker(p.get("start")), {"start": (list, None)}),
    Entry("sprinter", "robber", lambda b, p: ctl.Sprinter(p.get("direction") or (1,), p.get("start")),
          {"direction": (list, None), "start": (list, None)}),
    Entry("greedy_evader", "robber", lambda b, p: ctl.GreedyEvader(p.get("start")), {"start": (list, None)}),
    Entry("coverage_breaker", "robber", lambda b, p: ctl.CoverageBreaker(p.get("start")), {"start": (list, None)}),
    Entry("hole_chaser", "robber", lambda b, p: ctl.HoleChaser(p.get("tile") or max(b.n // 15, 1), p.get("start")),
          {"tile": (int, None), "start": (list, None)}),
    Entry("diagonal_sprinter", "robber", lambda b, p: sprinters.diagonal_sprinter(p.get("d") or b.dim), {"d": (int, None)}),
    Entry("quadrant_descender", "robber", lambda b, p: sprinters.quadrant_descender(p.get("d") or b.dim, p.get("T")),
          {"d": (int, None), "T": (int, None)}),
    Entry("density_descender", "robber",
          lambda b, p: density.density_descender(density.DensityConfig(f=p.get("f", 1.2), offset=p.get("offset", 33),
                                                                        levels=p.get("levels", 4))),
          {"f": (float, 1.2), "offset": (int, 33), "levels": (int, 4)}),
    Entry("interval_requester", "robber", lambda b, p: intervals.interval_requester(_interval_cfg(p)), {"k": (int, 10)}),
    Entry("grid_looper", "robber", lambda b, p: intervals.grid_looper(_interval_cfg(p)), {"k": (int, 10)}),
]

REGISTRY: dict[tuple[str, str], Entry] = {(e.side, e.name): e for e in _ENTRIES}


def names(side: str) -> list[str]:
    return sorted(n for s, n in REGISTRY if s == side)


def check_params(entry: Entry, params: dict) -> dict:
    """Fill defaults and type-check ``params`` against the entry's schema."""
    out = {}
    for key in params:
        if key not in entry.params:
            raise ConfigurationError(f"{entry.name}: unknown parameter {key!r}")
    for key, (typ, default) in entry.params.items():
        v = params.get(key, default)
        if v is not None:
            if typ is float and isinstance(v, int) and not isinstance(v, bool):
                v = float(v)
            ok = isinstance(v, (list, tuple)) if typ is list else isinstance(v, typ)
            if typ is int and isinstance(v, bool):
                ok = False
            if not ok:
                raise ConfigurationError(f"{entry.name}: parameter {key!r} must be {typ.__name__}, got {v!r}")
        out[key] = v
    return out


def lookup(side: str, name: str) -> Entry:
    try:
        return REGISTRY[(side, name)]
    except KeyError:
        raise UnknownStrategy(f"unknown strategy {name!r} for the {side}; known: {', '.join(names(side))}") from None


def make(side: str, name: str, board: BoardKind, params: dict):
    entry = lookup(side, name)
    return entry.factory(board, check_params(entry, params or {}))
