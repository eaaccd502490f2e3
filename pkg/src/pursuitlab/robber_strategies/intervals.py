"""Interval requests: a fast robber slipping through cop walls in a tunnel or a grid.

The robber drifts forward 2 cells a turn.  Cops ahead of him are sorted
into bands by how far ahead they are: band ``i`` holds the cops between
``0.9 k^i`` and ``3.1 k^i`` in front.  Once at least ``t^i / 2`` cops that
are not yet *bad* sit in band ``i`` (``t^2 = 3/2``), band ``i`` files a
request: those cops become bad for good, and for the next ``3.1 k^i``
turns the robber sidesteps two rows a turn away from the side where most of
them are, unless a lower band has an open request (lower bands win).

All thresholds involving ``t`` are compared on squares, in integers, so
``t^2 = 3/2`` is exact.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..board import Grid, Tunnel
from ..controllers import _RobberBase
from ..engine import ConfigurationError

# t^2 = T2_NUM / T2_DEN
T2_NUM, T2_DEN = 3, 2


def at_least_half_t_pow(c: int, i: int) -> bool:
    """``c >= t^i / 2``, i.e. ``4 c^2 >= (3/2)^i``."""
    return 4 * c * c * T2_DEN ** i >= T2_NUM ** i


def more_than_half_t_pow(c: int, i: int) -> bool:
    return 4 * c * c * T2_DEN ** i > T2_NUM ** i


def more_than_quarter_t_pow(c: int, i: int) -> bool:
    """``c > t^i / 4``."""
    return 16 * c * c * T2_DEN ** i > T2_NUM ** i


@dataclass(frozen=True)
class IntervalConfig:
    k: int = 700
    band: tuple[int, int] = (9, 31)        # tenths of k^i
    enlarged: tuple[int, int] = (5, 35)    # tenths of k^i
    span: int = 31                         # request length, tenths of k^i
    enforce_k_bound: bool = True

    def __post_init__(self) -> None:
        if self.k < 2:
            raise ConfigurationError("k must be at least 2")
        if self.enforce_k_bound and self.k <= 50:
            raise ConfigurationError(f"k must exceed 50 (got {self.k}); pass enforce_k_bound=False for desk runs")

    def levels(self, n: int) -> int:
        """``m = floor(log_k(n/2))``, computed in integers."""
        m = 0
        while 2 * self.k ** (m + 1) <= n:
            m += 1
        if m < 1:
            raise ConfigurationError(f"n={n} is too small for k={self.k} (need n >= 2k)")
        return m

    def in_band(self, dx: np.ndarray, i: int, enlarged: bool = False) -> np.ndarray:
        lo, hi = self.enlarged if enlarged else self.band
        ki = self.k ** i
        return (10 * dx >= lo * ki) & (10 * dx <= hi * ki)

    def span_steps(self, i: int) -> int:
        return -(-self.span * self.k ** i // 10)


FULL_INTERVALS = IntervalConfig(k=700)
DESK_INTERVALS = IntervalConfig(k=10, enforce_k_bound=False)


def reachable(dx: np.ndarray) -> np.ndarray:
    """Cops that could still meet a robber drifting +2 a turn, ignoring rows.

    The gap ahead shrinks by 1 to 3 per round, so a cop more than two
    cells behind can never come back.
    """
    return dx >= -2


@dataclass
class Request:
    level: int
    direction: int
    start: int
    remaining: int
    cohort: list          # cop ids marked bad by this request
    away: list            # cohort cops on the side the robber leaves
    toward: int = 0       # turns actually moved in ``direction``
    wrong: int = 0        # turns moved against it


@dataclass
class RequestLedger:
    """Everything the requester did, for post-hoc checks."""

    active: dict = field(default_factory=dict)   # level -> Request
    bad: set = field(default_factory=set)
    served: dict = field(default_factory=dict)   # level -> requests opened
    overlaps: list = field(default_factory=list)
    breaks: dict = field(default_factory=dict)   # level -> turns the enlarged band was over capacity
    first_breaks: list = field(default_factory=list)
    star_ok: int = 0
    star_fail: int = 0
    wall_hits: int = 0
    badness_monotone: bool = True
    legs: int = 1
    log: list = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps(
            {
                "active": {str(i): {"direction": r.direction, "remaining": r.remaining} for i, r in self.active.items()},
                "bad": sorted(int(c) for c in self.bad),
                "served": {str(i): c for i, c in sorted(self.served.items())},
                "overlaps": self.overlaps,
                "breaks": {str(i): c for i, c in sorted(self.breaks.items())},
                "first_breaks": self.first_breaks,
                "star_ok": self.star_ok,
                "star_fail": self.star_fail,
                "wall_hits": self.wall_hits,
                "badness_monotone": self.badness_monotone,
                "legs": self.legs,
                "log": self.log,
            },
            sort_keys=True,
        )


class _Requests:
    """Band bookkeeping in a frame where the robber runs along +a and dodges along p."""

    def __init__(self, cfg: IntervalConfig, m: int, p_lo: int, p_hi: int):
        self.cfg = cfg
        self.m = m
        self.p_lo, self.p_hi = p_lo, p_hi
        self.ledger = RequestLedger()
        # per open request, progress of each "away" cop: id -> (done, elapsed at crossing, toward at crossing)
        self._watch: dict[int, dict] = {}

    def reset_active(self) -> None:
        for i in list(self.ledger.active):
            self._close(i)

    def step(self, t: int, ra: int, rp: int, ca: np.ndarray, cp: np.ndarray) -> int:
        cfg, led = self.cfg, self.ledger
        dx = ca - ra
        live = reachable(dx)
        bad = np.zeros(len(ca), dtype=bool)
        if led.bad:
            bad[list(led.bad)] = True
        before = len(led.bad)
        for i in range(1, self.m + 1):
            fresh = np.flatnonzero(cfg.in_band(dx, i) & live & ~bad)
            if len(fresh) and at_least_half_t_pow(len(fresh), i):
                self._open(t, i, fresh, rp, cp)
                bad[fresh] = True
            big = int(np.count_nonzero(cfg.in_band(dx, i, enlarged=True) & live))
            if more_than_half_t_pow(big, i + 1):
                led.breaks[i] = led.breaks.get(i, 0) + 1
                if len(led.first_breaks) < 20:
                    led.first_breaks.append({"t": t, "level": i, "cops": big})
        if len(led.bad) < before:
            led.badness_monotone = False
        self._track_star(dx)
        lead = min(led.active) if led.active else None
        dp = 0 if lead is None else 2 * led.active[lead].direction
        if dp and not self.p_lo <= rp + dp <= self.p_hi:
            led.wall_hits += 1
            dp = min(max(rp + dp, self.p_lo), self.p_hi) - rp
        for i in list(led.active):
            req = led.active[i]
            if dp * req.direction > 0:
                req.toward += 1
            elif dp * req.direction < 0:
                req.wrong += 1
            req.remaining -= 1
            if req.remaining <= 0:
                self._close(i)
        return dp

    def _open(self, t, i, fresh, rp, cp) -> None:
        led = self.ledger
        below = int(np.count_nonzero(cp[fresh] < rp))
        above = int(np.count_nonzero(cp[fresh] > rp))
        if below != above:
            direction = 1 if below > above else -1
        else:
            # no majority: head for the roomier side
            direction = 1 if (self.p_hi - rp) >= (rp - self.p_lo) else -1
        if i in led.active:
            led.overlaps.append({"t": t, "level": i})
            self._close(i)
        away = [int(c) for c in fresh if (cp[c] - rp) * direction < 0]
        req = Request(i, direction, t, self.cfg.span_steps(i), [int(c) for c in fresh], away)
        led.active[i] = req
        led.bad.update(int(c) for c in fresh)
        led.served[i] = led.served.get(i, 0) + 1
        led.log.append({"t": t, "level": i, "direction": direction, "cops": len(fresh)})
        self._watch[i] = {c: None for c in away}

    def _track_star(self, dx: np.ndarray) -> None:
        k = self.cfg.k
        for i, req in self.ledger.active.items():
            w = self._watch.get(i, {})
            limit = 35 * k ** (i - 1)  # 3.5 k^(i-1), in tenths
            for c, hit in w.items():
                if hit is None and 10 * dx[c] <= limit:
                    w[c] = (self.cfg.span_steps(i) - req.remaining, req.toward)

    def _close(self, i: int) -> None:
        req = self.ledger.active.pop(i)
        elapsed_total = self.cfg.span_steps(i) - req.remaining
        k = self.cfg.k
        for c, hit in self._watch.pop(i, {}).items():
            elapsed, up = hit if hit is not None else (elapsed_total, req.toward)
            # lost the cop if 3t/4 + 3k^(i-1) steps were made away from it
            if 4 * up >= 3 * elapsed + 12 * k ** (i - 1):
                self.ledger.star_ok += 1
            else:
                self.ledger.star_fail += 1


class IntervalRequester(_RobberBase):
    """Tunnel runner: +2 along the tunnel every turn, sidestepping 2 rows on requests."""

    name = "interval_requester"

    def __init__(self, cfg: IntervalConfig = DESK_INTERVALS, start=None):
        super().__init__(start)
        self.cfg = cfg

    def _setup(self, spec) -> None:
        board = spec.board
        if not isinstance(board, Tunnel) or board.d != 1:
            raise ConfigurationError(f"interval_requester runs in Tunnel(n,1), got {board}")
        self.m = self.cfg.levels(board.n)
        self.core = _Requests(self.cfg, self.m, 1, board.n)
        self.y0: Optional[int] = None
        self.max_displacement = 0

    @property
    def ledger(self) -> RequestLedger:
        return self.core.ledger

    def choose_start(self, spec, cops, rng):
        board = spec.board
        min_x = int(np.min(cops[:, 0])) if len(cops) else 0
        return (min_x - 2 * board.n, (board.n + 1) // 2)

    def place(self, spec, cops, rng):
        out = super().place(spec, cops, rng)
        self._setup(spec)
        return out

    def start(self, spec, start):
        super().start(spec, start)
        self._setup(spec)

    def move(self, state):
        rx, ry = state.robber
        if self.y0 is None:
            self.y0 = ry
        cops = state.cops
        dy = self.core.step(state.time, rx, ry, cops[:, 0], cops[:, 1]) if len(cops) else 0
        ny = ry + dy
        self.max_displacement = max(self.max_displacement, abs(ny - self.y0))
        return (rx + 2, ny)


def interval_requester(cfg: IntervalConfig = DESK_INTERVALS) -> IntervalRequester:
    return IntervalRequester(cfg)


# ---------------------------------------------------------------------------
# the grid looper
# ---------------------------------------------------------------------------

# heading -> (along, perpendicular) unit vectors; clockwise order
HEADINGS = {
    "right": ((1, 0), (0, 1)),
    "down": ((0, -1), (1, 0)),
    "left": ((-1, 0), (0, -1)),
    "up": ((0, 1), (-1, 0)),
}
CLOCKWISE = ["right", "down", "left", "up"]


@dataclass
class BanCounters:
    C: dict = field(default_factory=dict)   # level -> banned start squares
    D: dict = field(default_factory=dict)   # level -> banned turn positions
    candidates: int = 0

    def audit_starts(self, cfg: IntervalConfig, cop_count: int) -> list[str]:
        """Pigeonhole check ``C_i t^i / (64 k^(2i)) <= cops`` on squares, in integers."""
        bad = []
        for i, c in sorted(self.C.items()):
            lhs = c * c * T2_NUM ** i
            rhs = (64 * cfg.k ** (2 * i) * cop_count) ** 2 * T2_DEN ** i
            if lhs > rhs:
                bad.append(f"level {i}: C={c} with {cop_count} cops")
        return bad

    def to_json(self) -> dict:
        return {"C": {str(i): c for i, c in sorted(self.C.items())},
                "D": {str(i): c for i, c in sorted(self.D.items())},
                "candidates": self.candidates}


def _window_counts(cops: np.ndarray, n: int, centres: np.ndarray, half: int) -> np.ndarray:
    """Cops in ``[c - half, c + half)^2`` for each centre, via a prefix sum over the board."""
    lo = np.maximum(centres.min(axis=0) - half, 1)
    hi = np.minimum(centres.max(axis=0) + half - 1, n)
    shape = hi - lo + 1
    hist = np.zeros(tuple(shape), dtype=np.int64)
    if len(cops):
        inside = np.all((cops >= lo) & (cops <= hi), axis=1)
        idx = cops[inside] - lo
        np.add.at(hist, (idx[:, 0], idx[:, 1]), 1)
    pre = np.zeros((shape[0] + 1, shape[1] + 1), dtype=np.int64)
    pre[1:, 1:] = hist.cumsum(0).cumsum(1)
    a0 = np.clip(centres - half - lo, 0, shape)
    a1 = np.clip(centres + half - lo, 0, shape)
    return pre[a1[:, 0], a1[:, 1]] - pre[a0[:, 0], a1[:, 1]] - pre[a1[:, 0], a0[:, 1]] + pre[a0[:, 0], a0[:, 1]]


class GridLooper(_RobberBase):
    """Capture robber on ``[n]^2``: circles the board clockwise using interval requests.

    The start is the first cell of the ``n/6`` square above ``y = 2n/3`` on
    the left edge whose ``2k^i`` squares hold at most ``t^i/4`` cops for
    every level.  He runs right, and once ``2n/3`` of the way across takes
    the first turn position that passes the same test (forced at ``5n/6``).
    """

    name = "grid_looper"

    def __init__(self, cfg: IntervalConfig = DESK_INTERVALS, start=None):
        super().__init__(start)
        self.cfg = cfg
        self.bans = BanCounters()
        self.turns = 0
        self.forced_turns = 0

    def _setup(self, spec) -> None:
        board = spec.board
        if not isinstance(board, Grid) or board.d != 2:
            raise ConfigurationError(f"grid_looper plays on Grid(n,2), got {board}")
        self.n = board.n
        self.m = self.cfg.levels(board.n)
        self.heading = "right"
        self._frame()

    def _frame(self) -> None:
        a, p = HEADINGS[self.heading]
        self.ea, self.ep = np.array(a), np.array(p)
        corners = np.array([[1, 1], [1, self.n], [self.n, 1], [self.n, self.n]])
        proj = corners @ self.ep
        if hasattr(self, "core"):
            ledger = self.core.ledger
            self.core.reset_active()
        else:
            ledger = None
        self.core = _Requests(self.cfg, self.m, int(proj.min()), int(proj.max()))
        if ledger is not None:
            # every leg is a fresh tunnel run: old marks say nothing about the cops ahead now
            ledger.bad = set()
            ledger.legs += 1
            self.core.ledger = ledger

    @property
    def ledger(self) -> RequestLedger:
        return self.core.ledger

    def _banned_levels(self, cops: np.ndarray, centres: np.ndarray) -> np.ndarray:
        """Boolean ``(len(centres), m)``: square of level ``i`` over capacity."""
        out = np.zeros((len(centres), self.m), dtype=bool)
        for i in range(1, self.m + 1):
            cnt = _window_counts(cops, self.n, centres, self.cfg.k ** i)
            out[:, i - 1] = [more_than_quarter_t_pow(int(c), i) for c in cnt]
        return out

    def choose_start(self, spec, cops, rng):
        self._setup(spec)
        n = self.n
        side = max(n // 6, 1)
        y0 = -(-2 * n // 3) + 1
        xs, ys = np.meshgrid(np.arange(1, side + 1), np.arange(y0, min(y0 + side, n + 1)), indexing="ij")
        centres = np.stack([xs.ravel(), ys.ravel()], axis=1)
        banned = self._banned_levels(np.asarray(cops, dtype=np.int64).reshape(-1, 2), centres)
        self.bans.candidates = len(centres)
        for i in range(1, self.m + 1):
            self.bans.C[i] = int(banned[:, i - 1].sum())
        ok = np.flatnonzero(~banned.any(axis=1))
        if not len(ok):
            raise ConfigurationError(f"no unbanned start square; ban tallies {self.bans.C}")
        return tuple(int(v) for v in centres[ok[0]])

    def place(self, spec, cops, rng):
        out = super().place(spec, cops, rng)
        if not hasattr(self, "core"):
            self._setup(spec)
        return out

    def start(self, spec, start):
        super().start(spec, start)
        self._setup(spec)

    def progress(self, pos) -> int:
        x, y = pos
        return {"right": x, "down": self.n + 1 - y, "left": self.n + 1 - x, "up": y}[self.heading]

    def _maybe_turn(self, state) -> None:
        p = self.progress(state.robber)
        if 3 * p < 2 * self.n:
            return
        here = np.asarray([state.robber], dtype=np.int64)
        banned = self._banned_levels(state.cops, here)[0]
        forced = 6 * p >= 5 * self.n
        if banned.any() and not forced:
            for i in np.flatnonzero(banned):
                self.bans.D[int(i) + 1] = self.bans.D.get(int(i) + 1, 0) + 1
            return
        self.turns += 1
        self.forced_turns += int(banned.any())
        self.heading = CLOCKWISE[(CLOCKWISE.index(self.heading) + 1) % 4]
        self._frame()

    def move(self, state):
        self._maybe_turn(state)
        r = np.asarray(state.robber, dtype=np.int64)
        cops = np.asarray(state.cops, dtype=np.int64).reshape(-1, 2)
        if len(cops):
            dp = self.core.step(state.time, int(r @ self.ea), int(r @ self.ep), cops @ self.ea, cops @ self.ep)
        else:
            dp = 0
        return self.board.clamp(r + 2 * self.ea + dp * self.ep)


def grid_looper(cfg: IntervalConfig = DESK_INTERVALS) -> GridLooper:
    return GridLooper(cfg)
