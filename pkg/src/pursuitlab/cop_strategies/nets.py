"""Rectangular nets of cops for Rugby on ``Z x [n]`` and for a fast robber on ``[n]^2``.

A net is the boundary of a rectangle, one cop per boundary cell.  A
speed-2 robber can hop over a single column of cops, but he cannot do it
without first landing next to the wall (or on it), and any cop next to the
robber steps onto him.  So a wall is a barrier as long as it spans the
robber's row.

The net's centre row follows ``c + floor((r - c)/2)``, ``c`` the tunnel's
middle row and ``r`` the robber's row.  That target moves at most one row
per robber move, so the net (one row per turn) keeps up once it has caught
up, and the robber stays within half the board height of the centre.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..board import Grid, Tunnel
from ..engine import ConfigurationError, CopController
from .tiling import hole_shift


@dataclass(frozen=True)
class NetConfig:
    v_side: int = 5050
    h_side: int = 30
    gap_period: int = 28
    guard_margin: int = 25
    shift_radius: int = 6
    undo_radius: int = 12

    def __post_init__(self) -> None:
        if self.v_side < 2 or self.h_side < 1:
            raise ConfigurationError("net needs v_side >= 2 and h_side >= 1")
        if self.v_side <= 2 * self.guard_margin:
            raise ConfigurationError("v_side must exceed twice the guard margin")
        if self.gap_period <= 2 * self.undo_radius:
            raise ConfigurationError("gaps closer than twice the undo radius could need two moves at once")
        if not 0 < self.shift_radius < self.undo_radius:
            raise ConfigurationError("need 0 < shift_radius < undo_radius")

    @property
    def half(self) -> int:
        return self.v_side // 2

    @property
    def margin(self) -> int:
        return self.guard_margin

    def perimeter(self) -> int:
        return 2 * self.v_side + 2 * self.h_side


FULL_NET = NetConfig(5050, 30, 28, 25)
DESK_NET = NetConfig(50, 6, 28, 5)


def centre_target(c: int, r: int) -> int:
    return c + (r - c) // 2


def row_slack(cfg: NetConfig, n: int) -> int:
    """Least distance, over robber rows, from the robber's row to the net's top or bottom row.

    Assumes the centre already tracks ``centre_target``.  The robber's row
    is inside the net iff this is >= 0; the margin guarantee needs it to be
    >= ``cfg.margin``.
    """
    c = (n + 1) // 2
    worst = None
    for r in range(1, n + 1):
        m = centre_target(c, r)
        s = min(r - (m - cfg.half), (m + cfg.half) - r)
        worst = s if worst is None else min(worst, s)
    return worst


def ring_cells(x0: int, x1: int, y0: int, y1: int) -> list[tuple[int, int]]:
    """Boundary of ``[x0,x1] x [y0,y1]`` in counter-clockwise order from the bottom-left corner."""
    out = [(x, y0) for x in range(x0, x1 + 1)]
    out += [(x1, y) for y in range(y0 + 1, y1 + 1)]
    out += [(x, y1) for x in range(x1 - 1, x0 - 1, -1)]
    out += [(x0, y) for y in range(y1 - 1, y0, -1)]
    return out


def _pounce(cops: np.ndarray, robber: np.ndarray) -> Optional[int]:
    """Index of a cop within one step of the robber, if any."""
    d = np.abs(cops - robber).max(axis=1)
    hits = np.flatnonzero(d <= 1)
    return int(hits[0]) if len(hits) else None


class RugbyNet(CopController):
    """Net blocking the robber from crossing ``x = 0`` on ``Z x [n]``.

    Depth 1 is the boundary ring of ``[-h_side, 0] x [centre-half, centre+half]``.
    Depth 2 (an extrapolation of the recursive construction to single-cell
    sub-squares) leaves a gap every ``gap_period`` rows on both long walls,
    away from the top and bottom ``guard_margin`` rows.  When the robber
    comes within ``shift_radius`` of a gap, the cops along the ring step one
    cell toward it, which moves the gap onto the top or bottom edge in one
    turn; once the robber is more than ``undo_radius`` from the gap's home
    the shift is reversed.  The shift runs around the side of the ring away
    from the robber: through the top when he is on or below the midline.
    """

    name = "rugby_net"

    def __init__(self, cfg: NetConfig = DESK_NET, depth: int = 1, require_margin: bool = False):
        if depth not in (1, 2):
            raise ConfigurationError("rugby_net supports depth 1 and 2")
        self.cfg = cfg
        self.depth = depth
        self.require_margin = require_margin
        x0, x1 = -cfg.h_side, 0
        y0, y1 = -cfg.half, cfg.v_side - cfg.half
        self.rel = ring_cells(x0, x1, y0, y1)  # relative to (0, centre)
        self.rel_arr = np.asarray(self.rel, dtype=np.int64)
        self.gap_homes = self._gap_homes() if depth == 2 else []
        self._count = len(self.rel) - len(self.gap_homes)
        self.margin_breaks = 0
        self.enclosed = False
        self.shifts = 0
        self.undos = 0
        self.conflicts = 0

    def _gap_homes(self) -> list[int]:
        cfg = self.cfg
        y0 = -cfg.half
        homes = []
        for i, (x, y) in enumerate(self.rel):
            if x not in (-cfg.h_side, 0):
                continue
            k = y - y0
            if k <= cfg.guard_margin or k >= cfg.v_side - cfg.guard_margin:
                continue
            if k % cfg.gap_period == cfg.gap_period // 2:
                homes.append(i)
        return homes

    def cops_needed(self, board=None) -> int:
        return self._count

    def place(self, spec, rng):
        board = spec.board
        if not isinstance(board, Tunnel) or board.d != 1:
            raise ConfigurationError(f"rugby_net plays on Tunnel(n,1), got {board}")
        if spec.cop_count != self.cops_needed():
            raise ConfigurationError(f"rugby_net needs exactly {self.cops_needed()} cops, got {spec.cop_count}")
        slack = row_slack(self.cfg, board.n)
        if slack < 0:
            raise ConfigurationError(f"net of height {self.cfg.v_side} cannot span the robber's row on n={board.n}")
        if self.require_margin and slack < self.cfg.margin:
            raise ConfigurationError(f"net keeps only {slack} rows around the robber, margin {self.cfg.margin} needed")
        self.board = board
        self.c = (board.n + 1) // 2
        self.centre = self.c
        # occupant of each ring cell (cop id) or -1 for a gap
        gaps = set(self.gap_homes)
        ids = iter(range(self.cops_needed()))
        self.occ = np.array([-1 if i in gaps else next(ids) for i in range(len(self.rel))])
        self.parked: dict[int, dict] = {}  # home index -> shift record
        self._base = None
        return self._positions()

    def _virtual(self) -> np.ndarray:
        # occupancy only changes when gaps shift, so depth 1 reuses one layout
        base = self._base if self.depth == 1 else None
        if base is None:
            base = np.empty((self._count, 2), dtype=np.int64)
            held = self.occ >= 0
            base[self.occ[held]] = self.rel_arr[held]
            if self.depth == 1:
                self._base = base
        out = base.copy()
        out[:, 1] += self.centre
        return out

    def _positions(self) -> np.ndarray:
        return self.board.clamp_array(self._virtual())

    def net_rows(self) -> tuple[int, int]:
        return self.centre - self.cfg.half, self.centre - self.cfg.half + self.cfg.v_side

    def move(self, state):
        r = np.asarray(state.robber, dtype=np.int64)
        hit = _pounce(state.cops, r)
        shifted = False
        if self.depth == 2:
            shifted = self._manage_gaps(r)
        if not shifted:
            target = centre_target(self.c, int(r[1]))
            self.centre += int(np.sign(target - self.centre))
        virt = self._virtual()
        out = self.board.clamp_array(virt)
        if hit is not None:
            out[hit] = r
        self._audit(virt, state.robber)
        return out

    def _audit(self, cops: np.ndarray, r) -> None:
        """Track enclosure and the margin rows; ``cops`` are unclamped, so rows off the tunnel count."""
        lo, hi = self.net_rows()
        if -self.cfg.h_side <= r[0] <= 0 and lo <= r[1] <= hi:
            self.enclosed = True
        if r[0] < -self.cfg.h_side:
            ys = cops[:, 1]
            m = self.cfg.margin
            if not ((ys == r[1] + m).any() and (ys == r[1] - m).any()):
                self.margin_breaks += 1

    # -- depth 2 --------------------------------------------------------
    def _cell(self, i: int) -> np.ndarray:
        x, y = self.rel[i]
        return np.array([x, y + self.centre])

    def _route(self, start: int, r_y: int) -> list[int]:
        """Ring indices from ``start`` to the first cell of the top (or bottom) edge.

        The walk stops early at the cell before any other gap it meets.
        """
        lo, hi = self.net_rows()
        mid = (lo + hi) / 2
        to_top = r_y <= mid
        L = len(self.rel)
        x, _ = self.rel[start]
        right_wall = x == 0
        # counter-clockwise climbs the right wall and descends the left one
        step = 1 if (right_wall == to_top) else -1
        edge_y = self.rel[0][1] + (self.cfg.v_side if to_top else 0)
        path = [start]
        i = start
        while True:
            i = (i + step) % L
            if self.occ[i] == -1:
                # stop short of another gap: the two end up side by side, far from the robber
                return path
            path.append(i)
            cx, cy = self.rel[i]
            if cy == edge_y and cx not in (-self.cfg.h_side, 0):
                return path

    def _manage_gaps(self, r: np.ndarray) -> bool:
        cfg = self.cfg
        for home in self.gap_homes:
            rec = self.parked.get(home)
            if rec is None:
                if np.abs(self._cell(home) - r).max() <= cfg.shift_radius:
                    path = self._route(home, int(r[1]))
                    self._shift(path)
                    self.parked[home] = {"path": path}
                    self.shifts += 1
                    return True
            elif np.abs(self._cell(home) - r).max() > cfg.undo_radius:
                back = rec["path"][::-1]
                self._shift(back)
                del self.parked[home]
                self.undos += 1
                return True
        return False

    def _shift(self, path: list[int]) -> None:
        """Move the gap at ``path[0]`` to ``path[-1]``; every cop on the way steps one cell."""
        if self.occ[path[0]] != -1 or any(self.occ[i] == -1 for i in path[1:]):
            self.conflicts += 1
            return
        cells = [self.rel[i] for i in path]
        hole_shift(cells, hole_end="start")  # validates contiguity
        occ = self.occ.copy()
        for a, b in zip(path, path[1:]):
            occ[a] = self.occ[b]
        occ[path[-1]] = -1
        self.occ = occ


def rugby_net(cfg: NetConfig = DESK_NET, depth: int = 1, require_margin: bool = False) -> RugbyNet:
    return RugbyNet(cfg, depth, require_margin)


class FastRobberNet(CopController):
    """Capturing a speed-2 robber on ``[n]^2`` with a net swept across the board.

    Stage 1: the net starts in the middle of the board with its long side
    vertical, tracks the robber's row as in Rugby and moves one column per
    turn toward the robber's side.  Stage 2 starts when the robber is inside
    the rectangle: every side that is at least two cells from him moves one
    cell inward, cops on a shrinking side sliding with it (the count is
    conserved; cops may share a cell).  Any cop next to the robber steps
    onto him.
    """

    name = "fast_robber_net"

    def __init__(self, cfg: NetConfig = DESK_NET):
        self.cfg = cfg
        self.stage = 1
        self.rect: Optional[list[int]] = None

    def cops_needed(self, board=None) -> int:
        return self.cfg.perimeter()

    def place(self, spec, rng):
        board = spec.board
        if not isinstance(board, Grid) or board.d != 2:
            raise ConfigurationError(f"fast_robber_net plays on Grid(n,2), got {board}")
        if spec.cop_count != self.cops_needed():
            raise ConfigurationError(f"fast_robber_net needs exactly {self.cops_needed()} cops, got {spec.cop_count}")
        if self.cfg.v_side >= board.n or self.cfg.h_side >= board.n:
            raise ConfigurationError("net does not fit on the board")
        if row_slack(self.cfg, board.n) < 0:
            raise ConfigurationError(f"net of height {self.cfg.v_side} cannot span the robber's row on n={board.n}")
        self.board = board
        self.c = (board.n + 1) // 2
        x0 = self.c - self.cfg.h_side // 2
        y0 = self.c - self.cfg.half
        self.rect = [x0, x0 + self.cfg.h_side, y0, y0 + self.cfg.v_side]
        self.virt = np.asarray(ring_cells(*self.rect), dtype=np.int64)
        self.stage = 1
        return board.clamp_array(self.virt)

    def inside(self, r) -> bool:
        x0, x1, y0, y1 = self.rect
        return x0 < r[0] < x1 and y0 < r[1] < y1

    def move(self, state):
        r = np.asarray(state.robber, dtype=np.int64)
        real = self.board.clamp_array(self.virt)
        hit = _pounce(real, r)
        if self.stage == 1 and self.inside(r):
            self.stage = 2
        if self.stage == 1:
            self._sweep(r)
        else:
            self._shrink(r)
        out = self.board.clamp_array(self.virt)
        if hit is not None:
            out[hit] = r
            self.virt[hit] = r
        return out

    def _sweep(self, r: np.ndarray) -> None:
        x0, x1, y0, y1 = self.rect
        centre = y0 + self.cfg.half
        dy = int(np.sign(centre_target(self.c, int(r[1])) - centre))
        if r[0] < x0 and x0 > 1:
            dx = -1
        elif r[0] > x1 and x1 < self.board.n:
            dx = 1
        else:
            dx = 0
        self.rect = [x0 + dx, x1 + dx, y0 + dy, y1 + dy]
        self.virt = self.virt + np.array([dx, dy])

    def _shrink(self, r: np.ndarray) -> None:
        x0, x1, y0, y1 = self.rect
        # keep every side at least one cell away from the robber
        if r[0] - x0 >= 2:
            x0 += 1
        if x1 - r[0] >= 2:
            x1 -= 1
        if r[1] - y0 >= 2:
            y0 += 1
        if y1 - r[1] >= 2:
            y1 -= 1
        self.rect = [x0, x1, y0, y1]
        self.virt = np.stack(
            [np.clip(self.virt[:, 0], x0, x1), np.clip(self.virt[:, 1], y0, y1)], axis=1
        )


def fast_robber_net(cfg: NetConfig = DESK_NET) -> FastRobberNet:
    return FastRobberNet(cfg)
