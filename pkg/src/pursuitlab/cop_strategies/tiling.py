"""Tiling a big square with copies of a small-square strategy, plus one moving hole.

The board of side ``F*N`` is cut into ``F^2`` tiles of side ``N``.  Every
tile runs its own copy of a base strategy against a phantom robber, the
real robber clamped into that tile.  All tiles but one are staffed by a
team of real cops standing on the base strategy's prescribed (phantom)
positions, so whenever the robber is in a staffed tile its phantom is the
robber himself and the team covers him.

The empty tile (the hole) sits in the bottom-left or top-right corner.
The board is split into three bands by the anti-diagonals ``x+y = 2S/3``
and ``x+y = 4S/3`` (``S`` the board side).  When the robber enters the band
touching the hole's corner, the hole is sent to the opposite corner: every
team on an L-shaped tile path moves one tile along it, which is a hole
shift.  The path hugs the bottom and right edges when the robber is on or
above ``y = x`` and the left and top edges otherwise, so it stays far from
him.  A team moved to a new tile chases that tile's phantom cops axis by
axis until every cop sits on its phantom ("manned").
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Sequence

import numpy as np

from ..board import Coord, Grid, InvalidInput, Rect, project
from ..engine import (
    COPS_TO_MOVE,
    ConfigurationError,
    CopController,
    Covering,
    GameState,
    InvariantViolation,
    MatchSpec,
)
from .guards import BlockGuard

Move = tuple[Coord, Coord]


def _adjacent(a: Sequence[int], b: Sequence[int]) -> bool:
    return max(abs(x - y) for x, y in zip(a, b)) == 1


def hole_shift(line: Sequence[Sequence[int]], hole_end: str = "start") -> list[Move]:
    """One synchronized step moving the hole of a cop line to its other end.

    ``line`` lists the cells of a path in order, including the empty cell,
    which is ``line[0]`` when ``hole_end == "start"`` and ``line[-1]`` when
    ``hole_end == "end"``.  Every cop steps one cell toward the hole; the
    returned ``(from, to)`` pairs are listed from the hole outwards.
    """
    cells = [tuple(int(v) for v in c) for c in line]
    if len(cells) < 2:
        raise InvalidInput("a hole shift needs the hole and at least one cop")
    if len(set(cells)) != len(cells):
        raise InvalidInput("path visits a cell twice")
    for a, b in zip(cells, cells[1:]):
        if len(a) != len(b) or not _adjacent(a, b):
            raise InvalidInput(f"path is not contiguous at {a} -> {b}")
    if hole_end == "end":
        cells = cells[::-1]
    elif hole_end != "start":
        raise InvalidInput(f"hole_end must be 'start' or 'end', got {hole_end!r}")
    return [(cells[i + 1], cells[i]) for i in range(len(cells) - 1)]


def apply_moves(occupied: set, moves: Sequence[Move]) -> set:
    """Apply simultaneous moves to a set of occupied cells."""
    sources = {s for s, _ in moves}
    if not sources <= occupied:
        raise InvalidInput("a move starts from an empty cell")
    return (occupied - sources) | {t for _, t in moves}


def corner_path(F: int, to_corner: str, via: str) -> list[tuple[int, int]]:
    """Tile path between the two corners, starting at the corner that receives the hole.

    ``via == "bottom_right"`` runs along the bottom row and right column;
    ``"left_top"`` along the left column and top row.
    """
    if via == "bottom_right":
        path = [(i, 0) for i in range(F)] + [(F - 1, j) for j in range(1, F)]
    elif via == "left_top":
        path = [(0, j) for j in range(F)] + [(i, F - 1) for i in range(1, F)]
    else:
        raise InvalidInput(f"unknown route {via!r}")
    # path currently runs bottom-left -> top-right
    return path if to_corner == "bl" else path[::-1]


@dataclass
class TileConfig:
    tile_factor: int = 15
    team_count: Optional[int] = None
    depth: int = 1
    base_strategy: Callable[[int], CopController] = field(default=lambda N: BlockGuard(N, 2))
    base_side: Optional[int] = None

    def __post_init__(self) -> None:
        if self.team_count is None:
            self.team_count = self.tile_factor ** 2 - 1
        if self.team_count != self.tile_factor ** 2 - 1:
            raise ConfigurationError("team count must be tile_factor^2 - 1")
        if self.depth < 1:
            raise ConfigurationError("depth must be >= 1")
        if self.tile_factor < 2:
            raise ConfigurationError("tile_factor must be >= 2")

    def board_side(self, base_side: int) -> int:
        return base_side * self.tile_factor ** self.depth


FULL_TILES = TileConfig(tile_factor=15)


class RecursiveTiler(CopController):
    """Covering on ``[F^depth * N]^2`` from a base covering strategy on ``[N]^2``."""

    name = "recursive_tiler"

    def __init__(self, cfg: TileConfig, side: int, strict: bool = True):
        F = cfg.tile_factor
        if side % F:
            raise ConfigurationError(f"board side {side} is not a multiple of {F}")
        self.cfg = cfg
        self.F = F
        self.side = side
        self.N = side // F
        self.strict = strict
        if cfg.depth == 1:
            self._child = lambda: cfg.base_strategy(self.N)
        else:
            sub = replace(cfg, depth=cfg.depth - 1)
            self._child = lambda: RecursiveTiler(sub, self.N, strict)
        probe = self._child()
        self.team_size = probe.cops_needed(Grid(self.N, 2))
        if not self.team_size:
            raise ConfigurationError("base strategy must report its cop count")
        self.violations: list[str] = []
        self.episodes = 0
        self.active_episodes_max = 0

    def cops_needed(self, board=None) -> int:
        return (self.F ** 2 - 1) * self.team_size

    # -- geometry -------------------------------------------------------
    def tile_rect(self, t: tuple[int, int]) -> Rect:
        return Rect.square((t[0] * self.N + 1, t[1] * self.N + 1), self.N)

    def tile_of(self, p: Sequence[int]) -> tuple[int, int]:
        return ((p[0] - 1) // self.N, (p[1] - 1) // self.N)

    def band(self, p: Sequence[int]) -> int:
        s = (p[0] - 1) + (p[1] - 1)
        S = self.side
        if 3 * s < 2 * S:
            return 0
        if 3 * s < 4 * S:
            return 1
        return 2

    # -- setup ----------------------------------------------------------
    def place(self, spec, rng):
        board = spec.board
        if not isinstance(board, Grid) or board.d != 2 or board.n != self.side:
            raise ConfigurationError(f"tiler built for Grid({self.side},2), got {board}")
        if spec.cop_count != self.cops_needed():
            raise ConfigurationError(f"tiler needs exactly {self.cops_needed()} cops, got {spec.cop_count}")
        self.board = board
        self.speed = spec.robber_speed
        start = spec.declared_start()
        r = start if start is not None else board.center
        # hole goes in the corner far from the robber
        self.hole = "tr" if (r[0] - 1) + (r[1] - 1) < self.side - 1 else "bl"
        F, N = self.F, self.N
        self.tiles = [(i, j) for j in range(F) for i in range(F)]
        self.ctrl = {}
        self.phantom_cops = {}
        self.local_spec = {}
        for t in self.tiles:
            c = self._child()
            lr = self._local(t, r)
            ls = MatchSpec(Grid(N, 2), Covering(), self.team_size, robber_speed=spec.robber_speed,
                           seed=spec.seed, robber_start=lr)
            self.local_spec[t] = ls
            self.ctrl[t] = c
            self.phantom_cops[t] = np.asarray(c.place(ls, rng), dtype=np.int64).reshape(-1, 2)
        hole_tile = (0, 0) if self.hole == "bl" else (F - 1, F - 1)
        self.team_tile = [t for t in self.tiles if t != hole_tile]
        self.tile_team = {t: k for k, t in enumerate(self.team_tile)}
        self.manned = [True] * len(self.team_tile)
        self.positions = np.concatenate(
            [self._global(t, self.phantom_cops[t]) for t in self.team_tile], axis=0
        )
        self.episode: Optional[dict] = None
        self._memoryless = bool(getattr(self.ctrl[self.tiles[0]], "memoryless", False))
        self._last_phantom = {}
        return self.positions.copy()

    def _local(self, t, p) -> Coord:
        q = project(self.tile_rect(t), p)
        return (q[0] - t[0] * self.N, q[1] - t[1] * self.N)

    def _global(self, t, local: np.ndarray) -> np.ndarray:
        return local + np.array([t[0] * self.N, t[1] * self.N], dtype=np.int64)

    def _hole_tile(self) -> Optional[tuple[int, int]]:
        staffed = set(self.tile_team)
        free = [t for t in self.tiles if t not in staffed]
        return free[0] if len(free) == 1 else None

    # -- play -----------------------------------------------------------
    def move(self, state):
        r = tuple(int(v) for v in state.robber)
        # advance every tile's base strategy against its phantom robber; a
        # memoryless base whose phantom did not move would answer the same
        for t in self.tiles:
            lr = self._local(t, r)
            if self._memoryless and self._last_phantom.get(t) == lr:
                continue
            self._last_phantom[t] = lr
            ls = GameState(
                time=state.time,
                cops=self.phantom_cops[t],
                robber=lr,
                phase=COPS_TO_MOVE,
                covered_now=False,
                ever_covered=False,
                coverage_broken=False,
                max_robber_x=lr[0],
            )
            self.phantom_cops[t] = np.asarray(self.ctrl[t].move(ls), dtype=np.int64).reshape(-1, 2)
        self._maybe_start_episode(r)
        B = self.team_size
        for k, t in enumerate(self.team_tile):
            target = self._global(t, self.phantom_cops[t])
            cur = self.positions[k * B:(k + 1) * B]
            if self.manned[k]:
                cur[:] = target
            else:
                cur += np.clip(target - cur, -1, 1)
                if np.array_equal(cur, target):
                    self.manned[k] = True
        if self.episode is not None and all(self.manned):
            self.episode = None
        self._audit(r)
        return self.positions.copy()

    def _maybe_start_episode(self, r) -> None:
        b = self.band(r)
        want = None
        if self.hole == "tr" and b == 2:
            want = "bl"
        elif self.hole == "bl" and b == 0:
            want = "tr"
        if want is None:
            return
        if self.episode is not None:
            msg = "new hole move requested while the previous one is unfinished"
            self.active_episodes_max = 2
            self.violations.append(msg)
            if self.strict:
                raise InvariantViolation(msg)
            return
        via = "bottom_right" if r[1] >= r[0] else "left_top"
        path = corner_path(self.F, want, via)
        # path[0] becomes the new hole; the old hole (path[-1]) gets filled
        moves = hole_shift(path, hole_end="end")
        for src, dst in moves:
            k = self.tile_team[src]
            self.team_tile[k] = dst
            self.manned[k] = False
        self.tile_team = {t: k for k, t in enumerate(self.team_tile)}
        self.hole = want
        self.episode = {"to": want, "via": via}
        self.episodes += 1
        self.active_episodes_max = max(self.active_episodes_max, 1)

    def _audit(self, r) -> None:
        t = self.tile_of(r)
        k = self.tile_team.get(t)
        problem = None
        if k is None:
            problem = f"robber at {r} is in the empty tile {t}"
        elif not self.manned[k]:
            problem = f"robber at {r} is in tile {t} whose team is still moving in"
        if problem:
            self.violations.append(problem)
            if self.strict:
                raise InvariantViolation(problem)

    def teams_in_tiles(self) -> bool:
        """True when every manned team stands inside its own tile."""
        B = self.team_size
        for k, t in enumerate(self.team_tile):
            if not self.manned[k]:
                continue
            if not self.tile_rect(t).contains_array(self.positions[k * B:(k + 1) * B]).all():
                return False
        return True


def recursive_tiler(cfg: TileConfig = FULL_TILES, side: Optional[int] = None, strict: bool = True) -> RecursiveTiler:
    if side is None:
        base = cfg.base_side or 15
        side = cfg.board_side(base)
    return RecursiveTiler(cfg, side, strict)
