"""Moving Covering strategies between the grid ``[n]^2`` and the torus of the same side.

Folding a torus coordinate into one half of ``[1, n]`` (``v`` or its mirror
``n+1-v``) is 1-Lipschitz, so a folded robber is a legal grid robber and a
folded cop makes legal grid moves.
"""
from __future__ import annotations

import itertools
from typing import Callable, Optional

import numpy as np

from ..board import Grid, Torus, fold_to_quadrant
from ..engine import COPS_TO_MOVE, ConfigurationError, CopController, Covering, GameState, MatchSpec

QUADRANTS = tuple(itertools.product((False, True), repeat=2))


def fold_array(n: int, pts: np.ndarray, quadrant) -> np.ndarray:
    pts = np.asarray(pts, dtype=np.int64)
    mirror = n + 1 - pts
    up = np.asarray(quadrant, dtype=bool)
    return np.where(up, np.maximum(pts, mirror), np.minimum(pts, mirror))


def _local_state(time: int, cops: np.ndarray, robber) -> GameState:
    robber = tuple(int(v) for v in robber)
    return GameState(
        time=time, cops=cops, robber=robber, phase=COPS_TO_MOVE,
        covered_now=False, ever_covered=False, coverage_broken=False, max_robber_x=robber[0],
    )


class TorusLifter(CopController):
    """Four copies of a grid strategy, each chasing one folded image of the robber.

    Copy ``q`` plays on the grid against the robber folded into quadrant
    ``q``.  Grid cells and grid moves are also torus cells and moves, and
    the robber always lies in some quadrant, where his folded image is
    himself, so that copy covers him.
    """

    name = "torus_lifter"

    def __init__(self, grid_factory: Callable[[], CopController], n: int):
        self.factory = grid_factory
        self.n = n
        self.copies = [grid_factory() for _ in QUADRANTS]
        self.team_size = self.copies[0].cops_needed(Grid(n, 2))
        if not self.team_size:
            raise ConfigurationError("grid strategy must report its cop count")

    def cops_needed(self, board=None) -> int:
        return 4 * self.team_size

    def phantoms(self, robber) -> list[tuple[int, ...]]:
        return [fold_to_quadrant(self.n, robber, q) for q in QUADRANTS]

    def place(self, spec, rng):
        board = spec.board
        if not isinstance(board, Torus) or board.n != self.n or board.d != 2:
            raise ConfigurationError(f"lifter built for Torus({self.n},2), got {board}")
        if spec.cop_count != self.cops_needed():
            raise ConfigurationError(f"lifter needs exactly {self.cops_needed()} cops, got {spec.cop_count}")
        start = spec.declared_start()
        self.grid_cops = []
        for ctrl, q in zip(self.copies, QUADRANTS):
            ph = None if start is None else fold_to_quadrant(self.n, start, q)
            ls = MatchSpec(Grid(self.n, 2), Covering(), self.team_size, robber_speed=spec.robber_speed,
                           seed=spec.seed, robber_start=ph)
            self.grid_cops.append(np.asarray(ctrl.place(ls, rng), dtype=np.int64).reshape(-1, 2))
        return np.concatenate(self.grid_cops, axis=0)

    def move(self, state):
        for i, (ctrl, ph) in enumerate(zip(self.copies, self.phantoms(state.robber))):
            self.grid_cops[i] = np.asarray(
                ctrl.move(_local_state(state.time, self.grid_cops[i], ph)), dtype=np.int64
            ).reshape(-1, 2)
        return np.concatenate(self.grid_cops, axis=0)


def torus_lifter(grid_factory: Callable[[], CopController], n: int) -> TorusLifter:
    return TorusLifter(grid_factory, n)


class GridFromTorus(CopController):
    """Plays a torus strategy on the grid by fielding the four folds of every torus cop.

    A grid robber is also a torus robber, so the torus strategy is run
    against him directly.  Whenever some torus cop sits on the robber, the
    fold of that cop into the robber's quadrant is the robber's own cell.
    """

    name = "grid_from_torus"

    def __init__(self, torus_ctrl: CopController, n: int, torus_cops: Optional[int] = None):
        self.inner = torus_ctrl
        self.n = n
        self.torus_cops = torus_cops or torus_ctrl.cops_needed(Torus(n, 2))
        if not self.torus_cops:
            raise ConfigurationError("torus strategy must report its cop count")

    def cops_needed(self, board=None) -> int:
        return 4 * self.torus_cops

    def _fold_all(self, tc: np.ndarray) -> np.ndarray:
        return np.concatenate([fold_array(self.n, tc, q) for q in QUADRANTS], axis=0)

    def place(self, spec, rng):
        board = spec.board
        if not isinstance(board, Grid) or board.n != self.n or board.d != 2:
            raise ConfigurationError(f"built for Grid({self.n},2), got {board}")
        if spec.cop_count != self.cops_needed():
            raise ConfigurationError(f"needs exactly {self.cops_needed()} cops, got {spec.cop_count}")
        ts = MatchSpec(Torus(self.n, 2), Covering(), self.torus_cops, robber_speed=spec.robber_speed,
                       seed=spec.seed, robber_start=spec.declared_start())
        self.tc = np.asarray(self.inner.place(ts, rng), dtype=np.int64).reshape(-1, 2)
        return self._fold_all(self.tc)

    def move(self, state):
        self.tc = np.asarray(
            self.inner.move(_local_state(state.time, self.tc, state.robber)), dtype=np.int64
        ).reshape(-1, 2)
        return self._fold_all(self.tc)


def grid_from_torus(torus_ctrl: CopController, n: int, torus_cops: Optional[int] = None) -> GridFromTorus:
    return GridFromTorus(torus_ctrl, n, torus_cops)
