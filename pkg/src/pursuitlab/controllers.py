"""Generic controllers used as opponents, fuzzers and baselines."""
from __future__ import annotations

from typing import Optional, Sequence

import numpy as np

from .board import BoardKind, Coord, Torus
from .engine import CopController, GameState, MatchSpec, RobberController


def step_toward(pos: np.ndarray, target: np.ndarray, limit: int = 1) -> np.ndarray:
    """Move each row of ``pos`` at most ``limit`` per axis toward ``target``."""
    return pos + np.clip(target - pos, -limit, limit)


def torus_step_toward(n: int, pos: np.ndarray, target: np.ndarray, limit: int = 1) -> np.ndarray:
    delta = (target - pos) % n
    delta = np.where(delta > n // 2, delta - n, delta)
    return (pos + np.clip(delta, -limit, limit) - 1) % n + 1


def legal_robber_moves(board: BoardKind, robber: Sequence[int], s: int) -> np.ndarray:
    """All landing cells of a speed-``s`` robber, as an ``(k, dim)`` array."""
    offs = np.array(board.step_offsets(s), dtype=np.int64)
    cand = np.asarray(robber, dtype=np.int64) + offs
    if isinstance(board, Torus):
        cand = board.clamp_array(cand)
        cand = np.unique(cand, axis=0)
    return cand[board.contains_array(cand)]


def nearest_cop_distance(
    board: BoardKind, cops: np.ndarray, cells: np.ndarray, cap: Optional[int] = None
) -> np.ndarray:
    """Distance from each cell to its nearest cop, optionally capped at ``cap``.

    With a cap only cops within ``cap`` of some cell matter, which keeps
    the robbers cheap against the strategies that field thousands of cops.
    """
    far = np.iinfo(np.int64).max // 4 if cap is None else cap
    if len(cops) == 0:
        return np.full(len(cells), far)
    if cap is not None:
        lo = cells.min(axis=0) - cap
        hi = cells.max(axis=0) + cap
        near = np.all((cops >= lo) & (cops <= hi), axis=1) if not isinstance(board, Torus) else None
        if near is not None:
            cops = cops[near]
            if len(cops) == 0:
                return np.full(len(cells), far)
    if not board.unbounded_axes and len(cops) > board.n ** board.dim:
        # stacked cops: only the occupied cells matter
        occupied = np.zeros((board.n,) * board.dim, dtype=bool)
        occupied[tuple((cops - 1).T)] = True
        cops = np.argwhere(occupied) + 1
    d = board.distance_array(cells[:, None, :], cops[None, :, :]).min(axis=1)
    return d if cap is None else np.minimum(d, cap)


# ---------------------------------------------------------------------------
# cop side
# ---------------------------------------------------------------------------


class FixedPlacement(CopController):
    """Cops at given positions that never move."""

    name = "stationary"

    def __init__(self, positions: Optional[Sequence[Sequence[int]]] = None):
        self.positions = None if positions is None else np.asarray(positions, dtype=np.int64)

    def place(self, spec, rng):
        if self.positions is not None:
            return self.positions.reshape(-1, spec.board.dim)
        return random_cop_positions(spec, rng)

    def move(self, state):
        return state.cops


def random_cop_positions(spec: MatchSpec, rng: np.random.Generator) -> np.ndarray:
    board = spec.board
    out = np.empty((spec.cop_count, board.dim), dtype=np.int64)
    for a in range(board.dim):
        if a in board.unbounded_axes:
            out[:, a] = rng.integers(0, board.n + 1, size=spec.cop_count)
        else:
            out[:, a] = rng.integers(1, board.n + 1, size=spec.cop_count)
    return out


class GreedyChaser(CopController):
    """Every cop takes one king step straight at the robber."""

    name = "greedy_chaser"

    def __init__(self, positions: Optional[Sequence[Sequence[int]]] = None):
        self.positions = None if positions is None else np.asarray(positions, dtype=np.int64)

    def place(self, spec, rng):
        self.board = spec.board
        if self.positions is not None:
            return self.positions.reshape(-1, spec.board.dim)
        return random_cop_positions(spec, rng)

    def move(self, state):
        r = np.asarray(state.robber, dtype=np.int64)
        if isinstance(self.board, Torus):
            return torus_step_toward(self.board.n, state.cops, r)
        return step_toward(state.cops, r)


class RandomCops(CopController):
    """Each cop makes a uniformly random king step (staying on the board)."""

    name = "random_cops"

    def __init__(self, positions: Optional[Sequence[Sequence[int]]] = None):
        self.positions = None if positions is None else np.asarray(positions, dtype=np.int64)

    def place(self, spec, rng):
        self.board = spec.board
        self.rng = rng
        if self.positions is not None:
            return self.positions.reshape(-1, spec.board.dim)
        return random_cop_positions(spec, rng)

    def move(self, state):
        steps = self.rng.integers(-1, 2, size=state.cops.shape)
        return self.board.clamp_array(state.cops + steps)


# ---------------------------------------------------------------------------
# robber side
# ---------------------------------------------------------------------------


class _RobberBase(RobberController):
    def __init__(self, start: Optional[Sequence[int]] = None):
        self.start_at = None if start is None else tuple(int(v) for v in start)

    def place(self, spec, cops, rng):
        self.spec = spec
        self.board = spec.board
        self.rng = rng
        if self.start_at is not None:
            return self.start_at
        return self.choose_start(spec, cops, rng)

    def start(self, spec, start):
        self.spec = spec
        self.board = spec.board
        if not hasattr(self, "rng"):
            self.rng = np.random.default_rng(spec.seed + 1)

    def choose_start(self, spec, cops, rng) -> Coord:
        board = spec.board
        cells = np.array(list(board.points()), dtype=np.int64) if not board.unbounded_axes else None
        if cells is None:
            return board.center
        occupied = np.zeros((board.n,) * board.dim, dtype=bool)
        if len(cops):
            occupied[tuple((np.asarray(cops) - 1).T)] = True
        free = cells[~occupied[tuple((cells - 1).T)]]
        pick = free if len(free) else cells
        return tuple(int(v) for v in pick[rng.integers(len(pick))])


class Stay(_RobberBase):
    name = "stay"

    def move(self, state):
        return state.robber


class RandomWalker(_RobberBase):
    """Fuzz robber: a uniformly random legal jump every turn."""

    name = "random_walker"

    def move(self, state):
        cand = legal_robber_moves(self.board, state.robber, self.spec.robber_speed)
        return tuple(int(v) for v in cand[self.rng.integers(len(cand))])


class Sprinter(_RobberBase):
    """Runs at full speed along a fixed direction, stopping at the board edge."""

    name = "sprinter"

    def __init__(self, direction: Sequence[int] = (1,), start: Optional[Sequence[int]] = None):
        super().__init__(start)
        self.direction = np.asarray(direction, dtype=np.int64)

    def choose_start(self, spec, cops, rng):
        board = spec.board
        return tuple(1 if a not in board.unbounded_axes else 0 for a in range(board.dim))

    def move(self, state):
        s = self.spec.robber_speed
        target = np.asarray(state.robber) + s * np.resize(self.direction, self.board.dim)
        return self.board.clamp(target)


class GreedyEvader(_RobberBase):
    """Jumps to the legal cell farthest from the nearest cop (random ties)."""

    name = "greedy_evader"

    def move(self, state):
        cand = legal_robber_moves(self.board, state.robber, self.spec.robber_speed)
        d = nearest_cop_distance(self.board, state.cops, cand, cap=self.spec.robber_speed * 4 + 4)
        best = np.flatnonzero(d == d.max())
        return tuple(int(v) for v in cand[best[self.rng.integers(len(best))]])


class CoverageBreaker(_RobberBase):
    """One-step adversary for Covering.

    Prefers a landing cell no cop can reach on the next cop turn; otherwise
    it maximises the distance to the nearest cop.  With ``bias`` it breaks
    ties toward a target cell (used to chase holes).
    """

    name = "coverage_breaker"

    def __init__(self, start=None, bias: Optional[Sequence[int]] = None):
        super().__init__(start)
        self.bias = None if bias is None else np.asarray(bias, dtype=np.int64)

    def target(self, state: GameState) -> Optional[np.ndarray]:
        return self.bias

    def move(self, state):
        cand = legal_robber_moves(self.board, state.robber, self.spec.robber_speed)
        d = nearest_cop_distance(self.board, state.cops, cand, cap=self.spec.robber_speed * 4 + 4)
        safe = d > 1
        pool = np.flatnonzero(safe) if safe.any() else np.flatnonzero(d == d.max())
        tgt = self.target(state)
        if tgt is not None:
            dist = np.abs(cand[pool] - tgt).max(axis=1)
            pool = pool[dist == dist.min()]
        return tuple(int(v) for v in cand[pool[self.rng.integers(len(pool))]])


class HoleChaser(CoverageBreaker):
    """Heads for the sparsest tile of a tiled board while avoiding capture.

    The board is cut into ``tile``-sided squares; every ``retarget`` turns
    the robber re-picks the tile holding the fewest cops (the hole of a
    tiling strategy, or a tile whose team is in motion) and runs at it.
    """

    name = "hole_chaser"

    def __init__(self, tile: int, start=None, retarget: int = 5):
        super().__init__(start)
        self.tile = tile
        self.retarget = retarget
        self._tgt = None

    def target(self, state):
        if self._tgt is None or state.time % self.retarget == 0:
            board = self.board
            k = -(-board.n // self.tile)
            idx = (state.cops - 1) // self.tile
            counts = np.zeros((k,) * board.dim, dtype=np.int64)
            np.add.at(counts, tuple(idx.T), 1)
            flat = np.flatnonzero(counts == counts.min())
            here = (np.asarray(state.robber) - 1) // self.tile
            cells = np.array(np.unravel_index(flat, counts.shape)).T
            near = np.abs(cells - here).max(axis=1)
            best = cells[np.argmin(near)]
            self._tgt = best * self.tile + self.tile // 2 + 1
        return self._tgt
