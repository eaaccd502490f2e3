"""Exact solving of tiny instances by fixed-point iteration.

States are ``(cop multiset, robber cell)`` with the cops to move.  Cops are
interchangeable, so a cop configuration is a sorted tuple of cell indices
and gets a dense index via its lexicographic rank.  Covering is a safety
game for the cops (greatest fixed point), Capture a reachability game
(least fixed point) and the fixed-time game is solved by backward
induction over its ``T`` cop turns.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import asdict, dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .board import BoardKind, Grid, Torus, Tunnel, board_from_json
from .engine import Capture, ConfigurationError, CopController, Covering, FixedTime, RobberController

DEFAULT_BUDGET = 10 ** 8


class ResourceError(RuntimeError):
    """The instance is larger than the configured state budget."""

    def __init__(self, estimate: int, budget: int):
        super().__init__(f"about {estimate} states needed, budget is {budget}")
        self.estimate = estimate
        self.budget = budget


def multiset_count(cells: int, m: int) -> int:
    return math.comb(cells + m - 1, m)


def state_estimate(board: BoardKind, m: int, layers: int = 1) -> int:
    if isinstance(board, Tunnel):
        raise ConfigurationError("tunnels are unbounded and cannot be solved exactly")
    N = board.n ** board.dim
    return multiset_count(N, m) * N * layers


# ---------------------------------------------------------------------------
# the state space
# ---------------------------------------------------------------------------


class StateSpace:
    """Cells, moves and cop multisets of one board and cop count."""

    def __init__(self, board: BoardKind, m: int, speed: int = 2, budget: int = DEFAULT_BUDGET, layers: int = 1):
        est = state_estimate(board, m, layers)
        if est > budget:
            raise ResourceError(est, budget)
        self.board, self.m, self.speed = board, m, speed
        self.cells = np.array(list(board.points()), dtype=np.int64)
        N = self.N = len(self.cells)
        self.index = {tuple(int(v) for v in c): i for i, c in enumerate(self.cells)}
        dist = board.distance_array(self.cells[:, None, :], self.cells[None, :, :])
        self.cop_nbrs = [np.flatnonzero(dist[i] <= 1) for i in range(N)]
        self.rob_nbrs = [np.flatnonzero(dist[i] <= speed) for i in range(N)]
        self.sets = np.array(list(itertools.combinations_with_replacement(range(N), m)), dtype=np.int64).reshape(-1, m)
        self.M = len(self.sets)
        self.radix = N ** np.arange(m - 1, -1, -1, dtype=np.int64)
        self.codes = self.sets @ self.radix if m else np.zeros(1, dtype=np.int64)
        self.contains = np.zeros((self.M, N), dtype=bool)
        for j in range(m):
            self.contains[np.arange(self.M), self.sets[:, j]] = True
        self._succ: Optional[list] = None

    def set_index(self, sorted_cells: np.ndarray) -> np.ndarray:
        """Indices of rows of sorted cell tuples."""
        if self.m == 0:
            return np.zeros(len(sorted_cells), dtype=np.int64)
        return np.searchsorted(self.codes, sorted_cells @ self.radix)

    def index_of_positions(self, positions) -> int:
        ids = sorted(self.index[tuple(int(v) for v in p)] for p in np.asarray(positions).reshape(-1, self.board.dim))
        return int(self.set_index(np.array([ids], dtype=np.int64).reshape(1, -1))[0])

    def products(self, k: int) -> np.ndarray:
        """Every joint cop move from multiset ``k``, one row per move (cops in sorted order)."""
        if self.m == 0:
            return np.zeros((1, 0), dtype=np.int64)
        nb = [self.cop_nbrs[c] for c in self.sets[k]]
        return np.array(np.meshgrid(*nb, indexing="ij")).reshape(self.m, -1).T

    @property
    def succ(self) -> list:
        if self._succ is None:
            out = []
            for k in range(self.M):
                rows = np.sort(self.products(k), axis=1)
                out.append(np.unique(self.set_index(rows)))
            self._succ = out
        return self._succ

    def all_of(self, X: np.ndarray) -> np.ndarray:
        """``out[k, r]``: ``X[k, r']`` holds for every robber reply ``r'`` from ``r``."""
        out = np.empty_like(X)
        for r in range(self.N):
            out[:, r] = X[:, self.rob_nbrs[r]].all(axis=1)
        return out


# ---------------------------------------------------------------------------
# symmetry
# ---------------------------------------------------------------------------


def automorphisms(board: BoardKind) -> list[np.ndarray]:
    """Cell permutations (as index arrays) of the board's symmetry group."""
    cells = [tuple(c) for c in board.points()]
    index = {c: i for i, c in enumerate(cells)}
    n, d = board.n, board.dim
    perms = set()
    shifts = itertools.product(range(n), repeat=d) if isinstance(board, Torus) else [(0,) * d]
    shifts = list(shifts)
    for axes in itertools.permutations(range(d)):
        for flips in itertools.product((False, True), repeat=d):
            for sh in shifts:
                img = []
                for c in cells:
                    q = [c[a] for a in axes]
                    q = [n + 1 - v if f else v for v, f in zip(q, flips)]
                    if isinstance(board, Torus):
                        q = [(v - 1 + s) % n + 1 for v, s in zip(q, sh)]
                    img.append(index[tuple(q)])
                perms.add(tuple(img))
    return [np.array(p, dtype=np.int64) for p in sorted(perms)]


def _canonical_table(space: StateSpace) -> np.ndarray:
    """Smallest state code (``set * N + cell``) in each state's orbit."""
    best = None
    for perm in automorphisms(space.board):
        imgs = np.sort(perm[space.sets], axis=1) if space.m else space.sets
        ks = space.set_index(imgs)
        code = ks[:, None] * space.N + perm[None, :]
        best = code if best is None else np.minimum(best, code)
    return best


# ---------------------------------------------------------------------------
# solving
# ---------------------------------------------------------------------------


@dataclass
class SolveResult:
    instance: dict
    value: object
    states: int
    iterations: int
    extra: dict = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)


@dataclass
class WinSet:
    """Cop-to-move states from which the cops win, as a ``(sets, cells)`` mask."""

    space: StateSpace
    mask: np.ndarray
    variant: str
    cover_after_robber: bool = False
    iterations: int = 0
    drop: Optional[np.ndarray] = None  # covering: iteration at which a state left the win set

    def cop_win_start(self, cover_at_start: bool = False) -> Optional[int]:
        """A cop placement beating every robber placement, or None."""
        ok = self.mask | (self.space.contains if self.variant == "capture" else False)
        if cover_at_start:
            ok = ok & self.space.contains
        good = np.flatnonzero(ok.all(axis=1))
        return int(good[0]) if len(good) else None

    def operator(self, mask: np.ndarray) -> np.ndarray:
        """One application of the game operator (the fixed point is unchanged by it)."""
        return _step(self.space, mask, self.variant, self.cover_after_robber)


def _step(space: StateSpace, W: np.ndarray, variant: str, after: bool) -> np.ndarray:
    C = space.contains
    if variant == "covering":
        X = W & C if after else W
        good = space.all_of(X) & C
    else:
        good = space.all_of(C | W) | C
    out = np.empty_like(W)
    for k, nxt in enumerate(space.succ):
        out[k] = good[nxt].any(axis=0)
    return out


def _step_reduced(space: StateSpace, W: np.ndarray, variant: str, after: bool, canon: np.ndarray, reps: np.ndarray) -> np.ndarray:
    """``_step`` evaluated on orbit representatives only, then spread over orbits."""
    C = space.contains
    if variant == "covering":
        X = W & C if after else W
        good = space.all_of(X) & C
    else:
        good = space.all_of(C | W) | C
    flat = W.ravel().copy()
    for k in np.unique(reps // space.N):
        flat[k * space.N:(k + 1) * space.N] = good[space.succ[k]].any(axis=0)
    return flat[canon]


def solve(
    board: BoardKind,
    m: int,
    variant: str = "covering",
    cover_after_robber: bool = False,
    speed: int = 2,
    symmetry: bool = False,
    budget: int = DEFAULT_BUDGET,
) -> WinSet:
    """Fixed point of the cop-to-move win set (greatest for covering, least for capture)."""
    if variant not in ("covering", "capture"):
        raise ConfigurationError(f"exact solving covers 'covering' and 'capture', not {variant!r}")
    space = StateSpace(board, m, speed, budget)
    W = np.full((space.M, space.N), variant == "covering")
    drop = np.full(W.shape, np.iinfo(np.int32).max, dtype=np.int32) if variant == "covering" else None
    canon = reps = None
    if symmetry:
        canon = _canonical_table(space)
        own = np.arange(space.M)[:, None] * space.N + np.arange(space.N)[None, :]
        reps = own[canon == own]
    it = 0
    while True:
        it += 1
        if symmetry:
            new = _step_reduced(space, W, variant, cover_after_robber, canon, reps)
        else:
            new = _step(space, W, variant, cover_after_robber)
        if np.array_equal(new, W):
            return WinSet(space, W, variant, cover_after_robber, it, drop)
        if drop is not None:
            drop[W & ~new] = it
        W = new


def cops_can_cover(
    board: BoardKind,
    m: int,
    cover_at_start: bool = False,
    cover_after_robber: bool = False,
    speed: int = 2,
    symmetry: bool = False,
    budget: int = DEFAULT_BUDGET,
) -> bool:
    if m == 0:
        return False
    ws = solve(board, m, "covering", cover_after_robber, speed, symmetry, budget)
    return ws.cop_win_start(cover_at_start) is not None


def cops_can_capture(board: BoardKind, m: int, speed: int = 2, symmetry: bool = False, budget: int = DEFAULT_BUDGET) -> bool:
    if m == 0:
        return False
    return solve(board, m, "capture", speed=speed, symmetry=symmetry, budget=budget).cop_win_start() is not None


def min_cops(
    board: BoardKind,
    variant,
    m_max: int,
    cover_at_start: bool = False,
    cover_after_robber: bool = False,
    speed: int = 2,
    symmetry: bool = False,
    budget: int = DEFAULT_BUDGET,
) -> Optional[int]:
    """Least ``m <= m_max`` for which the cops win, or None."""
    for m in range(1, m_max + 1):
        if isinstance(variant, Covering):
            win = cops_can_cover(board, m, cover_at_start, cover_after_robber, speed, symmetry, budget)
        elif isinstance(variant, Capture):
            win = cops_can_capture(board, m, speed, symmetry, budget)
        else:
            raise ConfigurationError(f"min_cops handles Covering and Capture, not {variant!r}")
        if win:
            return m
    return None


def clipped_board(T: int, d: int = 1, speed: int = 2) -> Grid:
    """The clipped stand-in for ``Z^d``: side ``2(3T + 2sT) + 1``, robber at the centre."""
    half = 3 * T + 2 * speed * T
    return Grid(2 * half + 1, d)


def fixed_time_value(
    board: BoardKind,
    m: int,
    T: int,
    robber_start: Optional[Sequence[int]] = None,
    speed: int = 2,
    placement: Optional[Sequence[Sequence[int]]] = None,
    budget: int = DEFAULT_BUDGET,
) -> bool:
    """Whether ``m`` cops can be on the robber right after cop turn ``T``.

    The cops place knowing the robber's start (``placement`` pins their
    choice); the robber makes ``T - 1`` moves in between.
    """
    if T < 1:
        raise ConfigurationError("T must be >= 1")
    if m == 0:
        return False
    space = StateSpace(board, m, speed, budget, layers=T)
    r0 = space.index[tuple(robber_start) if robber_start is not None else board.center]
    C = space.contains
    succ = space.succ
    V = np.empty((space.M, space.N), dtype=bool)
    for k, nxt in enumerate(succ):
        V[k] = C[nxt].any(axis=0)
    for _ in range(T - 1):
        good = space.all_of(V)
        nV = np.empty_like(V)
        for k, nxt in enumerate(succ):
            nV[k] = good[nxt].any(axis=0)
        V = nV
    if placement is not None:
        return bool(V[space.index_of_positions(placement), r0])
    return bool(V[:, r0].any())


def fixed_time_strategy_check(board: BoardKind, make_cops, T: int, speed: int = 2, seed: int = 0) -> tuple[bool, int]:
    """Play a deterministic cop controller against every robber move sequence.

    Returns whether every line ends with the cops on the robber exactly
    after cop turn ``T``, and how many lines were checked.
    """
    from .engine import MatchSpec, play

    offs = board.step_offsets(speed)
    lines = 0
    ok = True

    class _Scripted(RobberController):
        def __init__(self, script):
            self.script = list(script)

        def start(self, spec, start):
            self.board = spec.board

        def move(self, state):
            off = self.script.pop(0) if self.script else (0,) * self.board.dim
            return self.board.clamp(np.asarray(state.robber) + np.asarray(off))

    for script in itertools.product(offs, repeat=T - 1):
        cops = make_cops()
        spec = MatchSpec(board, FixedTime(T), cops.cops_needed(board), robber_speed=speed, seed=seed)
        tr = play(spec, cops, _Scripted(script), record=False)
        lines += 1
        if tr.outcome.result != "CopsWin" or tr.outcome.time != T - 1:
            ok = False
            break
    return ok, lines


# ---------------------------------------------------------------------------
# optimal play from a win set
# ---------------------------------------------------------------------------


class OptimalCops(CopController):
    """Cops playing a solved win set: stay inside it whenever possible."""

    name = "optimal_cops"

    def __init__(self, ws: WinSet):
        self.ws = ws
        space = ws.space
        C = space.contains
        if ws.variant == "covering":
            X = ws.mask & C if ws.cover_after_robber else ws.mask
            self.good = space.all_of(X) & C
        else:
            self.good = space.all_of(C | ws.mask) | C

    def cops_needed(self, board=None):
        return self.ws.space.m

    def place(self, spec, rng):
        space = self.ws.space
        k = self.ws.cop_win_start(spec.cover_at_start)
        if k is None:
            k = int(np.argmax(self.ws.mask.sum(axis=1)))
        return space.cells[space.sets[k]]

    def move(self, state):
        space = self.ws.space
        cur = np.array([space.index[tuple(int(v) for v in p)] for p in state.cops], dtype=np.int64)
        order = np.argsort(cur, kind="stable")
        k = int(space.set_index(cur[order][None, :])[0])
        r = space.index[tuple(state.robber)]
        rows = space.products(k)
        ks = space.set_index(np.sort(rows, axis=1))
        score = self.good[ks, r].astype(int) * 2 + space.contains[ks, r]
        pick = rows[int(np.argmax(score))]
        out = np.empty_like(pick)
        out[order] = pick
        return space.cells[out]


class OptimalRobber(RobberController):
    """Robber playing against a solved win set: always leave the cops a losing state.

    In covering every losing state is not equally good: the robber heads for
    the one that left the win set earliest, which forces an actual escape
    instead of circling among losing states.
    """

    name = "optimal_robber"

    def __init__(self, ws: WinSet, seed: int = 0):
        self.ws = ws

    def _losing_for_cops(self, k: int, cands: np.ndarray) -> np.ndarray:
        space = self.ws.space
        lose = ~self.ws.mask[k, cands]
        if self.ws.variant == "capture" or self.ws.cover_after_robber:
            lose &= ~space.contains[k, cands]
        return lose

    def _best(self, k: int, cands: np.ndarray) -> int:
        if self.ws.drop is None:
            return int(cands[0])
        return int(cands[np.argmin(self.ws.drop[k, cands])])

    def _set_of(self, cops) -> int:
        space = self.ws.space
        return space.index_of_positions(cops)

    def place(self, spec, cops, rng):
        space = self.ws.space
        k = self._set_of(cops)
        cands = np.arange(space.N)
        lose = self._losing_for_cops(k, cands)
        free = cands[~space.contains[k]]
        pick = self._best(k, cands[lose]) if lose.any() else (free[0] if len(free) else 0)
        return tuple(int(v) for v in space.cells[pick])

    def start(self, spec, start):
        pass

    def move(self, state):
        space = self.ws.space
        k = self._set_of(state.cops)
        r = space.index[tuple(state.robber)]
        cands = space.rob_nbrs[r]
        lose = self._losing_for_cops(k, cands)
        if lose.any():
            pick = self._best(k, cands[lose])
        else:
            free = cands[~space.contains[k, cands]]
            pick = free[0] if len(free) else r
        return tuple(int(v) for v in space.cells[pick])


# ---------------------------------------------------------------------------
# frozen oracle constants
# ---------------------------------------------------------------------------


def _constants_path():
    return resources.files("pursuitlab").joinpath("data/oracle_constants.json")


def frozen_constants() -> dict:
    return json.loads(_constants_path().read_text())


def freeze_constant(key: str, value) -> None:
    """Record ``value`` under ``key`` in the regression file."""
    table = frozen_constants()
    table[key] = value
    path = Path(str(_constants_path()))
    path.write_text(json.dumps(table, indent=2, sort_keys=True) + "\n")


def constant_key(board: BoardKind, variant: str, speed: int = 2, cover_after_robber: bool = False) -> str:
    key = f"min_cops/{variant}/{board.kind}/{board.n}/{board.d}/s{speed}"
    return key + ("/after" if cover_after_robber else "")


def check_frozen(key: str, value) -> Optional[bool]:
    """True/False when ``key`` is frozen and matches/differs, None when not frozen."""
    table = frozen_constants()
    if key not in table:
        return None
    return table[key] == value


def instance_json(board: BoardKind, variant: str, m=None, **kw) -> dict:
    out = {"board": board.to_json(), "variant": variant}
    if m is not None:
        out["m"] = m
    out.update(kw)
    return out


def board_from_instance(obj: dict) -> BoardKind:
    return board_from_json(obj["board"])
