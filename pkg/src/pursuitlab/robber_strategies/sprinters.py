"""Robbers that run along diagonals: the plain sprinter and the fixed-time descender."""
from __future__ import annotations

import itertools
from typing import Optional

import numpy as np

from ..board import Grid, Tunnel
from ..controllers import Sprinter, _RobberBase
from ..engine import ConfigurationError, FixedTime


class DiagonalSprinter(Sprinter):
    """From the all-ones corner, +2 on every axis each turn until the far corner.

    A cop can stand on the robber's path at most once, since the robber
    outruns anyone trailing along the diagonal.
    """

    name = "diagonal_sprinter"

    def __init__(self, d: int = 1):
        super().__init__(direction=(1,) * d, start=None)
        self.d = d

    def choose_start(self, spec, cops, rng):
        if not isinstance(spec.board, Grid):
            raise ConfigurationError(f"diagonal_sprinter plays on a grid, got {spec.board}")
        return (1,) * spec.board.dim

    def place(self, spec, cops, rng):
        self.spec = spec
        self.board = spec.board
        self.rng = rng
        return self.choose_start(spec, cops, rng)


def diagonal_sprinter(d: int = 1) -> DiagonalSprinter:
    return DiagonalSprinter(d)


def orthant_counts(cops: np.ndarray, robber, d: int) -> dict[tuple[int, ...], np.ndarray]:
    """Indices of the cops strictly inside each orthant around ``robber``."""
    rel = np.asarray(cops, dtype=np.int64).reshape(-1, d) - np.asarray(robber, dtype=np.int64)
    out = {}
    for signs in itertools.product((1, -1), repeat=d):
        inside = np.all(rel * np.array(signs) > 0, axis=1) if len(rel) else np.zeros(0, dtype=bool)
        out[signs] = np.flatnonzero(inside)
    return out


class QuadrantDescender(_RobberBase):
    """Fixed-time robber: picks the emptiest orthant and runs into it, recursively.

    For ``T = 4^m - 1`` the robber makes ``T - 1`` moves.  Level ``j``
    (from ``m`` down to 1) starts by choosing the orthant around him that
    holds the fewest still-dangerous cops; only those stay dangerous.  He
    then takes ``3*4^(j-1)`` diagonal steps of length 2 into it (the last
    level is cut to the moves that remain).  Cops outside the chosen orthant
    are left too far behind to reach him by time ``T``, so each level cuts
    the dangerous set by a factor ``2^d`` and ``2^(d(m-1))`` cops end with
    none dangerous at the last level.
    """

    name = "quadrant_descender"

    def __init__(self, d: int = 1, T: Optional[int] = None, start=None):
        super().__init__(start)
        self.d = d
        self.T = T
        self.levels: list[dict] = []

    def _setup(self, spec) -> None:
        T = self.T
        if T is None:
            if not isinstance(spec.variant, FixedTime):
                raise ConfigurationError("quadrant_descender needs FixedTime or an explicit T")
            T = spec.variant.T
        m = 0
        while 4 ** m - 1 < T:
            m += 1
        if 4 ** m - 1 != T:
            raise ConfigurationError(f"T={T} is not of the form 4^m - 1")
        self.m = m
        self.T_used = T
        self.plan = []  # (level, steps)
        left = T - 1
        for j in range(m, 0, -1):
            k = min(3 * 4 ** (j - 1), left)
            self.plan.append((j, k))
            left -= k
        self.stage = 0
        self.steps_left = 0
        self.dangerous: Optional[np.ndarray] = None
        self.heading = np.ones(spec.board.dim, dtype=np.int64)

    def choose_start(self, spec, cops, rng):
        board = spec.board
        if isinstance(board, Tunnel):
            return (0,) + tuple((board.n + 1) // 2 for _ in range(board.dim - 1))
        return board.center

    def place(self, spec, cops, rng):
        out = super().place(spec, cops, rng)
        self._setup(spec)
        return out

    def start(self, spec, start):
        super().start(spec, start)
        self._setup(spec)

    def move(self, state):
        if self.dangerous is None:
            self.dangerous = np.arange(len(state.cops))
        while self.steps_left == 0:
            if self.stage >= len(self.plan):
                return state.robber
            j, k = self.plan[self.stage]
            self.stage += 1
            groups = orthant_counts(state.cops[self.dangerous], state.robber, self.board.dim)
            signs, idx = min(groups.items(), key=lambda kv: len(kv[1]))
            self.levels.append({"level": j, "orthant": signs, "dangerous_before": len(self.dangerous),
                                "dangerous_after": len(idx), "t": state.time})
            self.dangerous = self.dangerous[idx]
            self.heading = np.array(signs, dtype=np.int64)
            self.steps_left = k
        self.steps_left -= 1
        target = np.asarray(state.robber) + self.spec.robber_speed * self.heading
        return self.board.clamp(target)


def quadrant_descender(d: int = 1, T: Optional[int] = None) -> QuadrantDescender:
    return QuadrantDescender(d, T)
