"""Block guards: one cop per 2x...x2 block, jumping onto the robber inside it."""
from __future__ import annotations

import itertools
from math import ceil
from typing import Optional

import numpy as np

from ..board import Grid, Torus
from ..engine import ConfigurationError, CopController


def block_homes(n: int, d: int) -> np.ndarray:
    """Lowest corner of each 2^d block of ``[n]^d`` in lexicographic order."""
    starts = range(1, n + 1, 2)
    return np.array(list(itertools.product(starts, repeat=d)), dtype=np.int64).reshape(-1, d)


class BlockGuard(CopController):
    """Cop ``i`` guards block ``i`` of the 2-by-2 (or 2^d) partition.

    Each turn a guard jumps onto the robber when he is in its block and
    otherwise returns to the block's lowest corner.  Blocks have Chebyshev
    diameter 1, so both moves are always legal.  Cops beyond the
    ``ceil(n/2)^d`` needed idle on the first home.
    """

    name = "block_guard"
    memoryless = True  # the reply depends only on the robber's cell

    def __init__(self, n: int, d: int = 2):
        if n < 1 or d < 1:
            raise ConfigurationError("block_guard needs n, d >= 1")
        self.n = n
        self.d = d
        self.homes = block_homes(n, d)

    def cops_needed(self, board=None) -> int:
        return len(self.homes)

    def place(self, spec, rng):
        board = spec.board
        if not isinstance(board, (Grid, Torus)) or board.n != self.n or board.d != self.d:
            raise ConfigurationError(f"block_guard({self.n}, {self.d}) cannot play on {board}")
        need = len(self.homes)
        if spec.cop_count < need:
            raise ConfigurationError(f"block_guard needs {need} cops, got {spec.cop_count}")
        self.extra = spec.cop_count - need
        return self.positions_for(None)

    def positions_for(self, robber: Optional[np.ndarray]) -> np.ndarray:
        """Guard positions answering a robber at ``robber`` (``None``: all at home)."""
        pos = self.homes.copy()
        if robber is not None:
            r = np.asarray(robber, dtype=np.int64)
            block = (r - 1) // 2
            per_axis = -(-self.n // 2)
            idx = 0
            for a in range(self.d):
                idx = idx * per_axis + int(block[a])
            pos[idx] = r
        if getattr(self, "extra", 0):
            pos = np.vstack([pos, np.repeat(self.homes[:1], self.extra, axis=0)])
        return pos

    def move(self, state):
        return self.positions_for(state.robber)


def path_guard(n: int) -> BlockGuard:
    """Guards for the path ``[n]``: cop ``i`` holds ``{2i-1, 2i}``."""
    return BlockGuard(n, 1)


def block_guard(n: int, d: int = 2) -> BlockGuard:
    return BlockGuard(n, d)


def guards_needed(n: int, d: int) -> int:
    return ceil(n / 2) ** d
