"""Padding a cop strategy: every cop brings the 24 others of its 5x5 block."""
from __future__ import annotations

import itertools
from dataclasses import replace

import numpy as np

from ..engine import ConfigurationError, CopController, MatchSpec

BLOCK = np.array(list(itertools.product(range(-2, 3), repeat=2)), dtype=np.int64)


def pad_positions(board, cops: np.ndarray) -> np.ndarray:
    """The centred 5x5 block around each cop, clamped to the board."""
    cops = np.asarray(cops, dtype=np.int64).reshape(-1, 2)
    out = (cops[:, None, :] + BLOCK[None, :, :]).reshape(-1, 2)
    return board.clamp_array(out)


class PaddedCops(CopController):
    """Runs ``inner`` on 1/25 of the cops and pads each of them to a 5x5 block.

    A speed-2 robber who lands on a cell at distance at most 2 from an inner
    cop is then sitting on a padded cop, so an inner strategy for the game
    that only checks after cop moves yields one that also covers after
    robber moves.
    """

    name = "padded"

    def __init__(self, inner: CopController):
        self.inner = inner

    def cops_needed(self, board=None):
        k = self.inner.cops_needed(board)
        return None if k is None else 25 * k

    def place(self, spec, rng):
        if spec.board.dim != 2:
            raise ConfigurationError("padding is defined for 2-dimensional boards")
        if spec.cop_count % 25:
            raise ConfigurationError(f"padded cop count must be a multiple of 25, got {spec.cop_count}")
        self.board = spec.board
        inner_spec = MatchSpec(spec.board, spec.variant, spec.cop_count // 25, robber_speed=spec.robber_speed,
                               seed=spec.seed, robber_start=spec.robber_start, cover_at_start=spec.cover_at_start)
        self.inner_cops = np.asarray(self.inner.place(inner_spec, rng), dtype=np.int64).reshape(-1, 2)
        return pad_positions(self.board, self.inner_cops)

    def move(self, state):
        # the inner strategy only ever sees its own cops
        inner_state = replace(state, cops=self.inner_cops)
        self.inner_cops = np.asarray(self.inner.move(inner_state), dtype=np.int64).reshape(-1, 2)
        return pad_positions(self.board, self.inner_cops)


def pad_cops(inner: CopController) -> PaddedCops:
    return PaddedCops(inner)
