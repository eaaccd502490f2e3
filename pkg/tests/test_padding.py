from __future__ import annotations

import numpy as np
import pytest

from pursuitlab.board import Grid
from pursuitlab.controllers import CoverageBreaker, RandomWalker
from pursuitlab.cop_strategies.guards import BlockGuard
from pursuitlab.cop_strategies.padding import BLOCK, pad_cops, pad_positions
from pursuitlab.engine import COPS_WIN, ROBBER_WINS, ConfigurationError, Covering, MatchSpec, play


def test_block_shape():
    assert len(BLOCK) == 25
    assert np.abs(BLOCK).max() == 2


def test_pad_positions_clamp():
    out = pad_positions(Grid(6, 2), np.array([[1, 1]]))
    assert out.min() == 1
    assert len(out) == 25
    assert {tuple(p) for p in out} == {(x, y) for x in (1, 2, 3) for y in (1, 2, 3)}


def test_padding_makes_covering_survive_robber_moves():
    n = 6
    for seed in range(3):
        plain = BlockGuard(n, 2)
        tr = play(MatchSpec(Grid(n, 2), Covering(horizon=80), 9, seed=seed, cover_after_robber=True), plain,
                  CoverageBreaker(), record=False)
        assert tr.outcome.result == ROBBER_WINS
        padded = pad_cops(BlockGuard(n, 2))
        assert padded.cops_needed() == 225
        tr = play(MatchSpec(Grid(n, 2), Covering(horizon=80), 225, seed=seed, cover_after_robber=True), padded,
                  CoverageBreaker(), record=False)
        assert tr.outcome.result == COPS_WIN


def test_padding_needs_a_multiple_of_25():
    with pytest.raises(ConfigurationError):
        play(MatchSpec(Grid(6, 2), Covering(horizon=3), 30), pad_cops(BlockGuard(6, 2)), RandomWalker())
