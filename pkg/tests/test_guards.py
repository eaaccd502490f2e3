from __future__ import annotations

import numpy as np
import pytest

from pursuitlab.board import Grid, Torus
from pursuitlab.controllers import CoverageBreaker, RandomWalker, Sprinter
from pursuitlab.cop_strategies.guards import block_guard, block_homes, guards_needed, path_guard
from pursuitlab.engine import COPS_WIN, ROBBER_TO_MOVE, ConfigurationError, Covering, MatchSpec, RobberController, play


def test_path_guard_homes():
    pg = path_guard(5)
    assert pg.cops_needed() == 3
    assert sorted(pg.homes[:, 0].tolist()) == [1, 3, 5]
    assert path_guard(1).homes.tolist() == [[1]]


def test_block_guard_counts():
    assert block_guard(4, 2).cops_needed() == 4
    assert block_guard(2, 2).cops_needed() == 1
    assert block_guard(5, 3).cops_needed() == 27
    assert guards_needed(7, 2) == 16
    assert block_homes(4, 2).tolist() == [[1, 1], [1, 3], [3, 1], [3, 3]]


def test_too_few_cops_is_a_configuration_error():
    with pytest.raises(ConfigurationError):
        play(MatchSpec(Grid(5, 1), Covering(horizon=3), 2), path_guard(5), Sprinter())
    with pytest.raises(ConfigurationError):
        play(MatchSpec(Grid(6, 2), Covering(horizon=3), 5), block_guard(6), Sprinter())


class Oscillator(RobberController):
    def place(self, spec, cops, rng):
        return (1,)

    def move(self, state):
        return (2,) if state.robber == (1,) else (1,)


def test_guard_one_follows_an_oscillating_robber():
    seen = []
    tr = play(MatchSpec(Grid(6, 1), Covering(horizon=30), 3), path_guard(6), Oscillator(),
              on_state=lambda s: seen.append(s))
    assert tr.outcome.result == COPS_WIN
    ends = [s for s in seen if s.phase == ROBBER_TO_MOVE]
    assert len(ends) == 30
    assert all(s.covered_now and tuple(s.cops[0]) == s.robber for s in ends)


def test_extra_cops_idle():
    tr = play(MatchSpec(Grid(4, 2), Covering(horizon=40), 6, seed=1), block_guard(4), RandomWalker())
    assert tr.outcome.result == COPS_WIN


@pytest.mark.parametrize("n", [2, 3, 7, 10])
def test_block_guard_never_breaks(n):
    for rob in (RandomWalker(), CoverageBreaker()):
        g = block_guard(n)
        tr = play(MatchSpec(Grid(n, 2), Covering(horizon=300), g.cops_needed(), seed=n), g, rob, record=False)
        assert tr.outcome.result == COPS_WIN


def test_block_guard_covers_even_torus():
    g = block_guard(6)
    tr = play(MatchSpec(Torus(6, 2), Covering(horizon=200), 9, seed=3), g, RandomWalker(), record=False)
    assert tr.outcome.result == COPS_WIN


def test_block_guard_positions_are_one_step_from_home():
    g = block_guard(9, 3)
    g.place(MatchSpec(Grid(9, 3), Covering(), g.cops_needed()), np.random.default_rng(0))
    for r in [(1, 1, 1), (9, 9, 9), (4, 7, 2)]:
        pos = g.positions_for(np.array(r))
        assert np.abs(pos - g.homes).max() <= 1
        assert (pos == r).all(axis=1).sum() == 1
