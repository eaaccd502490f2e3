from __future__ import annotations

import numpy as np
import pytest

from pursuitlab.board import Grid, Torus
from pursuitlab.controllers import CoverageBreaker, RandomWalker
from pursuitlab.cop_strategies.guards import block_guard
from pursuitlab.cop_strategies.torus import QUADRANTS, fold_array, grid_from_torus, torus_lifter
from pursuitlab.engine import COPS_WIN, ConfigurationError, Covering, MatchSpec, play
from pursuitlab.solver import OptimalCops, solve


def test_lifter_multiplies_by_four():
    lift = torus_lifter(lambda: block_guard(4), 4)
    assert lift.cops_needed() == 16
    back = grid_from_torus(lift, 4)
    assert back.cops_needed() == 64
    again = torus_lifter(lambda: grid_from_torus(torus_lifter(lambda: block_guard(4), 4), 4), 4)
    assert again.cops_needed() == 16 * 16


def test_bottom_left_phantom_is_the_robber():
    lift = torus_lifter(lambda: block_guard(6), 6)
    ph = lift.phantoms((2, 3))
    assert ph[QUADRANTS.index((False, False))] == (2, 3)


def test_phantoms_cover_all_reflections():
    n = 7
    lift = torus_lifter(lambda: block_guard(n), n)
    for x in range(1, n + 1):
        for y in range(1, n + 1):
            ph = lift.phantoms((x, y))
            assert (x, y) in ph
            for p in ph:
                assert p[0] in (x, n + 1 - x) and p[1] in (y, n + 1 - y)
    # on the middle lines of an odd torus the reflections coincide
    assert set(lift.phantoms((4, 4))) == {(4, 4)}


def test_fold_array_matches_scalar_fold():
    pts = np.array([[1, 7], [4, 2], [6, 6]])
    for q in QUADRANTS:
        want = [tuple(min(v, 8 - v) if not up else max(v, 8 - v) for v, up in zip(p, q)) for p in pts.tolist()]
        assert [tuple(r) for r in fold_array(7, pts, q).tolist()] == want


@pytest.mark.parametrize("n", [4, 5, 8])
def test_lifted_block_guard_covers_the_torus(n):
    for seed in range(3):
        for rob in (RandomWalker(), CoverageBreaker()):
            lift = torus_lifter(lambda: block_guard(n), n)
            tr = play(MatchSpec(Torus(n, 2), Covering(horizon=300), lift.cops_needed(), seed=seed), lift, rob,
                      record=False)
            assert tr.outcome.result == COPS_WIN


def test_grid_from_solved_torus_strategy():
    ws = solve(Torus(3, 2), 1, "covering")
    assert ws.cop_win_start() is not None
    for seed in range(4):
        g = grid_from_torus(OptimalCops(ws), 3, 1)
        tr = play(MatchSpec(Grid(3, 2), Covering(horizon=100), 4, seed=seed), g, CoverageBreaker(), record=False)
        assert tr.outcome.result == COPS_WIN


def test_wrong_boards():
    lift = torus_lifter(lambda: block_guard(4), 4)
    with pytest.raises(ConfigurationError):
        play(MatchSpec(Grid(4, 2), Covering(horizon=3), 16), lift, RandomWalker())
    back = grid_from_torus(block_guard(4), 4)
    with pytest.raises(ConfigurationError):
        play(MatchSpec(Torus(4, 2), Covering(horizon=3), 16), back, RandomWalker())
