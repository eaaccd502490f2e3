from __future__ import annotations

import pytest

from pursuitlab.board import Grid, InvalidInput
from pursuitlab.controllers import HoleChaser, RandomWalker, Stay
from pursuitlab.cop_strategies.guards import BlockGuard
from pursuitlab.cop_strategies.tiling import (
    TileConfig,
    apply_moves,
    corner_path,
    hole_shift,
    recursive_tiler,
)
from pursuitlab.engine import COPS_WIN, ROBBER_TO_MOVE, ConfigurationError, Covering, MatchSpec, RobberController, play


def test_fast_hole_on_a_row():
    line = [(x,) for x in range(1, 11)]
    moves = hole_shift(line, "start")
    after = apply_moves(set(line[1:]), moves)
    assert after == {(x,) for x in range(1, 10)}


def test_single_cop_swaps_into_the_hole():
    assert hole_shift([(1, 1), (2, 2)], "start") == [((2, 2), (1, 1))]


def test_reverse_shift_restores():
    line = [(1, 1), (2, 1), (3, 2), (3, 3)]
    occ = set(line[1:])
    once = apply_moves(occ, hole_shift(line, "start"))
    assert apply_moves(once, hole_shift(line, "end")) == occ


def test_broken_paths_are_rejected():
    with pytest.raises(InvalidInput):
        hole_shift([(1, 1), (3, 1)])
    with pytest.raises(InvalidInput):
        hole_shift([(1, 1), (2, 1), (1, 1)])
    with pytest.raises(InvalidInput):
        hole_shift([(1, 1)])
    with pytest.raises(InvalidInput):
        apply_moves({(5, 5)}, [((1, 1), (2, 1))])


def _lines(max_len):
    """Some king paths of each length up to ``max_len``: straight, diagonal and zig-zag."""
    for L in range(2, max_len + 1):
        yield [(i, 0) for i in range(L)]
        yield [(i, i) for i in range(L)]
        yield [(i, i % 2) for i in range(L)]
        yield [(i // 2, (i + 1) // 2) for i in range(L)]


def test_hole_shift_conserves_cops_and_moves_the_hole():
    for line in _lines(20):
        for end in ("start", "end"):
            hole = line[0] if end == "start" else line[-1]
            occ = set(line) - {hole}
            moves = hole_shift(line, end)
            assert all(max(abs(a - b) for a, b in zip(s, t)) == 1 for s, t in moves)
            after = apply_moves(occ, moves)
            assert len(after) == len(occ)
            other = line[-1] if end == "start" else line[0]
            assert set(line) - after == {other}


def test_corner_paths():
    p = corner_path(3, "bl", "bottom_right")
    assert p[0] == (0, 0) and p[-1] == (2, 2) and len(p) == 5
    q = corner_path(3, "tr", "left_top")
    assert q[0] == (2, 2) and q[-1] == (0, 0)
    assert all(max(abs(a - c), abs(b - d)) == 1 for (a, b), (c, d) in zip(q, q[1:]))


def test_tile_config():
    assert TileConfig().team_count == 224
    with pytest.raises(ConfigurationError):
        TileConfig(tile_factor=3, team_count=7)
    assert recursive_tiler(TileConfig(tile_factor=3), 12).cops_needed() == 8 * 4


def _tiler(F, N, strict=True):
    return recursive_tiler(TileConfig(tile_factor=F), F * N, strict)


def test_parked_robber_keeps_the_hole_still():
    t = _tiler(15, 2)
    b = Grid(30, 2)
    tr = play(MatchSpec(b, Covering(horizon=60), t.cops_needed(), robber_start=(14, 15)), t, Stay())
    assert tr.outcome.result == COPS_WIN
    assert t.episodes == 0


class Crosser(RobberController):
    """Starts on the right edge and runs diagonally down and left."""

    def place(self, spec, cops, rng):
        self.n = spec.board.n
        return (self.n, self.n // 2)

    def move(self, state):
        x, y = state.robber
        return (max(x - 1, 1), max(y - 1, 1))


def test_hole_moves_along_the_bottom_right_route():
    t = _tiler(15, 2)
    b = Grid(30, 2)
    tr = play(MatchSpec(b, Covering(horizon=80), t.cops_needed(), robber_start=(30, 15)), t, Crosser())
    assert tr.outcome.result == COPS_WIN
    assert t.episodes >= 1
    assert t.violations == []


@pytest.mark.parametrize("seed", range(3))
def test_small_tiler_covers_against_fuzz_and_hole_chasers(seed):
    b = Grid(60, 2)
    for rob in (RandomWalker(), HoleChaser(4)):
        t = _tiler(15, 4)
        tr = play(MatchSpec(b, Covering(horizon=600), t.cops_needed(), seed=seed), t, rob, record=False)
        assert tr.outcome.result == COPS_WIN, tr.outcome
        assert t.violations == []


def test_teams_stay_in_their_tiles_when_settled():
    t = _tiler(15, 2)
    b = Grid(30, 2)
    checks = []

    def hook(s):
        if s.phase == ROBBER_TO_MOVE and t.episode is None:
            checks.append(t.teams_in_tiles())

    play(MatchSpec(b, Covering(horizon=300), t.cops_needed(), seed=5), t, HoleChaser(2), on_state=hook)
    assert checks and all(checks)


def test_depth_two_runs_on_a_reduced_preset():
    cfg = TileConfig(tile_factor=3, depth=2, base_strategy=lambda N: BlockGuard(N, 2))
    t = recursive_tiler(cfg, 36, strict=False)
    assert t.cops_needed() == 8 * 8 * 4
    tr = play(MatchSpec(Grid(36, 2), Covering(horizon=100), t.cops_needed(), seed=1), t, RandomWalker(),
              record=False)
    assert tr.outcome.result == COPS_WIN


def test_wrong_board_is_rejected():
    t = _tiler(15, 2)
    with pytest.raises(ConfigurationError):
        play(MatchSpec(Grid(31, 2), Covering(horizon=5), t.cops_needed()), t, Stay())
