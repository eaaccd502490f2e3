from __future__ import annotations

import numpy as np
import pytest

from pursuitlab.board import Grid, Tunnel
from pursuitlab.controllers import RandomWalker, Sprinter
from pursuitlab.cop_strategies.nets import (
    DESK_NET,
    FULL_NET,
    NetConfig,
    centre_target,
    fast_robber_net,
    ring_cells,
    row_slack,
    rugby_net,
)
from pursuitlab.engine import COPS_WIN, ROBBER_TO_MOVE, ConfigurationError, MatchSpec, RobberController, Rugby, Capture, play


def test_full_scale_constants_are_accepted():
    assert FULL_NET.v_side == 5050 and FULL_NET.h_side == 30
    assert FULL_NET.gap_period == 28 and FULL_NET.guard_margin == 25
    assert DESK_NET.perimeter() == 112


def test_bad_configs():
    with pytest.raises(ConfigurationError):
        NetConfig(10, 6, 28, 5)
    with pytest.raises(ConfigurationError):
        NetConfig(50, 6, 20, 5)
    with pytest.raises(ConfigurationError):
        rugby_net(depth=3)


def test_ring_is_a_closed_king_path():
    ring = ring_cells(0, 3, 0, 2)
    assert len(ring) == len(set(ring)) == 10
    for a, b in zip(ring, ring[1:] + ring[:1]):
        assert max(abs(a[0] - b[0]), abs(a[1] - b[1])) == 1


def test_centre_tracks_half_way():
    assert centre_target(51, 101) == 76
    assert centre_target(51, 1) == 26
    # on Tunnel(101,1) the desk net only just spans every row
    assert row_slack(DESK_NET, 101) == 0
    assert row_slack(NetConfig(90, 6, 28, 5), 101) > 5


def _net_match(net, rob, n=101, horizon=400, seed=0):
    b = Tunnel(n, 1)
    return play(MatchSpec(b, Rugby(horizon=horizon), net.cops_needed(b), seed=seed), net, rob, record=False)


@pytest.mark.parametrize("direction", [(1, 0), (1, 1), (1, -1)])
def test_straight_sprinters_are_stopped(direction):
    net = rugby_net()
    tr = _net_match(net, Sprinter(direction))
    assert tr.outcome.result == COPS_WIN
    assert tr.final.max_robber_x <= 0


class Climber(RobberController):
    """Heads for the top row, then runs at the net along it."""

    def start(self, spec, start):
        self.n = spec.board.n

    def move(self, state):
        x, y = state.robber
        if y < self.n:
            return (x + 1, min(y + 2, self.n))
        return (x + 2, y)


def test_net_follows_the_robber_to_the_edge():
    net = rugby_net()
    tr = _net_match(net, Climber())
    assert tr.outcome.result == COPS_WIN
    lo, hi = net.net_rows()
    assert lo <= 101 <= hi


def test_enclosure_flag():
    net = rugby_net()
    b = Tunnel(101, 1)
    net.place(MatchSpec(b, Rugby(), net.cops_needed(b)), np.random.default_rng(0))
    virt = net._virtual()
    net._audit(virt, (-40, 51))
    assert not net.enclosed
    net._audit(virt, (-3, 51))
    assert net.enclosed


def test_the_wall_pounces_on_an_adjacent_robber():
    class Parker(RobberController):
        def start(self, spec, start):
            pass

        def move(self, state):
            x, y = state.robber
            return (min(x + (1 if state.time == 0 else 2), -3), y)

    tr = _net_match(rugby_net(), Parker(), horizon=200)
    assert tr.outcome.result == COPS_WIN
    assert tr.outcome.reason == "robber caught"
    assert tr.final.robber[0] == -7


def test_fuzz_robbers_never_cross():
    for seed in range(20):
        net = rugby_net()
        tr = _net_match(net, RandomWalker(), horizon=300, seed=seed)
        assert tr.final.max_robber_x < 1


def test_margin_is_kept_when_the_net_has_room():
    cfg = NetConfig(90, 6, 28, 5)
    seen = []

    def check(net):
        def hook(s):
            if s.phase == ROBBER_TO_MOVE and s.robber[0] < -cfg.h_side:
                ys = set(s.cops[:, 1].tolist())
                # a row off the tunnel is held by the cops clamped onto its edge
                seen.append(all(y in ys or not 1 <= y <= 101 for y in (s.robber[1] + 5, s.robber[1] - 5)))
        return hook

    for direction in ((1, 1), (1, -1), (1, 0)):
        net = rugby_net(cfg, require_margin=True)
        b = Tunnel(101, 1)
        play(MatchSpec(b, Rugby(horizon=200), net.cops_needed(b)), net, Sprinter(direction), on_state=check(net))
        assert net.margin_breaks == 0
    assert seen and all(seen)


def test_require_margin_rejects_a_tight_net():
    net = rugby_net(require_margin=True)
    b = Tunnel(101, 1)
    with pytest.raises(ConfigurationError):
        play(MatchSpec(b, Rugby(horizon=5), net.cops_needed(b)), net, RandomWalker())


def test_depth_two_gaps_move_and_come_back():
    cfg = NetConfig(200, 6, 28, 5)
    net = rugby_net(cfg, depth=2)
    assert len(net.gap_homes) > 0
    b = Tunnel(201, 1)
    for seed in range(5):
        net = rugby_net(cfg, depth=2)
        tr = play(MatchSpec(b, Rugby(horizon=700), net.cops_needed(b), seed=seed), net, RandomWalker(),
                  record=False)
        assert tr.final.max_robber_x < 1
        assert net.conflicts == 0
    assert net.cops_needed() == len(net.rel) - len(net.gap_homes)


def test_fast_robber_net_captures():
    b = Grid(101, 2)
    for seed in range(3):
        net = fast_robber_net()
        tr = play(MatchSpec(b, Capture(horizon=600), net.cops_needed(b), seed=seed), net, RandomWalker(),
                  record=False)
        assert tr.outcome.result == COPS_WIN


def test_fleeing_left_gets_pinned():
    b = Grid(101, 2)
    net = fast_robber_net()
    tr = play(MatchSpec(b, Capture(horizon=600), net.cops_needed(b), robber_start=(40, 51)), net,
              Sprinter((-1, 0)), record=False)
    assert tr.outcome.result == COPS_WIN


def test_shrinking_keeps_the_cop_count():
    b = Grid(101, 2)
    net = fast_robber_net()
    counts = []
    play(MatchSpec(b, Capture(horizon=300), net.cops_needed(b), seed=2), net, RandomWalker(),
         on_state=lambda s: counts.append(len(s.cops)))
    assert set(counts) == {net.cops_needed()}
    assert np.all(np.asarray(counts) == DESK_NET.perimeter())
