from __future__ import annotations

import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from pursuitlab.board import Grid, Tunnel
from pursuitlab.controllers import FixedPlacement, GreedyChaser, RandomCops
from pursuitlab.engine import ROBBER_WINS, Capture, ConfigurationError, MatchSpec, Rugby, play
from pursuitlab.robber_strategies.intervals import (
    DESK_INTERVALS,
    FULL_INTERVALS,
    BanCounters,
    IntervalConfig,
    at_least_half_t_pow,
    grid_looper,
    interval_requester,
    more_than_half_t_pow,
    more_than_quarter_t_pow,
    reachable,
)

T = math.sqrt(1.5)


@given(st.integers(0, 60), st.integers(1, 12))
def test_integer_thresholds_match_floats(c, i):
    # away from exact ties the float comparison is reliable
    if abs(c - T ** i / 2) > 1e-9:
        assert at_least_half_t_pow(c, i) == (c >= T ** i / 2)
        assert more_than_half_t_pow(c, i) == (c > T ** i / 2)
    if abs(c - T ** i / 4) > 1e-9:
        assert more_than_quarter_t_pow(c, i) == (c > T ** i / 4)


def test_threshold_examples():
    assert not at_least_half_t_pow(0, 1)
    assert at_least_half_t_pow(1, 3)
    assert not at_least_half_t_pow(1, 5)
    assert at_least_half_t_pow(2, 5)
    # t^2 / 2 = 3/4 exactly
    assert more_than_half_t_pow(1, 2) and not more_than_half_t_pow(0, 2)
    assert more_than_quarter_t_pow(1, 2)
    assert not more_than_quarter_t_pow(1, 10)


def test_bands_and_levels():
    cfg = DESK_INTERVALS
    dx = np.arange(0, 400)
    inside = dx[cfg.in_band(dx, 2)]
    assert inside.min() == 90 and inside.max() == 310
    wide = dx[cfg.in_band(dx, 2, enlarged=True)]
    assert wide.min() == 50 and wide.max() == 350
    assert cfg.levels(10 ** 4) == 3
    assert cfg.levels(20) == 1
    assert cfg.span_steps(1) == 31 and cfg.span_steps(3) == 3100
    assert FULL_INTERVALS.levels(10 ** 7) == 2


def test_config_errors():
    with pytest.raises(ConfigurationError):
        IntervalConfig(k=10)
    with pytest.raises(ConfigurationError):
        IntervalConfig(k=1, enforce_k_bound=False)
    with pytest.raises(ConfigurationError):
        DESK_INTERVALS.levels(19)


def test_reachable():
    assert reachable(np.array([-3, -2, 0, 5])).tolist() == [False, True, True, True]


def _tunnel_run(cnt, ctrl, n=2000, seed=3):
    r = interval_requester()
    tr = play(MatchSpec(Tunnel(n, 1), Rugby(), cnt, seed=seed), ctrl, r, record=False)
    return tr, r


def test_no_cops_means_a_straight_run():
    tr, r = _tunnel_run(0, FixedPlacement())
    assert tr.outcome.result == ROBBER_WINS
    assert r.max_displacement == 0
    assert r.ledger.served == {}
    assert not tr.final.ever_covered


def test_requester_needs_a_thin_tunnel():
    with pytest.raises(ConfigurationError):
        play(MatchSpec(Grid(2000, 2), Capture(horizon=3), 0), FixedPlacement(), interval_requester())


@pytest.mark.parametrize("ctrl", [GreedyChaser, RandomCops])
def test_single_cop_gets_one_request(ctrl):
    tr, r = _tunnel_run(1, ctrl())
    L = r.ledger
    assert sum(L.served.values()) == 1
    assert L.overlaps == []
    assert L.badness_monotone
    assert r.max_displacement > 0


def test_ledger_serialises():
    tr, r = _tunnel_run(3, RandomCops())
    obj = json.loads(r.ledger.to_json())
    assert obj["badness_monotone"] is True
    assert obj["served"] == {str(i): c for i, c in r.ledger.served.items()}
    assert len(obj["bad"]) <= 3


def test_ban_audit():
    bans = BanCounters(C={1: 0, 2: 5})
    assert bans.audit_starts(DESK_INTERVALS, 1) == []
    bans = BanCounters(C={1: 10 ** 6})
    assert bans.audit_starts(DESK_INTERVALS, 0) != []
    assert bans.to_json()["C"] == {"1": 10 ** 6}


def test_looper_circles_an_empty_board():
    n = 2000
    g = grid_looper()
    tr = play(MatchSpec(Grid(n, 2), Capture(horizon=3 * n), 0), FixedPlacement(), g, record=False)
    assert tr.outcome.result == ROBBER_WINS
    assert g.bans.C == {1: 0, 2: 0, 3: 0}
    assert g.turns >= 8 and g.forced_turns == 0
    assert g.ledger.legs == g.turns + 1


def test_looper_start_square():
    n = 2000
    g = grid_looper()
    tr = play(MatchSpec(Grid(n, 2), Capture(horizon=2), 0), FixedPlacement(), g)
    assert tr.states[0].robber == (1, -(-2 * n // 3) + 1)
    assert g.bans.candidates == (n // 6) ** 2


def test_looper_needs_a_plane():
    with pytest.raises(ConfigurationError):
        play(MatchSpec(Tunnel(2000, 1), Rugby(horizon=3), 0), FixedPlacement(), grid_looper())
