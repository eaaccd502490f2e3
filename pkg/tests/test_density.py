from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from pursuitlab.board import Grid, Rect
from pursuitlab.controllers import FixedPlacement
from pursuitlab.engine import Capture, ConfigurationError, Covering, MatchSpec, play
from pursuitlab.robber_strategies.density import (
    FEASIBILITY_THRESHOLD,
    DensityConfig,
    audit_disjointness,
    audit_entry,
    candidate_layout,
    density,
    density_descender,
    exponent_feasible,
    exponent_series,
    largest_playable,
)


def test_threshold_value():
    assert FEASIBILITY_THRESHOLD == pytest.approx(1.35702, abs=1e-5)


@pytest.mark.parametrize("n", range(8, 13))
def test_layout_audits_are_clean(n):
    L = 2 ** n - 33
    layout = candidate_layout(L)
    assert layout
    assert audit_disjointness(layout) == []
    assert audit_entry(layout, L) == []


def test_bad_layout_side():
    with pytest.raises(ConfigurationError):
        candidate_layout(100)


def test_largest_playable():
    assert largest_playable(300, 33) == (223, 8)
    assert largest_playable(223, 33) == (223, 8)
    with pytest.raises(ConfigurationError):
        largest_playable(1, 33)


def test_feasibility():
    assert exponent_feasible(1.357)
    assert not exponent_feasible(1.5)
    assert exponent_feasible(1 + 1e-6)
    for bad in (1.0, 0.5):
        with pytest.raises(ValueError):
            exponent_feasible(bad)
        with pytest.raises(ValueError):
            exponent_series(bad)


def test_density_examples():
    sq = Rect.square((1, 1), 16)
    cops = np.array([[1, 1], [2, 2], [16, 16], [8, 3], [5, 9], [17, 1]])
    assert density(sq, cops, 1.2) == pytest.approx(5 / 16 ** 1.2)
    assert density(sq, cops, 1.2) == pytest.approx(0.17948, abs=1e-5)
    assert density(sq, np.empty((0, 2)), 1.2) == 0
    assert density(Rect.square((3, 3), 1), np.array([[3, 3]]), 1.3) == 1
    with pytest.raises(ConfigurationError):
        density(Rect(((1, 4), (1, 5))), cops, 1.2)


def test_series_closed_form():
    assert exponent_series(1.2) == pytest.approx(1.8425, abs=1e-4)
    assert exponent_series(1.2, 200) == pytest.approx(exponent_series(1.2), rel=1e-9)


@given(st.floats(min_value=1.01, max_value=1.99))
def test_series_and_factored_test_agree(f):
    if abs(f - FEASIBILITY_THRESHOLD) > 1e-9:
        assert exponent_feasible(f) == (exponent_series(f) > 1)
        assert exponent_feasible(f) == (f < FEASIBILITY_THRESHOLD)


def test_config_errors():
    with pytest.raises(ConfigurationError):
        DensityConfig(f=1.0)
    with pytest.raises(ConfigurationError):
        DensityConfig(offset=0)


def test_far_cop_lets_the_robber_park_in_the_first_square():
    b = Grid(223, 2)
    rob = density_descender()
    covered = []
    tr = play(MatchSpec(b, Capture(horizon=200), 1), FixedPlacement([(223, 1)]), rob,
              on_state=lambda s: covered.append(s.robber == (223, 1)))
    assert not any(covered)
    assert rob.parked and not rob.contradiction
    kinds = [e["event"] for e in rob.events]
    assert kinds[:2] == ["start", "enter"]
    first = candidate_layout(223)[0]
    assert rob.events[1]["side"] == first.side
    assert rob.events[1]["density"] == 0
    assert tr.final.robber == rob.events[1]["corner"]


def test_descender_needs_a_plane():
    with pytest.raises(ConfigurationError):
        play(MatchSpec(Grid(223, 1), Covering(horizon=5), 1), FixedPlacement([(1,)]), density_descender())


def test_threshold_is_the_golden_root():
    x = 2 ** -FEASIBILITY_THRESHOLD
    assert 4 * x * x + x - 1 == pytest.approx(0, abs=1e-12)
    assert math.isclose(2 ** FEASIBILITY_THRESHOLD, (1 + math.sqrt(17)) / 2)
