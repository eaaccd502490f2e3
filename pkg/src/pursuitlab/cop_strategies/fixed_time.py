"""Catching the robber at an exact time, and the Covering team schedule built on it.

The one-dimensional catcher for ``T = 4^m`` spreads cops over ``[-3T, 3T]``
with spacing ``2^(m-1)`` around the robber's known start.  Play runs in
phases of ``3*4^(j-1)`` turns for ``j = m, ..., 1`` followed by one final
step.  At the start of each phase every cop records its position ``c0`` and
then steps toward ``ceil((c0 + r)/2)``, ``r`` being the robber's current
position.  After the phase the cops that matter sit at midpoints, which
halves the spacing and the covered interval, so the next phase is the same
problem at a quarter of the time.  In ``d`` dimensions each axis runs the
one-dimensional rule independently, which is a legal king step.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import ceil, log
from typing import Optional

import numpy as np

from ..board import Coord, Grid
from ..engine import ConfigurationError, CopController, FixedTime, MatchSpec


def midpoint_target(c0: int, r: int) -> int:
    """``ceil((c0 + r) / 2)``, rounding toward +infinity."""
    return -((-(c0 + r)) // 2)


def midpoint_array(c0: np.ndarray, r: np.ndarray) -> np.ndarray:
    return -((-(c0 + r)) // 2)


def power_of_four_exponent(T: int) -> Optional[int]:
    m, v = 0, 1
    while v < T:
        v *= 4
        m += 1
    return m if v == T and m >= 1 else None


def catcher_size(m: int, d: int = 1) -> int:
    """Cops used by the catcher for ``T = 4^m`` in ``d`` dimensions."""
    return (6 * 2 ** (m + 1) + 1) ** d


def phase_lengths(m: int) -> list[int]:
    return [3 * 4 ** (j - 1) for j in range(m, 0, -1)] + [1]


class FixedTimeTeam:
    """Virtual cops running the exact-time catch against a supplied robber path.

    Positions are kept unclamped ("virtual"); callers project them onto the
    board.  ``begin(origin)`` snaps the team into formation around
    ``origin``; each ``advance(r)`` performs one cop turn of play against a
    robber currently at ``r``.
    """

    def __init__(self, m: int, d: int):
        if m < 1:
            raise ConfigurationError("catcher needs T = 4^m with m >= 1")
        self.m = m
        self.d = d
        self.T = 4 ** m
        spacing = 2 ** (m - 1)
        line = np.arange(-3 * self.T, 3 * self.T + 1, spacing, dtype=np.int64)
        self.offsets = np.array(list(itertools.product(line, repeat=d)), dtype=np.int64).reshape(-1, d)
        starts = np.cumsum([0] + phase_lengths(m))
        self._phase_starts = set(int(s) + 1 for s in starts[:-1])
        self._final = self.T
        self.pos = np.zeros_like(self.offsets)
        self.anchors = self.pos
        self.step = 0

    @property
    def size(self) -> int:
        return len(self.offsets)

    def formation(self, origin) -> np.ndarray:
        return self.offsets + np.asarray(origin, dtype=np.int64)

    def begin(self, origin) -> None:
        self.pos = self.formation(origin)
        self.anchors = self.pos.copy()
        self.step = 0

    def start_play(self) -> None:
        """Begin play from the current positions (assumed to be in formation)."""
        self.step = 0

    @property
    def playing(self) -> bool:
        return 0 <= self.step < self.T

    def advance(self, r) -> np.ndarray:
        r = np.asarray(r, dtype=np.int64)
        self.step += 1
        k = self.step
        if k > self.T:
            raise ConfigurationError("catch already happened")
        if k in self._phase_starts:
            self.anchors = self.pos.copy()
        if k == self._final:
            target = r
        else:
            target = midpoint_array(self.anchors, r)
        self.pos = self.pos + np.clip(target - self.pos, -1, 1)
        return self.pos

    def walk_toward(self, targets: np.ndarray) -> np.ndarray:
        self.pos = self.pos + np.clip(targets - self.pos, -1, 1)
        return self.pos


class FixedTimeCatcher(CopController):
    """Cops guaranteeing coincidence with the robber exactly after cop turn ``T``."""

    name = "fixed_time_catcher"

    def __init__(self, T: int, d: int = 1, round_up: bool = False):
        m = power_of_four_exponent(T)
        if m is None:
            if not round_up:
                raise ConfigurationError(f"T={T} is not a power of 4 (>= 4)")
            m = max(1, ceil(log(T, 4) - 1e-12))
        self.m = m
        self.T = 4 ** m
        self.d = d
        self.team = FixedTimeTeam(m, d)

    def cops_needed(self, board=None) -> int:
        return self.team.size

    def place(self, spec: MatchSpec, rng):
        if spec.board.dim != self.d:
            raise ConfigurationError(f"catcher built for d={self.d}, board has dimension {spec.board.dim}")
        if spec.cop_count != self.team.size:
            raise ConfigurationError(f"catcher needs exactly {self.team.size} cops, got {spec.cop_count}")
        if isinstance(spec.variant, FixedTime) and spec.variant.T != self.T:
            raise ConfigurationError(f"catcher built for T={self.T}, match has T={spec.variant.T}")
        start = spec.declared_start()
        if start is None:
            raise ConfigurationError("the catcher needs the robber's start")
        self.board = spec.board
        self.team.begin(start)
        return self.board.clamp_array(self.team.pos)

    def move(self, state):
        if self.team.step < self.T:
            self.team.advance(state.robber)
        return self.board.clamp_array(self.team.pos)


def fixed_time_catcher(T: int, d: int = 1, round_up: bool = False) -> FixedTimeCatcher:
    return FixedTimeCatcher(T, d, round_up)


def fixed_time_board(T: int, d: int = 1, speed: int = 2) -> Grid:
    """A grid big enough to stand in for ``Z^d`` over ``T`` turns, centred on the start."""
    half = 3 * T + speed * T
    return Grid(2 * half + 1, d)


# ---------------------------------------------------------------------------
# Covering on [n]^d by rotating fixed-time teams
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TeamSchedule:
    team_count: int
    catch_time: int

    def team_for(self, turn: int) -> int:
        return turn % self.team_count

    def next_catch(self, team: int, after: int) -> int:
        """First cop turn strictly greater than ``after`` assigned to ``team``."""
        k = after + 1
        return k + (team - k) % self.team_count


def default_catch_time(n: int) -> int:
    # the phantom must reach the real robber from the centre within T moves
    reach = n - (n + 1) // 2
    T = 4
    while 2 * T < reach:
        T *= 4
    return T


class CoveringScheduler(CopController):
    """Covering on ``[n]^d`` with ``team_count`` rotating exact-time teams.

    Team ``i`` is responsible for cop turns congruent to ``i`` modulo the
    team count.  Before a responsible turn ``k`` it plays the exact-time
    catch over turns ``k-T+1..k`` against a phantom robber that starts at
    the board centre and chases the real robber at full speed, copying him
    once it lands on him; the phantom reaches him within ``T`` moves, so
    catching the phantom at turn ``k`` catches the robber.  Afterwards the
    team walks its virtual cops back to formation.  Real cops are the
    virtual ones clamped to the board.

    The first ``T`` responsible turns use the robber's declared start: those
    teams are placed mid-play, as if the catch had started before turn 1
    against a robber standing at the start.  Without a declared start the
    centre is assumed and early coverage is not guaranteed.
    """

    name = "covering_scheduler"

    def __init__(self, n: int, d: int = 1, catch_time: Optional[int] = None, team_count: Optional[int] = None):
        T = catch_time or default_catch_time(n)
        m = power_of_four_exponent(T)
        if m is None:
            raise ConfigurationError(f"catch time {T} is not a power of 4")
        P = team_count or 5 * T
        if P < 2 * T:
            raise ConfigurationError(f"{P} teams cannot cover: need at least {2 * T} for catch time {T}")
        if 2 * T < n - (n + 1) // 2:
            raise ConfigurationError(f"catch time {T} too short for n={n}")
        self.n = n
        self.d = d
        self.schedule = TeamSchedule(P, T)
        self.m = m
        self.teams = [FixedTimeTeam(m, d) for _ in range(P)]
        self.team_size = self.teams[0].size
        self.misses = 0
        self.covered_by_team = 0

    @property
    def T(self) -> int:
        return self.schedule.catch_time

    def cops_needed(self, board=None) -> int:
        return self.schedule.team_count * self.team_size

    def place(self, spec, rng):
        board = spec.board
        if not isinstance(board, Grid) or board.n != self.n or board.d != self.d:
            raise ConfigurationError(f"scheduler built for Grid({self.n},{self.d}), got {board}")
        if spec.cop_count != self.cops_needed():
            raise ConfigurationError(f"scheduler needs exactly {self.cops_needed()} cops, got {spec.cop_count}")
        self.board = board
        self.origin = np.asarray(board.center, dtype=np.int64)
        start = spec.declared_start()
        self.start_known = start is not None
        r0 = np.asarray(start if start is not None else board.center, dtype=np.int64)
        P, T = self.schedule.team_count, self.T
        self.home = self.teams[0].formation(self.origin)
        self.next_catch = []
        self.mode = []
        self.phantom: list[Optional[np.ndarray]] = [None] * P
        for i, team in enumerate(self.teams):
            k = self.schedule.next_catch(i, 0)
            self.next_catch.append(k)
            if k <= T:
                # already T-k steps into play against a robber parked at r0
                team.begin(r0)
                for _ in range(T - k):
                    team.advance(r0)
                self.mode.append("warmup")
            else:
                team.begin(self.origin)
                self.mode.append("idle")
        return self._real()

    def _real(self) -> np.ndarray:
        allpos = np.concatenate([t.pos for t in self.teams], axis=0)
        return self.board.clamp_array(allpos)

    def move(self, state):
        k = state.time + 1
        r = np.asarray(state.robber, dtype=np.int64)
        T = self.T
        for i, team in enumerate(self.teams):
            mode = self.mode[i]
            catch = self.next_catch[i]
            if mode == "idle" and k == catch - T + 1:
                team.start_play()
                self.phantom[i] = self.origin.copy()
                mode = "play"
            if mode in ("play", "warmup"):
                if mode == "play":
                    ph = self.phantom[i]
                    ph = ph + np.clip(r - ph, -2, 2)
                    self.phantom[i] = ph
                    target = ph
                else:
                    target = r
                team.advance(target)
                if k == catch:
                    self.next_catch[i] = catch + self.schedule.team_count
                    mode = "return"
            elif mode == "return":
                team.walk_toward(self.home)
                if np.array_equal(team.pos, self.home):
                    mode = "idle"
            self.mode[i] = mode
        out = self._real()
        resp = self.schedule.team_for(k)
        block = out[resp * self.team_size:(resp + 1) * self.team_size]
        if np.any(np.all(block == r, axis=1)):
            self.covered_by_team += 1
        else:
            self.misses += 1
        return out


def covering_scheduler(n: int, d: int = 1, **kw) -> CoveringScheduler:
    return CoveringScheduler(n, d, **kw)
