"""Match state, turn order and win adjudication.

A match is a sequence of half-turns.  Cops place first, the robber places
with full knowledge of the cop placement, then cop and robber turns
alternate starting with the cops.  ``GameState.time`` counts completed
rounds, so the cop turn taken from a state with ``time == t`` is cop turn
number ``t + 1``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Any, Callable, Iterable, Optional, Sequence, Union

import numpy as np

from .board import BoardKind, Coord, Grid, Torus, Tunnel, board_from_json


class RuleViolation(Exception):
    """An agent attempted an illegal placement or move."""

    def __init__(self, agent: str, message: str):
        super().__init__(f"{agent}: {message}")
        self.agent = agent


class ConfigurationError(ValueError):
    """A strategy was asked to play under conditions it does not support."""


class InvariantViolation(AssertionError):
    """A strategy's internal guarantee was observed to fail."""


# --------------------------------------------------------------------------
# variants and match configuration
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Covering:
    horizon: Optional[int] = None
    name = "covering"


@dataclass(frozen=True)
class FixedTime:
    T: int
    name = "fixed_time"

    def __post_init__(self) -> None:
        if self.T < 1:
            raise ConfigurationError("FixedTime needs T >= 1")

    @property
    def horizon(self) -> int:
        return self.T


@dataclass(frozen=True)
class Rugby:
    finish_x: int = 1
    horizon: Optional[int] = None
    name = "rugby"


@dataclass(frozen=True)
class Capture:
    horizon: Optional[int] = None
    name = "capture"


GameVariant = Union[Covering, FixedTime, Rugby, Capture]


def variant_from_json(obj: dict) -> GameVariant:
    kind = obj.get("kind")
    if kind == "covering":
        return Covering(obj.get("horizon"))
    if kind == "fixed_time":
        return FixedTime(int(obj["T"]))
    if kind == "rugby":
        return Rugby(int(obj.get("finish_x", 1)), obj.get("horizon"))
    if kind == "capture":
        return Capture(obj.get("horizon"))
    raise ConfigurationError(f"unknown variant {kind!r}")


def variant_to_json(v: GameVariant) -> dict:
    out: dict[str, Any] = {"kind": v.name}
    if isinstance(v, FixedTime):
        out["T"] = v.T
    else:
        out["horizon"] = v.horizon
    if isinstance(v, Rugby):
        out["finish_x"] = v.finish_x
    return out


@dataclass(frozen=True)
class MatchSpec:
    """Everything needed to start a match.

    ``robber_start`` pins the robber's initial vertex; when it is set the
    robber controller's placement is ignored and cop controllers may read it
    (the cops then choose their configuration knowing where the robber
    begins).  For FixedTime the start defaults to the board centre.
    """

    board: BoardKind
    variant: GameVariant
    cop_count: int
    robber_speed: int = 2
    seed: int = 0
    robber_start: Optional[Coord] = None
    cover_at_start: bool = False
    cover_after_robber: bool = False

    def __post_init__(self) -> None:
        if self.cop_count < 0:
            raise ConfigurationError("cop_count must be >= 0")
        if self.robber_speed < 1:
            raise ConfigurationError("robber_speed must be >= 1")
        if isinstance(self.variant, Rugby) and not isinstance(self.board, Tunnel):
            raise ConfigurationError("Rugby is played on a tunnel")

    @property
    def horizon(self) -> int:
        h = self.variant.horizon
        if h is not None:
            return int(h)
        return 20 * self.board.n * (self.cop_count + 1)

    def declared_start(self) -> Optional[Coord]:
        if self.robber_start is not None:
            return tuple(int(v) for v in self.robber_start)
        if isinstance(self.variant, FixedTime):
            return self.board.center
        return None

    def to_json(self) -> dict:
        return {
            "board": self.board.to_json(),
            "variant": variant_to_json(self.variant),
            "cop_count": self.cop_count,
            "robber_speed": self.robber_speed,
            "seed": self.seed,
            "robber_start": list(self.robber_start) if self.robber_start is not None else None,
            "cover_at_start": self.cover_at_start,
            "cover_after_robber": self.cover_after_robber,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "MatchSpec":
        start = obj.get("robber_start")
        return cls(
            board=board_from_json(obj["board"]),
            variant=variant_from_json(obj["variant"]),
            cop_count=int(obj["cop_count"]),
            robber_speed=int(obj.get("robber_speed", 2)),
            seed=int(obj.get("seed", 0)),
            robber_start=tuple(start) if start is not None else None,
            cover_at_start=bool(obj.get("cover_at_start", False)),
            cover_after_robber=bool(obj.get("cover_after_robber", False)),
        )


COPS_TO_MOVE = "cops"
ROBBER_TO_MOVE = "robber"


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.int64, copy=True)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class GameState:
    time: int
    cops: np.ndarray
    robber: Coord
    phase: str
    covered_now: bool
    ever_covered: bool
    coverage_broken: bool
    max_robber_x: int

    @property
    def cop_turn_number(self) -> int:
        """Number of the next (or, if the robber is to move, the last) cop turn."""
        return self.time + 1

    def cop_list(self) -> list[Coord]:
        return [tuple(int(v) for v in row) for row in self.cops]

    def to_json(self) -> dict:
        return {
            "time": self.time,
            "phase": self.phase,
            "cops": self.cops.tolist(),
            "robber": list(self.robber),
            "covered_now": self.covered_now,
            "ever_covered": self.ever_covered,
            "coverage_broken": self.coverage_broken,
            "max_robber_x": self.max_robber_x,
        }

    @classmethod
    def from_json(cls, obj: dict, dim: int) -> "GameState":
        cops = np.array(obj["cops"], dtype=np.int64).reshape(-1, dim)
        return cls(
            time=int(obj["time"]),
            cops=_frozen(cops),
            robber=tuple(obj["robber"]),
            phase=obj["phase"],
            covered_now=bool(obj["covered_now"]),
            ever_covered=bool(obj["ever_covered"]),
            coverage_broken=bool(obj["coverage_broken"]),
            max_robber_x=int(obj["max_robber_x"]),
        )


# --------------------------------------------------------------------------
# controllers
# --------------------------------------------------------------------------


class CopController:
    """Decision procedure for the whole cop team.

    ``place`` returns a ``(cop_count, dim)`` integer array; ``move`` receives
    the full state (cops to move) and returns the array of new positions.
    """

    name = "cop"

    def place(self, spec: MatchSpec, rng: np.random.Generator) -> np.ndarray:
        raise NotImplementedError

    def move(self, state: GameState) -> np.ndarray:
        raise NotImplementedError

    def cops_needed(self, board: BoardKind) -> Optional[int]:
        """Cop count this controller is built for, if it fixes one."""
        return None


class RobberController:
    name = "robber"

    def place(self, spec: MatchSpec, cops: np.ndarray, rng: np.random.Generator) -> Coord:
        raise NotImplementedError

    def move(self, state: GameState) -> Coord:
        raise NotImplementedError

    def start(self, spec: MatchSpec, start: Coord) -> None:
        """Told the actual start when it was imposed by the match rules."""


# --------------------------------------------------------------------------
# outcomes and traces
# --------------------------------------------------------------------------

COPS_WIN = "CopsWin"
ROBBER_WINS = "RobberWins"
HORIZON = "HorizonExhausted"


@dataclass(frozen=True)
class Outcome:
    result: str
    reason: str
    time: int
    verdict: Optional[str] = None

    @property
    def winner(self) -> str:
        """``cops`` or ``robber``; horizon outcomes resolve to their verdict."""
        res = self.verdict if self.result == HORIZON else self.result
        return "cops" if res == COPS_WIN else "robber"

    def to_json(self) -> dict:
        return {"result": self.result, "reason": self.reason, "time": self.time, "verdict": self.verdict}

    @classmethod
    def from_json(cls, obj: dict) -> "Outcome":
        return cls(obj["result"], obj["reason"], int(obj["time"]), obj.get("verdict"))


@dataclass
class Trace:
    spec: MatchSpec
    states: list[GameState]
    outcome: Optional[Outcome] = None
    capture_time: Optional[int] = None
    half_turns: int = 0

    @property
    def final(self) -> GameState:
        return self.states[-1]

    def to_jsonl(self) -> str:
        lines = [json.dumps({"type": "header", "spec": self.spec.to_json()}, sort_keys=True)]
        for s in self.states:
            lines.append(json.dumps({"type": "state", **s.to_json()}, sort_keys=True))
        lines.append(
            json.dumps(
                {
                    "type": "outcome",
                    **(self.outcome.to_json() if self.outcome else {}),
                    "capture_time": self.capture_time,
                    "half_turns": self.half_turns,
                },
                sort_keys=True,
            )
        )
        return "\n".join(lines) + "\n"

    @classmethod
    def from_jsonl(cls, text: str) -> "Trace":
        spec = None
        states: list[GameState] = []
        outcome = None
        capture_time = None
        half_turns = 0
        for line in text.splitlines():
            if not line.strip():
                continue
            rec = json.loads(line)
            kind = rec.pop("type")
            if kind == "header":
                spec = MatchSpec.from_json(rec["spec"])
            elif kind == "state":
                assert spec is not None, "header must come first"
                states.append(GameState.from_json(rec, spec.board.dim))
            elif kind == "outcome":
                capture_time = rec.pop("capture_time", None)
                half_turns = rec.pop("half_turns", 0)
                outcome = Outcome.from_json(rec) if "result" in rec else None
        if spec is None:
            raise ValueError("trace has no header")
        return cls(spec, states, outcome, capture_time, half_turns)


# --------------------------------------------------------------------------
# turn mechanics
# --------------------------------------------------------------------------


def _as_cop_array(moves: Any, spec: MatchSpec) -> np.ndarray:
    arr = np.asarray(moves, dtype=np.int64)
    if spec.cop_count == 0:
        return arr.reshape(0, spec.board.dim)
    if arr.shape != (spec.cop_count, spec.board.dim):
        raise RuleViolation("cops", f"expected positions of shape {(spec.cop_count, spec.board.dim)}, got {arr.shape}")
    return arr


def _covered(cops: np.ndarray, robber: Coord) -> bool:
    if len(cops) == 0:
        return False
    hit = cops[:, 0] == robber[0]
    for a in range(1, cops.shape[1]):
        hit &= cops[:, a] == robber[a]
    return bool(hit.any())


def rugby_start(spec: MatchSpec, cops: np.ndarray) -> Coord:
    """Robber start for Rugby: ``2n`` behind the rearmost cop, centred."""
    board = spec.board
    min_x = int(cops[:, 0].min()) if len(cops) else 0
    c = (board.n + 1) // 2
    return (min_x - 2 * board.n,) + (c,) * board.d


def new_match(
    spec: MatchSpec,
    cop_ctrl: CopController,
    rob_ctrl: RobberController,
    rng: Optional[np.random.Generator] = None,
) -> GameState:
    """Place both sides and return the state at time 0 with the cops to move."""
    board = spec.board
    if rng is None:
        rng = np.random.default_rng(spec.seed)
    cop_rng, rob_rng = rng.spawn(2)
    cops = _as_cop_array(cop_ctrl.place(spec, cop_rng), spec)
    if len(cops) and not board.contains_array(cops).all():
        raise RuleViolation("cops", "placement off the board")
    if isinstance(spec.variant, Rugby):
        robber = rugby_start(spec, cops)
        rob_ctrl.start(spec, robber)
    elif spec.declared_start() is not None:
        robber = spec.declared_start()
        rob_ctrl.start(spec, robber)
    else:
        robber = tuple(int(v) for v in rob_ctrl.place(spec, _frozen(cops), rob_rng))
    if not board.contains(robber):
        raise RuleViolation("robber", f"placement {robber} off the board")
    cov = _covered(cops, robber)
    return GameState(
        time=0,
        cops=_frozen(cops),
        robber=robber,
        phase=COPS_TO_MOVE,
        covered_now=cov,
        ever_covered=cov,
        coverage_broken=False,
        max_robber_x=robber[0],
    )


def cop_turn(state: GameState, moves: Any, spec: MatchSpec) -> GameState:
    if state.phase != COPS_TO_MOVE:
        raise RuleViolation("cops", "not the cops' turn")
    new = _as_cop_array(moves, spec)
    if len(new):
        if not spec.board.contains_array(new).all():
            raise RuleViolation("cops", "a cop left the board")
        step = spec.board.distance_array(new, state.cops)
        if step.max() > 1:
            worst = int(np.argmax(step))
            raise RuleViolation("cops", f"cop {worst} moved {int(step[worst])} > 1")
    cov = _covered(new, state.robber)
    broken = state.coverage_broken or (isinstance(spec.variant, Covering) and not cov)
    return replace(
        state,
        cops=_frozen(new),
        phase=ROBBER_TO_MOVE,
        covered_now=cov,
        ever_covered=state.ever_covered or cov,
        coverage_broken=broken,
    )


def robber_turn(state: GameState, move: Sequence[int], spec: MatchSpec) -> GameState:
    if state.phase != ROBBER_TO_MOVE:
        raise RuleViolation("robber", "not the robber's turn")
    target = tuple(int(v) for v in move)
    board = spec.board
    if not board.contains(target):
        raise RuleViolation("robber", f"move to {target} leaves the board")
    if board.distance(state.robber, target) > spec.robber_speed:
        raise RuleViolation("robber", f"jump {state.robber}->{target} exceeds speed {spec.robber_speed}")
    cov = _covered(state.cops, target)
    broken = state.coverage_broken or (
        isinstance(spec.variant, Covering) and spec.cover_after_robber and not cov
    )
    return replace(
        state,
        time=state.time + 1,
        robber=target,
        phase=COPS_TO_MOVE,
        covered_now=cov,
        ever_covered=state.ever_covered or cov,
        coverage_broken=broken,
        max_robber_x=max(state.max_robber_x, target[0]),
    )


def _check(state: GameState, spec: MatchSpec, initial: bool = False) -> Optional[Outcome]:
    """Outcome decided by ``state`` alone (``None`` if the game continues)."""
    v = spec.variant
    t = state.time
    after_cops = state.phase == ROBBER_TO_MOVE
    if isinstance(v, Covering):
        if initial:
            if spec.cover_at_start and not state.covered_now:
                return Outcome(ROBBER_WINS, "uncovered at placement", t)
            return None
        if after_cops and not state.covered_now:
            return Outcome(ROBBER_WINS, f"uncovered after cop turn {t + 1}", t)
        if not after_cops and spec.cover_after_robber and not state.covered_now:
            return Outcome(ROBBER_WINS, f"uncovered after robber move {t}", t)
        return None
    if isinstance(v, FixedTime):
        if after_cops and t + 1 == v.T:
            if state.covered_now:
                return Outcome(COPS_WIN, f"coincident after cop turn {v.T}", t)
            return Outcome(ROBBER_WINS, f"free after cop turn {v.T}", t)
        return None
    if isinstance(v, Rugby):
        if state.covered_now:
            return Outcome(COPS_WIN, "robber caught", t)
        if state.robber[0] >= v.finish_x:
            return Outcome(ROBBER_WINS, f"crossed x={v.finish_x}", t)
        return None
    if isinstance(v, Capture):
        if state.covered_now:
            return Outcome(COPS_WIN, "robber caught", t)
        return None
    raise ConfigurationError(f"unknown variant {v!r}")


def _horizon_outcome(state: GameState, spec: MatchSpec) -> Outcome:
    v = spec.variant
    t = state.time
    if isinstance(v, Covering):
        return Outcome(COPS_WIN, "horizon reached with coverage intact", t, verdict=COPS_WIN)
    if isinstance(v, Rugby):
        return Outcome(COPS_WIN, "blocked until horizon", t, verdict=COPS_WIN)
    if isinstance(v, Capture):
        return Outcome(ROBBER_WINS, "uncaught at horizon", t, verdict=ROBBER_WINS)
    return Outcome(HORIZON, "horizon", t, verdict=ROBBER_WINS)


def adjudicate(trace: Trace, variant: Optional[GameVariant] = None) -> Outcome:
    """Re-derive the outcome of a recorded trace from its states."""
    spec = trace.spec if variant is None else replace(trace.spec, variant=variant)
    if not trace.states:
        raise ValueError("empty trace")
    for i, s in enumerate(trace.states):
        out = _check(s, spec, initial=(i == 0))
        if out is not None:
            return out
    if trace.outcome is not None and trace.outcome.reason.startswith("rule violation"):
        return trace.outcome
    return _horizon_outcome(trace.states[-1], spec)


def play(
    spec: MatchSpec,
    cop_ctrl: CopController,
    rob_ctrl: RobberController,
    *,
    record: bool = True,
    on_state: Optional[Callable[[GameState], None]] = None,
) -> Trace:
    """Run a match to a decision or the horizon.

    With ``record=False`` only the first and last states are kept, which is
    what long fuzz runs with thousands of cops need.  ``on_state`` is called
    after every half-turn (and on the initial state).
    """
    rng = np.random.default_rng(spec.seed)
    state = new_match(spec, cop_ctrl, rob_ctrl, rng)
    states = [state]
    if on_state:
        on_state(state)
    trace = Trace(spec, states)

    def push(s: GameState) -> None:
        trace.half_turns += 1
        if record:
            states.append(s)
        if on_state:
            on_state(s)

    outcome = _check(state, spec, initial=True)
    if outcome is None and isinstance(spec.variant, (Rugby, Capture)) and state.covered_now:
        outcome = Outcome(COPS_WIN, "robber placed on a cop", 0)
    horizon = spec.horizon
    while outcome is None:
        try:
            state = cop_turn(state, cop_ctrl.move(state), spec)
        except RuleViolation as exc:
            outcome = Outcome(ROBBER_WINS, f"rule violation by cops: {exc}", state.time)
            break
        push(state)
        outcome = _check(state, spec)
        if outcome is not None:
            break
        try:
            state = robber_turn(state, rob_ctrl.move(state), spec)
        except RuleViolation as exc:
            outcome = Outcome(COPS_WIN, f"rule violation by robber: {exc}", state.time)
            break
        push(state)
        outcome = _check(state, spec)
        if outcome is None and state.time >= horizon:
            outcome = _horizon_outcome(state, spec)
    if not record and states[-1] is not state:
        states.append(state)
    trace.outcome = outcome
    if outcome.result == COPS_WIN and state.covered_now:
        trace.capture_time = state.time + 1 if state.phase == ROBBER_TO_MOVE else state.time
    return trace


def validate_trace(trace: Trace) -> list[str]:
    """Check alternation and move legality of a recorded trace.

    Returns the list of problems found; an empty list means the trace is
    consistent with the rules.
    """
    spec = trace.spec
    board = spec.board
    problems: list[str] = []
    states = trace.states
    if not states:
        return ["empty trace"]
    if states[0].phase != COPS_TO_MOVE or states[0].time != 0:
        problems.append("trace does not start at time 0 with the cops to move")
    for i in range(1, len(states)):
        a, b = states[i - 1], states[i]
        if len(b.cops) and not board.contains_array(b.cops).all():
            problems.append(f"state {i}: cop off board")
        if not board.contains(b.robber):
            problems.append(f"state {i}: robber off board")
        if b.covered_now != _covered(b.cops, b.robber):
            problems.append(f"state {i}: covered_now flag inconsistent")
        if a.phase == COPS_TO_MOVE:
            if b.phase != ROBBER_TO_MOVE or b.time != a.time:
                problems.append(f"state {i}: expected robber phase at time {a.time}")
            if tuple(b.robber) != tuple(a.robber):
                problems.append(f"state {i}: robber moved during cop turn")
            if len(a.cops) and board.distance_array(a.cops, b.cops).max() > 1:
                problems.append(f"state {i}: cop moved more than 1")
        else:
            if b.phase != COPS_TO_MOVE or b.time != a.time + 1:
                problems.append(f"state {i}: expected cop phase at time {a.time + 1}")
            if not np.array_equal(a.cops, b.cops):
                problems.append(f"state {i}: cops moved during robber turn")
            if board.distance(a.robber, b.robber) > spec.robber_speed:
                problems.append(f"state {i}: robber moved more than {spec.robber_speed}")
    return problems
