"""Board geometry for the three board families.

Every board uses the Chebyshev (l-infinity, "king move") metric.  Bounded
axes are 1-based, ``[1, n]``.  On a :class:`Tunnel` the first axis is the
unbounded integer line and the remaining ``d`` axes are bounded.

Scalar helpers work on plain tuples; the ``*_array`` methods accept numpy
arrays of shape ``(..., dim)`` so the engine can validate thousands of cop
moves per turn without a Python loop.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import ClassVar, Iterable, Iterator, Sequence, Union

import numpy as np

Coord = tuple[int, ...]


class InvalidInput(ValueError):
    """Raised for malformed coordinates, rectangles or paths."""


@dataclass(frozen=True)
class _BoardBase:
    n: int
    d: int

    def __post_init__(self) -> None:
        if self.n < 1 or self.d < 1:
            raise InvalidInput(f"board needs n >= 1 and d >= 1, got n={self.n}, d={self.d}")

    # subclasses override
    kind: ClassVar[str] = "base"
    unbounded_axes: ClassVar[tuple[int, ...]] = ()

    @property
    def dim(self) -> int:
        return self.d

    @property
    def bounded_axes(self) -> tuple[int, ...]:
        return tuple(a for a in range(self.dim) if a not in self.unbounded_axes)

    @property
    def center(self) -> Coord:
        c = (self.n + 1) // 2
        return tuple(0 if a in self.unbounded_axes else c for a in range(self.dim))

    def _check_dim(self, p: Sequence[int]) -> None:
        if len(p) != self.dim:
            raise InvalidInput(f"coordinate {tuple(p)} has length {len(p)}, board {self} needs {self.dim}")

    def contains(self, p: Sequence[int]) -> bool:
        if len(p) != self.dim:
            return False
        return all(a in self.unbounded_axes or 1 <= p[a] <= self.n for a in range(self.dim))

    def require(self, p: Sequence[int]) -> Coord:
        self._check_dim(p)
        if not self.contains(p):
            raise InvalidInput(f"coordinate {tuple(p)} is off {self}")
        return tuple(int(v) for v in p)

    def axis_distance(self, a: int, b: int, axis: int) -> int:
        return abs(a - b)

    def distance(self, a: Sequence[int], b: Sequence[int]) -> int:
        self._check_dim(a)
        self._check_dim(b)
        return max(self.axis_distance(x, y, i) for i, (x, y) in enumerate(zip(a, b)))

    def contains_array(self, pts: np.ndarray) -> np.ndarray:
        pts = np.asarray(pts)
        ok = np.ones(pts.shape[:-1], dtype=bool)
        for a in self.bounded_axes:
            ok &= (pts[..., a] >= 1) & (pts[..., a] <= self.n)
        return ok

    def distance_array(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        diff = np.abs(np.asarray(a) - np.asarray(b))
        return diff.max(axis=-1)

    def clamp(self, p: Sequence[int]) -> Coord:
        return tuple(
            int(v) if a in self.unbounded_axes else int(min(max(v, 1), self.n))
            for a, v in enumerate(p)
        )

    def clamp_array(self, pts: np.ndarray) -> np.ndarray:
        out = np.array(pts, dtype=np.int64, copy=True)
        for a in self.bounded_axes:
            col = out[..., a]
            np.maximum(col, 1, out=col)
            np.minimum(col, self.n, out=col)
        return out

    def axis_range(self, axis: int) -> range:
        if axis in self.unbounded_axes:
            raise InvalidInput("unbounded axis has no finite range")
        return range(1, self.n + 1)

    def points(self) -> Iterator[Coord]:
        if self.unbounded_axes:
            raise InvalidInput(f"{self} is infinite")
        return itertools.product(range(1, self.n + 1), repeat=self.dim)

    def size(self) -> int:
        if self.unbounded_axes:
            raise InvalidInput(f"{self} is infinite")
        return self.n ** self.dim

    def normalize(self, p: Sequence[int]) -> Coord:
        return tuple(int(v) for v in p)

    def step_offsets(self, s: int) -> list[Coord]:
        return list(itertools.product(range(-s, s + 1), repeat=self.dim))

    def to_json(self) -> dict:
        return {"kind": self.kind, "n": self.n, "d": self.d}


@dataclass(frozen=True)
class Grid(_BoardBase):
    """The grid ``[n]^d`` with king-move adjacency."""

    kind = "grid"


@dataclass(frozen=True)
class Torus(_BoardBase):
    """``[n]^d`` with every axis wrapping modulo ``n``."""

    kind = "torus"

    def axis_distance(self, a: int, b: int, axis: int) -> int:
        delta = abs(a - b) % self.n
        return min(delta, self.n - delta)

    def distance_array(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        delta = np.abs(np.asarray(a) - np.asarray(b)) % self.n
        return np.minimum(delta, self.n - delta).max(axis=-1)

    def normalize(self, p: Sequence[int]) -> Coord:
        return tuple((int(v) - 1) % self.n + 1 for v in p)

    def clamp(self, p: Sequence[int]) -> Coord:
        return self.normalize(p)

    def clamp_array(self, pts: np.ndarray) -> np.ndarray:
        return (np.asarray(pts, dtype=np.int64) - 1) % self.n + 1


@dataclass(frozen=True)
class Tunnel(_BoardBase):
    """``Z x [n]^d``: the first axis is unbounded, the others are ``[1, n]``."""

    kind = "tunnel"
    unbounded_axes = (0,)

    @property
    def dim(self) -> int:
        return self.d + 1


BoardKind = Union[Grid, Torus, Tunnel]

_KINDS = {"grid": Grid, "torus": Torus, "tunnel": Tunnel}


def board_from_json(obj: dict) -> BoardKind:
    try:
        cls = _KINDS[obj["kind"]]
    except KeyError as exc:
        raise InvalidInput(f"unknown board kind {obj.get('kind')!r}") from exc
    return cls(int(obj["n"]), int(obj.get("d", 1)))


def chebyshev(board: BoardKind, a: Sequence[int], b: Sequence[int]) -> int:
    """Chebyshev distance between two points of ``board``."""
    return board.distance(a, b)


def ball(board: BoardKind, p: Sequence[int], s: int) -> set[Coord]:
    """All board points within Chebyshev distance ``s`` of ``p`` (``p`` included)."""
    p = board.require(p)
    if s < 0:
        raise InvalidInput("radius must be non-negative")
    out = set()
    for off in itertools.product(range(-s, s + 1), repeat=board.dim):
        q = tuple(x + o for x, o in zip(p, off))
        if isinstance(board, Torus):
            q = board.normalize(q)
        if board.contains(q):
            out.add(q)
    return out


@dataclass(frozen=True)
class Rect:
    """Axis-aligned box given by closed per-axis intervals.

    ``None`` as a bound means that side is unbounded (only sensible on the
    first axis of a tunnel).
    """

    bounds: tuple[tuple[int | None, int | None], ...]

    def __post_init__(self) -> None:
        for lo, hi in self.bounds:
            if lo is not None and hi is not None and lo > hi:
                raise InvalidInput(f"empty interval [{lo}, {hi}]")

    @classmethod
    def square(cls, corner: Sequence[int], side: int) -> "Rect":
        """Square whose lowest corner is ``corner`` and which has ``side`` points per axis."""
        if side < 1:
            raise InvalidInput("square side must be >= 1")
        return cls(tuple((c, c + side - 1) for c in corner))

    @classmethod
    def from_corners(cls, a: Sequence[int], b: Sequence[int]) -> "Rect":
        return cls(tuple((min(x, y), max(x, y)) for x, y in zip(a, b)))

    @property
    def dim(self) -> int:
        return len(self.bounds)

    def side(self, axis: int) -> int:
        lo, hi = self.bounds[axis]
        if lo is None or hi is None:
            raise InvalidInput("unbounded side")
        return hi - lo + 1

    def contains(self, p: Sequence[int]) -> bool:
        return all(
            (lo is None or v >= lo) and (hi is None or v <= hi)
            for v, (lo, hi) in zip(p, self.bounds)
        )

    def contains_array(self, pts: np.ndarray) -> np.ndarray:
        pts = np.asarray(pts)
        ok = np.ones(pts.shape[:-1], dtype=bool)
        for a, (lo, hi) in enumerate(self.bounds):
            if lo is not None:
                ok &= pts[..., a] >= lo
            if hi is not None:
                ok &= pts[..., a] <= hi
        return ok

    def count(self, pts: np.ndarray) -> int:
        pts = np.asarray(pts)
        if pts.size == 0:
            return 0
        return int(self.contains_array(pts).sum())

    def gap(self, other: "Rect") -> int:
        """Chebyshev distance between the nearest points of two boxes."""
        worst = 0
        for (lo1, hi1), (lo2, hi2) in zip(self.bounds, other.bounds):
            if hi1 is not None and lo2 is not None and hi1 < lo2:
                worst = max(worst, lo2 - hi1)
            elif hi2 is not None and lo1 is not None and hi2 < lo1:
                worst = max(worst, lo1 - hi2)
        return worst

    def points(self) -> Iterator[Coord]:
        return itertools.product(*(range(lo, hi + 1) for lo, hi in self.bounds))


def project(rect: Rect, p: Sequence[int]) -> Coord:
    """Closest point of ``rect`` to ``p`` in Euclidean distance.

    For a box the minimiser is unique and is obtained by clamping each axis.
    """
    if len(p) != rect.dim:
        raise InvalidInput(f"point {tuple(p)} and box of dimension {rect.dim} disagree")
    out = []
    for v, (lo, hi) in zip(p, rect.bounds):
        if lo is not None and v < lo:
            v = lo
        if hi is not None and v > hi:
            v = hi
        out.append(int(v))
    return tuple(out)


def reflect(n: int, p: Sequence[int], axes: Iterable[int]) -> Coord:
    """Replace ``x`` by ``n + 1 - x`` on each selected axis (0-based indices)."""
    axes = set(axes)
    return tuple(n + 1 - v if a in axes else int(v) for a, v in enumerate(p))


def fold(n: int, v: int, upper: bool) -> int:
    """Fold a coordinate into the lower (or upper) half of ``[1, n]``.

    The fold picks whichever of ``v`` and ``n + 1 - v`` lies in the requested
    half; it is 1-Lipschitz from the cycle ``Z/n`` onto the path.
    """
    w = n + 1 - v
    return max(v, w) if upper else min(v, w)


def fold_to_quadrant(n: int, p: Sequence[int], quadrant: Sequence[bool]) -> Coord:
    """Image of ``p`` under reflections that lands it in ``quadrant``.

    ``quadrant[a]`` is True for the upper half of axis ``a``.
    """
    return tuple(fold(n, v, up) for v, up in zip(p, quadrant))
