"""Density descent: a robber that dives into ever sparser sub-squares.

The density of a ``k``-sided square is its cop count over ``k^f``.  The
robber walks up the main diagonal of a square of side ``L = 2^n - offset``
and at fixed waypoints inspects a few candidate sub-squares hanging off the
diagonal.  He enters the first one whose density is no larger than the
current square's and repeats the procedure inside it, in a frame mirrored
so that he again walks away from the corner he came in by.

Waypoints sit at ``floor(a*L/2^k)`` for odd ``a`` below the centre.  A
waypoint of level ``k >= 2`` offers two squares of side
``2^(n-k-1) - offset``, one above-left and one below-right of the diagonal;
the centre (``k = 1``) offers three of side ``2^(n-2) - offset``.  Squares
inspected at different times are too far apart for one cop to be counted
twice, so if every candidate is denser than the current square the cops
number at least ``alpha * L^f * S(f)`` with

    S(f) = 3*4^-f + 2*8^-f + 4*16^-f + ...  =  3x^2 + 2x^3/(1-2x),  x = 2^-f,

and ``S(f) > 1`` is a contradiction.  That holds exactly when
``4x^2 + x - 1 > 0``, i.e. ``f < log2((1 + sqrt(17))/2)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from ..board import Grid, Rect
from ..engine import ConfigurationError, RobberController

FEASIBILITY_THRESHOLD = math.log2((1 + math.sqrt(17)) / 2)


def density(rect: Rect, cops: np.ndarray, f: float) -> float:
    """Cops inside ``rect`` divided by ``side**f`` (``rect`` must be a square)."""
    sides = {rect.side(a) for a in range(rect.dim)}
    if len(sides) != 1:
        raise ConfigurationError(f"density is defined for squares, got sides {sorted(sides)}")
    k = sides.pop()
    cops = np.asarray(cops).reshape(-1, rect.dim) if len(cops) else np.empty((0, rect.dim))
    return rect.count(cops) / k ** f


def exponent_series(f: float, terms: Optional[int] = None) -> float:
    """``3*4^-f + sum_{j>=1} 2^j * (2^(j+2))^-f``, summed in closed form or to ``terms`` terms."""
    if f <= 1:
        raise ValueError(f"the series diverges for f <= 1 (got {f})")
    x = 2.0 ** -f
    if terms is None:
        return 3 * x * x + 2 * x ** 3 / (1 - 2 * x)
    return 3 * x * x + sum(2 ** j * x ** (j + 2) for j in range(1, terms + 1))


def exponent_feasible(f: float) -> bool:
    """Whether the descent argument works with exponent ``f`` (``S(f) > 1``).

    Decided on the factored form ``4x^2 + x - 1 > 0`` so the answer does not
    wobble near the threshold.
    """
    if f <= 1:
        raise ValueError(f"the series diverges for f <= 1 (got {f})")
    x = 2.0 ** -f
    return 4 * x * x + x - 1 > 0


# ---------------------------------------------------------------------------
# candidate layout
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Candidate:
    waypoint: int           # the robber inspects from (waypoint, waypoint)
    level: int              # k: waypoint = floor(a * L / 2^k)
    rect: Rect              # local coordinates, 1-based
    entry: tuple[int, int]  # corner the robber steps onto
    direction: tuple[int, int]  # walking direction inside, relative to the current frame

    @property
    def side(self) -> int:
        return self.rect.side(0)


def check_time(w: int) -> int:
    """Moves needed to walk from (1,1) to (w,w) at speed 2."""
    return w // 2  # ceil((w - 1) / 2)


def square_exponent(L: int, offset: int) -> Optional[int]:
    n = 1
    while 2 ** n - offset < L:
        n += 1
    return n if 2 ** n - offset == L else None


def largest_playable(side: int, offset: int) -> tuple[int, int]:
    """Largest ``2^n - offset`` not exceeding ``side`` (and its ``n``)."""
    n = 1
    while 2 ** (n + 1) - offset <= side:
        n += 1
    L = 2 ** n - offset
    if L < 1:
        raise ConfigurationError(f"board side {side} is too small for offset {offset}")
    return L, n


def candidate_layout(L: int, offset: int = 33, levels: int = 4) -> list[Candidate]:
    """Candidate squares of a side-``L`` square in the order the robber inspects them."""
    n = square_exponent(L, offset)
    if n is None:
        raise ConfigurationError(f"side {L} is not of the form 2^n - {offset}")
    out: list[Candidate] = []
    points = []
    for k in range(2, levels + 1):
        for a in range(1, 2 ** (k - 1), 2):
            points.append(((a * L) // 2 ** k, k))
    points.sort()
    for w, k in points:
        s = 2 ** (n - k - 1) - offset
        if s < 1 or w - s + 1 < 1:
            continue
        out.append(Candidate(w, k, Rect(((w - s + 1, w), (w + 2, w + s + 1))), (w, w + 2), (-1, 1)))
        out.append(Candidate(w, k, Rect(((w + 2, w + s + 1), (w - s + 1, w))), (w + 2, w), (1, -1)))
    c = L // 2
    s = 2 ** (n - 2) - offset
    if s >= 1 and c + s + 1 <= L and c - s + 1 >= 1:
        out.append(Candidate(c, 1, Rect(((c + 2, c + s + 1), (c + 2, c + s + 1))), (c + 2, c + 2), (1, 1)))
        out.append(Candidate(c, 1, Rect(((c - s + 1, c), (c + 2, c + s + 1))), (c, c + 2), (-1, 1)))
        out.append(Candidate(c, 1, Rect(((c + 2, c + s + 1), (c - s + 1, c))), (c + 2, c), (1, -1)))
    return out


def audit_disjointness(layout: Sequence[Candidate]) -> list[str]:
    """Pairs of inspected squares a single cop could have been counted in."""
    bad = []
    for i, a in enumerate(layout):
        for b in layout[i + 1:]:
            dt = abs(check_time(b.waypoint) - check_time(a.waypoint))
            if a.rect.gap(b.rect) <= dt:
                bad.append(f"{a.rect.bounds}@{a.waypoint} and {b.rect.bounds}@{b.waypoint}: gap {a.rect.gap(b.rect)} <= {dt}")
    return bad


def audit_entry(layout: Sequence[Candidate], L: int) -> list[str]:
    """Inspected squares that a cop starting outside the big square could reach in time."""
    bad = []
    for c in layout:
        (x0, x1), (y0, y1) = c.rect.bounds
        reach = min(x0, y0, L + 1 - x1, L + 1 - y1)  # distance to the nearest outside cell
        t = check_time(c.waypoint)
        if reach <= t:
            bad.append(f"{c.rect.bounds}@{c.waypoint}: outside cops {reach} away, checked at t={t}")
    return bad


# ---------------------------------------------------------------------------
# the robber
# ---------------------------------------------------------------------------


@dataclass
class DensityConfig:
    f: float = 1.2
    offset: int = 33
    levels: int = 4
    alpha: Optional[float] = None  # None: the top square's density at the first move

    def __post_init__(self) -> None:
        if not 1 < self.f < 2:
            raise ConfigurationError("exponent must lie in (1, 2)")
        if self.offset < 1 or self.levels < 1:
            raise ConfigurationError("offset and levels must be positive")


@dataclass
class _Frame:
    origin: np.ndarray  # global cell of local (1, 1)
    sign: np.ndarray    # global direction of the local axes
    side: int
    alpha: float
    layout: list = field(default_factory=list)
    next_idx: int = 0

    def to_global(self, local) -> np.ndarray:
        return self.origin + (np.asarray(local) - 1) * self.sign

    def rect_global(self, rect: Rect) -> Rect:
        a = self.to_global([rect.bounds[0][0], rect.bounds[1][0]])
        b = self.to_global([rect.bounds[0][1], rect.bounds[1][1]])
        return Rect.from_corners(a, b)


class DensityDescender(RobberController):
    """Walks diagonals and drops into sparse candidate squares, recursively.

    ``events`` records every entry, the top-level density and any
    contradiction (all centre squares denser than the current square),
    which the counting argument says needs more cops than the density
    bound allows.
    """

    name = "density_descender"

    def __init__(self, cfg: Optional[DensityConfig] = None):
        self.cfg = cfg or DensityConfig()
        self.events: list[dict] = []
        self.parked = False
        self.contradiction = False

    def place(self, spec, cops, rng):
        self._setup(spec)
        return tuple(int(v) for v in self.frame.to_global((1, 1)))

    def start(self, spec, start):
        self._setup(spec)

    def _setup(self, spec) -> None:
        board = spec.board
        if not isinstance(board, Grid) or board.d != 2:
            raise ConfigurationError(f"density_descender plays on Grid(n,2), got {board}")
        self.spec = spec
        L, _ = largest_playable(board.n, self.cfg.offset)
        self.frame = _Frame(np.array([1, 1]), np.array([1, 1]), L, self.cfg.alpha if self.cfg.alpha is not None else -1.0)
        self.frame.layout = candidate_layout(L, self.cfg.offset, self.cfg.levels)
        self.local = np.array([1, 1])

    def _density(self, rect: Rect, cops) -> float:
        return density(self.frame.rect_global(rect), cops, self.cfg.f)

    def move(self, state):
        fr = self.frame
        if fr.alpha < 0:
            fr.alpha = density(fr.rect_global(Rect.square((1, 1), fr.side)), state.cops, self.cfg.f)
            self.events.append({"t": state.time, "event": "start", "side": fr.side, "alpha": fr.alpha})
        here = tuple(int(v) for v in fr.to_global(self.local))
        if self.parked or fr.next_idx >= len(fr.layout):
            self.parked = True
            return here
        w = fr.layout[fr.next_idx].waypoint
        if self.local[0] < w:
            self.local = self.local + min(2, w - int(self.local[0]))
            return tuple(int(v) for v in fr.to_global(self.local))
        # at a waypoint: inspect its candidates
        group = []
        while fr.next_idx < len(fr.layout) and fr.layout[fr.next_idx].waypoint == w:
            group.append(fr.layout[fr.next_idx])
            fr.next_idx += 1
        dens = [self._density(c.rect, state.cops) for c in group]
        pick = next((i for i, d in enumerate(dens) if d <= fr.alpha), None)
        if pick is None and group[0].level == 1:
            self.contradiction = True
            self.events.append({"t": state.time, "event": "contradiction", "densities": dens, "alpha": fr.alpha})
            pick = int(np.argmin(dens))
        if pick is None:
            return here
        self._enter(group[pick], dens[pick], state.time)
        return tuple(int(v) for v in self.frame.to_global(self.local))

    def _enter(self, cand: Candidate, dens: float, t: int) -> None:
        fr = self.frame
        origin = fr.to_global(cand.entry)
        sign = fr.sign * np.asarray(cand.direction)
        side = cand.side
        self.events.append({"t": t, "event": "enter", "side": side, "density": dens,
                            "corner": tuple(int(v) for v in origin)})
        new = _Frame(origin, sign, side, dens)
        n = square_exponent(side, self.cfg.offset)
        new.layout = candidate_layout(side, self.cfg.offset, self.cfg.levels) if n is not None else []
        self.frame = new
        self.local = np.array([1, 1])
        if dens == 0:
            self.parked = True


def density_descender(cfg: Optional[DensityConfig] = None) -> DensityDescender:
    return DensityDescender(cfg)
