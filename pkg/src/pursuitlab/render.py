"""ASCII pictures of small positions."""
from __future__ import annotations

from typing import Iterable, Optional, Sequence

import numpy as np

from .board import BoardKind, Tunnel
from .engine import ConfigurationError, GameState

MAX_SIDE = 60
TUNNEL_WINDOW = 60


def render(
    board: BoardKind,
    cops: np.ndarray,
    robber: Sequence[int],
    holes: Optional[Iterable[Sequence[int]]] = None,
) -> str:
    """'C' cop, 'R' robber, 'X' both, '·' marked hole, '.' empty; top row first.

    Tunnels show a window of columns around the robber.
    """
    if board.n > MAX_SIDE:
        raise ConfigurationError(f"rendering is limited to n <= {MAX_SIDE}")
    if board.dim > 2:
        raise ConfigurationError("rendering supports 1- and 2-dimensional boards")
    robber = tuple(int(v) for v in robber)
    if isinstance(board, Tunnel):
        x0 = robber[0] - TUNNEL_WINDOW // 2
        xs = range(x0, x0 + TUNNEL_WINDOW)
    else:
        xs = range(1, board.n + 1)
    ys = range(board.n, 0, -1) if board.dim == 2 else [None]
    cop_cells = {tuple(int(v) for v in c) for c in np.asarray(cops).reshape(-1, board.dim)}
    hole_cells = {tuple(int(v) for v in h) for h in holes} if holes else set()
    lines = []
    for y in ys:
        row = []
        for x in xs:
            p = (x,) if y is None else (x, y)
            if p == robber:
                row.append("X" if p in cop_cells else "R")
            elif p in cop_cells:
                row.append("C")
            elif p in hole_cells:
                row.append("·")
            else:
                row.append(".")
        lines.append("".join(row))
    return "\n".join(lines)


def render_state(board: BoardKind, state: GameState, holes=None) -> str:
    head = f"t={state.time} {state.phase} to move"
    return head + "\n" + render(board, state.cops, state.robber, holes)
