"""Cops-and-robber pursuit games on grids, tori and tunnels under the king-move metric."""
from __future__ import annotations

from .board import Grid, InvalidInput, Rect, Torus, Tunnel, chebyshev, project
from .engine import (
    Capture,
    ConfigurationError,
    Covering,
    FixedTime,
    MatchSpec,
    Rugby,
    RuleViolation,
    play,
    validate_trace,
)

__all__ = [
    "Capture", "ConfigurationError", "Covering", "FixedTime", "Grid", "InvalidInput",
    "MatchSpec", "Rect", "Rugby", "RuleViolation", "Torus", "Tunnel", "chebyshev",
    "play", "project", "validate_trace",
]
