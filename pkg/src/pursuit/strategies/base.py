"""Shared pieces for strategies."""

from __future__ import annotations

from typing import Hashable

from ..arena import Arena, Strategy


class InvariantViolation(AssertionError):
    """A strategy noticed that one of its declared invariants failed."""


class StrategyError(RuntimeError):
    """A strategy cannot act on this arena or state."""


def require_finite(strategy: Strategy, arena: Arena) -> None:
    if not arena.finite:
        raise StrategyError(f"{strategy.name} needs a finite arena")


def safe_moves(arena: Arena, cop: Hashable, robber: Hashable) -> list:
    """Robber moves that do not end next to or on the cop."""
    return [m for m in arena.closed_moves(robber, (cop,)) if m != cop and not arena.adjacent(m, cop)]


__all__ = ["Arena", "InvariantViolation", "Strategy", "StrategyError", "require_finite", "safe_moves"]
