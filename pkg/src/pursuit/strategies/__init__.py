"""Strategy registry: ``make_strategy("name?k=v", side)``."""

from __future__ import annotations

from ..families.spec import SpecError, format_value, parse_spec
from .base import InvariantViolation, StrategyError, safe_moves
from .basic import KEscapeRobber, RandomWalker, ShadowRobber, ShortestPathCop, SolverCop, SolverRobber
from .chain import ChainScriptCop, check_claims
from .gee import GeeRobber, GeeSixCop
from .hgraph import HClimberCop, HRobber
from .trail import ConsistentCop, TrailCop

COPS = {
    "trail": TrailCop,
    "consistent": ConsistentCop,
    "chain-script": ChainScriptCop,
    "gee": GeeSixCop,
    "hgraph": HClimberCop,
    "solver": SolverCop,
    "shortest-path": ShortestPathCop,
}
ROBBERS = {
    "gee": GeeRobber,
    "hgraph": HRobber,
    "solver": SolverRobber,
    "shadow": ShadowRobber,
    "k-escape": KEscapeRobber,
}


def _plain(v):
    # nested specs are not meaningful for strategies; keep their text
    return format_value(v) if not isinstance(v, (int, bool, str)) else v


def make_strategy(spec: str, side: str):
    """Build a fresh strategy for ``side`` ("cop" or "robber") from its spec string."""
    if side not in ("cop", "robber"):
        raise ValueError(f"side must be cop or robber, not {side!r}")
    fs = parse_spec(spec)
    params = {k: _plain(v) for k, v in fs.params}
    if fs.name == "random":
        return RandomWalker(side, **params)
    table = COPS if side == "cop" else ROBBERS
    if fs.name not in table:
        names = sorted(set(table) | {"random"})
        raise SpecError(f"no {side} strategy {fs.name!r}; known: {', '.join(names)}")
    return table[fs.name](**params)


def strategy_names(side: str) -> list[str]:
    return sorted(set(COPS if side == "cop" else ROBBERS) | {"random"})


__all__ = [
    "COPS",
    "ROBBERS",
    "InvariantViolation",
    "StrategyError",
    "check_claims",
    "make_strategy",
    "safe_moves",
    "strategy_names",
]
