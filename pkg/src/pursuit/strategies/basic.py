"""Generic strategies: random walkers, a greedy chaser, the shadow robber, solver policies and K's escape recipe."""

from __future__ import annotations

from functools import lru_cache
from typing import Any, Hashable

from ..graph import FiniteGraph
from ..solver import GameSolution, solve
from .base import Arena, Strategy, StrategyError, require_finite, safe_moves


@lru_cache(maxsize=16)
def cached_solution(graph: FiniteGraph) -> GameSolution:
    return solve(graph)


def _start(arena: Arena, params: dict[str, Any], rng) -> Hashable:
    if "start" in params:
        return arena.parse(str(params["start"]))
    return arena.random_vertex(rng)


class RandomWalker(Strategy):
    """Uniform random placement and moves.

    On oracles the move is uniform over the family's move menu, or with
    ``mode=exact`` over the true closed neighbourhood (locally finite families).
    ``window`` caps the potential of menu moves; it defaults to the oracle's
    ``random_window`` so that walks on infinite-degree families stay bounded.
    """

    name = "random"

    def __init__(self, side: str, **params: Any):
        super().__init__(**params)
        self.side = side
        self.exact = params.get("mode", "menu") == "exact"

    def reset(self, arena, rng):
        super().reset(arena, rng)
        w = self.params.get("window", None if arena.finite else getattr(arena.graph, "random_window", None))
        self.window = None if w is None else int(w)

    def place(self, other):
        if "start" in self.params:
            return self.arena.parse(str(self.params["start"]))
        while True:
            v = self.arena.random_vertex(self.rng)
            if v != other:
                return v

    def move(self, cop, robber):
        me, other = (cop, robber) if self.side == "cop" else (robber, cop)
        if self.exact and not self.arena.finite:
            return self.arena.graph.random_closed_neighbor(me, self.rng)
        options = self.arena.closed_moves(me, (other,))
        if self.window is not None:
            options = [m for m in options if m == me or self.arena.potential(m) <= self.window]
        return options[self.rng.randrange(len(options))]


class ShortestPathCop(Strategy):
    """Steps along a shortest path to the robber (exact BFS on finite arenas, greedy on oracles)."""

    name = "shortest-path"

    def place(self, other):
        a = self.arena
        if "start" in self.params or not a.finite:
            return _start(a, self.params, self.rng)
        # a centre: least eccentricity, lowest id
        best = None
        for v in range(a.graph.n):
            ecc = max(a.distances_to(v))
            if best is None or ecc < best[0]:
                best = (ecc, v)
        return best[1]

    def move(self, cop, robber):
        a = self.arena
        if a.legal(cop, robber):
            return robber
        if a.finite:
            d = a.distances_to(robber)
            return min(a.closed_moves(cop), key=lambda m: (d[m], m))
        best, best_h = cop, a.hint(cop, robber)
        for m in a.closed_moves(cop, (robber,)):
            h = a.hint(m, robber)
            if h < best_h:
                best, best_h = m, h
        return best


class ShadowRobber(Strategy):
    """Always moves to a vertex outside the cop's closed neighbourhood, as far from the cop as it can."""

    side = "robber"
    name = "shadow"

    def _far(self, cop, options):
        a = self.arena
        if a.finite:
            d = a.distances_to(cop)
            return max(options, key=lambda m: (d[m], -m))
        best, best_h = options[0], a.hint(options[0], cop)
        for m in options[1:]:
            h = a.hint(m, cop)
            if h > best_h:
                best, best_h = m, h
        return best

    def place(self, cop):
        a = self.arena
        if a.finite:
            options = [v for v in range(a.graph.n) if v != cop and not a.adjacent(v, cop)]
            return self._far(cop, options) if options else next(v for v in range(a.graph.n) if v != cop)
        for _ in range(1000):
            v = a.random_vertex(self.rng)
            if v != cop and not a.adjacent(v, cop):
                return v
        raise StrategyError("could not find a vertex away from the cop")

    def move(self, cop, robber):
        options = safe_moves(self.arena, cop, robber)
        if not options:
            return robber
        if robber in options and not self.arena.finite:
            return robber
        return self._far(cop, options)


class SolverCop(Strategy):
    name = "solver"

    def reset(self, arena, rng):
        super().reset(arena, rng)
        require_finite(self, arena)
        self.sol = cached_solution(arena.graph)

    def place(self, other):
        return self.sol.cop_start

    def move(self, cop, robber):
        return self.sol.cop_move(cop, robber)


class SolverRobber(Strategy):
    side = "robber"
    name = "solver"

    def reset(self, arena, rng):
        super().reset(arena, rng)
        require_finite(self, arena)
        self.sol = cached_solution(arena.graph)

    def place(self, cop):
        return self.sol.robber_reply(cop)

    def move(self, cop, robber):
        return self.sol.robber_move(cop, robber)


class KEscapeRobber(Strategy):
    """Inside one copy of K: wait at w, dodge to t' or t, then stay, go back to w or leave through x.

    ``block`` is the label suffix of the copy (empty for K itself).
    """

    side = "robber"
    name = "k-escape"

    def reset(self, arena, rng):
        super().reset(arena, rng)
        require_finite(self, arena)
        sfx = str(self.params.get("block", ""))
        g = arena.graph
        try:
            self.v = {n: g.vid(n + sfx) for n in ("x", "z", "z'", "t", "t'", "w")}
            self.v["y"] = g.vid("y" + sfx) if ("y" + sfx) in g.index else g.vid(f"x{int(sfx) + 1}")
        except (KeyError, ValueError) as exc:
            raise StrategyError(f"no copy of K with suffix {sfx!r} in this arena") from exc
        self.reached_x = False

    def _safe(self, cop, v) -> bool:
        return v != cop and not self.arena.adjacent(v, cop)

    def place(self, cop):
        for name in ("w", "t'", "t", "x"):
            if self._safe(cop, self.v[name]):
                return self.v[name]
        return self.v["w"]

    def move(self, cop, robber):
        v = self.v
        if robber == v["x"]:
            self.reached_x = True
        if robber == v["w"]:
            if cop in (v["t"], v["z"]):
                return v["t'"]
            if cop in (v["t'"], v["z'"]):
                return v["t"]
            return robber
        if self._safe(cop, robber):
            return robber
        for name in ("w", "x"):
            if self.arena.legal(robber, v[name]) and self._safe(cop, v[name]):
                if name == "x":
                    self.reached_x = True
                return v[name]
        options = safe_moves(self.arena, cop, robber)
        return options[0] if options else robber

    def memory(self):
        return {"reached_x": True} if self.reached_x else None
