"""Cops that walk the robber's trail under a parent map."""

from __future__ import annotations

import json
from pathlib import Path

from ..constructibility import Certificate, dismantle, validate
from ..graph import CertifiedGraph
from .base import InvariantViolation, Strategy, StrategyError, require_finite


def _certificate(strategy: Strategy, graph) -> Certificate:
    path = strategy.params.get("cert")
    if path is None:
        res = dismantle(graph)
        if not res.constructible:
            raise StrategyError(f"{graph.name} is not constructible")
        return res.certificate
    cert = Certificate.from_json(graph, json.loads(Path(str(path)).read_text(encoding="utf-8")))
    diag = validate(graph, cert)
    if diag is not None:
        raise StrategyError(f"certificate rejected: {diag}")
    return cert


class TrailCop(Strategy):
    """Start at the root; each turn move to the latest-constructed vertex of the robber's trail within reach.

    ``log`` keeps (robber vertex, trail index reached) per cop turn; with
    ``strict`` (default) a revisit that does not lower the index raises.
    """

    name = "trail"

    def reset(self, arena, rng):
        super().reset(arena, rng)
        require_finite(self, arena)
        self.cert = _certificate(self, arena.graph)
        self.masks = arena.graph.masks
        self.log: list[tuple[int, int]] = []
        self.best: dict[int, int] = {}
        self.strict = self.params.get("strict", True)

    def trail(self, v: int) -> list[int]:
        out = [v]
        par = self.cert.parents
        while out[-1] in par:
            out.append(par[out[-1]])
        return out

    def place(self, other):
        return self.cert.root

    def move(self, cop, robber):
        reach = self.masks[cop]
        for k, u in enumerate(self.trail(robber)):
            if reach >> u & 1:
                break
        else:
            raise InvariantViolation(f"trail cop stuck: no trail vertex of {robber} next to {cop}")
        prev = self.best.get(robber)
        if self.strict and prev is not None and k >= prev:
            raise InvariantViolation(f"trail index did not drop on revisit of {robber}: {prev} -> {k}")
        self.best[robber] = k
        self.log.append((robber, k))
        return u


class ConsistentCop(Strategy):
    """Case 1: jump to the earliest trail vertex of the robber within reach. Case 2: step to own parent.

    Works on any oracle with parents and a trail query, and on finite arenas
    through a construction certificate. Once Case 1 holds it must keep holding.
    """

    name = "consistent"

    def reset(self, arena, rng):
        super().reset(arena, rng)
        if arena.finite:
            cert = _certificate(self, arena.graph)
            self.oracle = CertifiedGraph(arena.graph, cert.parents, cert.order)
            self.default_start = cert.root
        else:
            self.oracle = arena.graph
            if not getattr(self.oracle, "has_parents", False):
                raise StrategyError(f"{self.oracle.name} has no consistent parent map")
            self.default_start = None
        self.case = 2
        self.cases: list[int] = []

    def place(self, other):
        if "start" in self.params:
            return self.arena.parse(str(self.params["start"]))
        if self.default_start is not None:
            return self.default_start
        return self.oracle.parse("x1")

    def move(self, cop, robber):
        reach = self.arena.closed_moves(cop, (robber,))
        k = self.oracle.trail_hits(robber, reach)
        if k is None:
            if self.case == 1:
                raise InvariantViolation("left Case 1")
            self.cases.append(2)
            p = self.oracle.parent(cop)
            return cop if p is None else p
        self.case = 1
        self.cases.append(1)
        u = robber
        for _ in range(k):
            u = self.oracle.parent(u)
        return u

    def memory(self):
        return {"case": self.case}
