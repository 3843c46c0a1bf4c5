"""Exact one-cop game on finite graphs by value iteration.

Values count cop moves until capture. ``vc[c, r]`` is the value with the cop
to move, ``vr[c, r]`` with the robber to move; both players may stay put, and
capture happens as soon as the two positions coincide. Closed neighbourhoods
are stored as index arrays padded with the vertex itself (which every closed
neighbourhood contains), so min/max over the padded row is unchanged and the
first arg-optimum is still the lowest id.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Iterable, Sequence

import numpy as np

from .graph import BudgetExceeded, FiniteGraph, GraphError

INF = 1 << 30
STATE_BUDGET = 10_000_000


def _closed_index(adj_rows: Sequence[Sequence[int]], n: int, allowed: np.ndarray | None = None) -> np.ndarray:
    """(n, D) array of sorted closed neighbourhoods, padded with the vertex itself."""
    rows = []
    for v in range(n):
        row = sorted(set(adj_rows[v]) | {v})
        if allowed is not None:
            row = [u for u in row if allowed[u]] or [v]
        rows.append(row)
    width = max(len(r) for r in rows)
    out = np.empty((n, width), dtype=np.int64)
    for v, row in enumerate(rows):
        out[v, : len(row)] = row
        out[v, len(row):] = v
    return out


def _iterate(rob_nbr: np.ndarray, cop_nbr: np.ndarray, allowed: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Batched value iteration. ``rob_nbr``/``cop_nbr`` are (B, n, D); ``allowed`` is (B, n)."""
    b, n, _ = rob_nbr.shape
    eye = np.eye(n, dtype=bool)[None]
    vc = np.full((b, n, n), INF, dtype=np.int32)
    bi = np.arange(b)[:, None, None, None]
    ci = np.arange(n)[None, :, None, None]
    ri = np.arange(n)[None, None, None, :]
    rob_idx = rob_nbr[:, None, :, :]  # [b, ., r, j]
    cop_idx = cop_nbr[:, :, :, None]  # [b, c, j, .]
    forbidden_rows = ~allowed[:, :, None]
    while True:
        x = np.where(eye, 0, vc)
        vr = x[bi, ci, rob_idx].max(axis=3)  # robber picks the worst reply for the cop
        y = np.where(eye, 1, np.minimum(vr + 1, INF))
        new = y[bi, cop_idx, ri].min(axis=2)
        new = np.where(forbidden_rows, INF, new)
        new = np.where(eye, 0, new)
        if np.array_equal(new, vc):
            return vc, vr
        vc = new


@dataclass(frozen=True)
class GameSolution:
    graph: FiniteGraph
    forbidden: frozenset[int]
    vc: np.ndarray  # cop to move
    vr: np.ndarray  # robber to move
    cop_nbr: np.ndarray
    rob_nbr: np.ndarray

    @property
    def allowed(self) -> list[int]:
        return [v for v in range(self.graph.n) if v not in self.forbidden]

    def placement_value(self, c: int) -> int:
        """Value of the cop starting at c against the best robber reply."""
        n = self.graph.n
        if n == 1:
            return 0
        row = self.vc[c].copy()
        row[c] = -1
        return int(row.max())

    @property
    def cop_start(self) -> int:
        vals = [(self.placement_value(c), c) for c in self.allowed]
        return min(vals)[1]

    def robber_reply(self, c: int) -> int:
        """Best robber start once the cop sits at c (lowest id on ties)."""
        n = self.graph.n
        if n == 1:
            return 0
        row = self.vc[c].copy()
        row[c] = -1
        return int(np.argmax(row))

    @property
    def robber_start(self) -> int:
        return self.robber_reply(self.cop_start)

    @property
    def copwin(self) -> bool:
        return self.placement_value(self.cop_start) < INF

    @property
    def capture_time(self) -> int | None:
        v = self.placement_value(self.cop_start)
        return v if v < INF else None

    def value(self, c: int, r: int, mover: str) -> int | None:
        v = int((self.vc if mover == "cop" else self.vr)[c, r])
        return None if v >= INF else v

    def cop_move(self, c: int, r: int) -> int:
        if c in self.forbidden:
            raise GraphError(f"cop at forbidden vertex {self.graph.labels[c]}")
        row = self.cop_nbr[c]
        if r in row:
            return r
        vals = self.vr[row, r]
        return int(row[int(np.argmin(vals))])

    def robber_move(self, c: int, r: int) -> int:
        row = self.rob_nbr[r]
        vals = np.where(row == c, -1, self.vc[c, row])
        return int(row[int(np.argmax(vals))])

    def to_json(self, policies: bool = False) -> dict[str, Any]:
        lab = self.graph.labels
        out: dict[str, Any] = {
            "graph": self.graph.name,
            "copwin": self.copwin,
            "capture_time": self.capture_time,
            "capture_time_counts": "cop moves",
            "cop_start": lab[self.cop_start],
            "robber_start": lab[self.robber_start],
            "forbidden_cop": sorted(lab[v] for v in self.forbidden),
        }
        if policies:
            n = self.graph.n
            cop, rob = [], []
            for c in self.allowed:
                for r in range(n):
                    if r != c:
                        cop.append([lab[c], lab[r], lab[self.cop_move(c, r)]])
                        rob.append([lab[c], lab[r], lab[self.robber_move(c, r)]])
            out["cop_policy"] = cop
            out["robber_policy"] = rob
        return out


def solve(g: FiniteGraph, forbidden_cop: Iterable[int | str] = ()) -> GameSolution:
    """Solve the game on ``g`` with the cop barred from ``forbidden_cop``."""
    if g.n == 0:
        raise GraphError("empty graph")
    if not g.is_connected():
        raise GraphError("the solver needs a connected graph")
    forb = frozenset(g.vid(v) for v in forbidden_cop)
    if len(forb) >= g.n:
        raise GraphError("the forbidden set covers every vertex")
    states = (g.n - len(forb)) * g.n * 2
    if states > STATE_BUDGET:
        raise BudgetExceeded(f"{states} states exceed the budget of {STATE_BUDGET}")
    allowed = np.array([v not in forb for v in range(g.n)])
    rob_nbr = _closed_index(g.adj, g.n)
    cop_nbr = _closed_index(g.adj, g.n, allowed)
    vc, vr = _iterate(rob_nbr[None], cop_nbr[None], allowed[None])
    return GameSolution(g, forb, vc[0], vr[0], cop_nbr, rob_nbr)


def copwin_batch(graphs: Sequence[FiniteGraph]) -> list[bool]:
    """Cop-win verdicts for many graphs with the same vertex count, in one vectorized sweep."""
    if not graphs:
        return []
    n = graphs[0].n
    if any(g.n != n for g in graphs):
        raise GraphError("copwin_batch needs graphs of equal order")
    if n == 1:
        return [True] * len(graphs)
    rows = [_closed_index(g.adj, n) for g in graphs]
    width = max(r.shape[1] for r in rows)
    nbr = np.empty((len(graphs), n, width), dtype=np.int64)
    for i, r in enumerate(rows):
        nbr[i, :, : r.shape[1]] = r
        nbr[i, :, r.shape[1]:] = np.arange(n)[:, None]
    allowed = np.ones((len(graphs), n), dtype=bool)
    vc, _ = _iterate(nbr, nbr, allowed)
    eye = np.eye(n, dtype=bool)[None]
    best_reply = np.where(eye, -1, vc).max(axis=2)
    return [bool(x) for x in best_reply.min(axis=1) < INF]
