"""Exhaustive comparison of dismantlability and the solver's verdict on small graphs."""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from typing import Iterator

from .constructibility import is_constructible
from .graph import FiniteGraph
from .solver import copwin_batch


def _connected(n: int, adj: list[int]) -> bool:
    seen = 1
    frontier = 1
    while frontier:
        grow = 0
        for v in range(n):
            if frontier >> v & 1:
                grow |= adj[v]
        frontier = grow & ~seen
        seen |= grow
    return seen == (1 << n) - 1


def connected_graphs(n: int) -> Iterator[FiniteGraph]:
    """Every connected labelled graph on vertices 0..n-1, one per adjacency matrix."""
    pairs = list(itertools.combinations(range(n), 2))
    labels = [str(i) for i in range(n)]
    for code in range(1 << len(pairs)):
        adj = [0] * n
        edges = []
        for b, (i, j) in enumerate(pairs):
            if code >> b & 1:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
                edges.append((i, j))
        if n == 1 or _connected(n, adj):
            yield FiniteGraph.from_edges(labels, edges, f"n{n}-e{code}")


@dataclass
class SweepReport:
    counts: dict[int, int] = field(default_factory=dict)
    copwin: dict[int, int] = field(default_factory=dict)
    exceptions: list[FiniteGraph] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def total(self) -> int:
        return sum(self.counts.values())


def equivalence_sweep(max_n: int = 6, batch: int = 4096) -> SweepReport:
    """Dismantle every connected graph on <= max_n vertices and solve it; collect disagreements."""
    start = time.perf_counter()
    report = SweepReport()
    for n in range(1, max_n + 1):
        graphs = list(connected_graphs(n))
        report.counts[n] = len(graphs)
        wins = 0
        for lo in range(0, len(graphs), batch):
            chunk = graphs[lo: lo + batch]
            verdicts = copwin_batch(chunk)
            for g, solved in zip(chunk, verdicts):
                wins += bool(solved)
                if bool(solved) != is_constructible(g):
                    report.exceptions.append(g)
        report.copwin[n] = wins
    report.seconds = time.perf_counter() - start
    return report
