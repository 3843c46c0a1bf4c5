"""Small graph constructions: paths, cycles, the path-capped product, cycle attachment, hives, union graphs."""

from __future__ import annotations

from typing import Sequence

from ..graph import FiniteGraph, GraphError


def path(n: int) -> FiniteGraph:
    """Path on ``n`` vertices labelled 0..n-1."""
    if n < 1:
        raise GraphError("path needs at least one vertex")
    return FiniteGraph.from_edges([str(i) for i in range(n)], [(i, i + 1) for i in range(n - 1)], f"path-{n}")


def cycle(n: int) -> FiniteGraph:
    if n < 3:
        raise GraphError("cycle needs at least three vertices")
    return FiniteGraph.from_edges([str(i) for i in range(n)], [(i, (i + 1) % n) for i in range(n)], f"cycle-{n}")


def _sim(g: FiniteGraph, a: int, b: int) -> bool:
    return a == b or g.adjacent(a, b)


def ppath(g: FiniteGraph, n: int) -> FiniteGraph:
    """Vertices (x, j), j in 0..n; joined if x~x' and |j-j'|<=1, or j=j'=n.

    Here ~ means adjacent or equal, so (x, j)-(x, j+1) are edges and the top
    layer j=n is a clique. Vertex (x, j) gets id x*(n+1)+j.
    """
    if n < 1:
        raise GraphError("ppath height must be at least 1")
    h = n + 1
    labels = [f"({lab},{j})" for lab in g.labels for j in range(h)]
    edges = []
    for x in range(g.n):
        for x2 in (x,) + g.adj[x]:
            for j in range(h):
                for j2 in range(h):
                    a, b = x * h + j, x2 * h + j2
                    if a >= b:
                        continue
                    if abs(j - j2) <= 1 or j == j2 == n:
                        edges.append((a, b))
        for x2 in range(x + 1, g.n):
            if not g.adjacent(x, x2):
                edges.append((x * h + n, x2 * h + n))
    return FiniteGraph.from_edges(labels, edges, f"ppath({g.name},{n})")


def c4dot(g: FiniteGraph) -> FiniteGraph:
    """Attach a 4-cycle at every vertex: (x,y)~(x,y') on the cycle, (x,0)~(x',0) for x~x'."""
    labels = [f"({lab},{y})" for lab in g.labels for y in range(4)]
    edges = []
    for x in range(g.n):
        for y in range(4):
            edges.append((4 * x + y, 4 * x + (y + 1) % 4))
        for x2 in g.adj[x]:
            if x < x2:
                edges.append((4 * x, 4 * x2))
    return FiniteGraph.from_edges(labels, edges, f"c4dot({g.name})")


def hive(g: FiniteGraph, height: int) -> tuple[FiniteGraph, int, dict[int, tuple[int, int] | None]]:
    """Hive graph: G x {0..height} plus an apex joined to the whole top layer.

    Returns the graph, the apex id and a map id -> (base id, level), with None
    for the apex. (x, i) gets id x*(height+1)+i; the apex is last.
    """
    if height < 1:
        raise GraphError("hive height must be at least 1")
    h = height + 1
    apex_label = "hive"
    while apex_label in g.index:
        apex_label += "'"
    labels = [f"({lab},{i})" for lab in g.labels for i in range(h)] + [apex_label]
    apex = g.n * h
    edges = []
    for x in range(g.n):
        for x2 in (x,) + g.adj[x]:
            for i in range(h):
                for i2 in (i - 1, i, i + 1):
                    if 0 <= i2 < h:
                        a, b = x * h + i, x2 * h + i2
                        if a < b:
                            edges.append((a, b))
        edges.append((x * h + height, apex))
    levels: dict[int, tuple[int, int] | None] = {x * h + i: (x, i) for x in range(g.n) for i in range(h)}
    levels[apex] = None
    return FiniteGraph.from_edges(labels, edges, f"hive({g.name},{height})"), apex, levels


def union_graph(graphs: Sequence[FiniteGraph], embeddings: Sequence[Sequence[int]]) -> FiniteGraph:
    """Layered union of nested graphs G_0 < G_1 < ... .

    ``embeddings[k][x]`` is the id in G_{k+1} of vertex x of G_k. Vertex (k, x)
    is labelled ``k:label`` and (k,x)~(k',x') iff |k-k'|<=1 and the two are
    adjacent or equal after embedding into the larger graph.
    """
    if len(embeddings) != len(graphs) - 1:
        raise GraphError("need one embedding per consecutive pair")
    offsets = []
    total = 0
    for g in graphs:
        offsets.append(total)
        total += g.n
    labels = [f"{k}:{lab}" for k, g in enumerate(graphs) for lab in g.labels]
    edges = []
    for k, g in enumerate(graphs):
        edges.extend((offsets[k] + u, offsets[k] + v) for u, v in g.edges())
        if k + 1 < len(graphs):
            up = graphs[k + 1]
            emb = embeddings[k]
            for x in range(g.n):
                ex = emb[x]
                for y in (ex,) + up.adj[ex]:
                    edges.append((offsets[k] + x, offsets[k + 1] + y))
    return FiniteGraph.from_edges(labels, edges, "union")
