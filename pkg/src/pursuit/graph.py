"""Finite graphs, lazy neighbour oracles and the basic queries shared by every module."""

from __future__ import annotations

import heapq
import json
import random
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Any, Callable, Hashable, Iterable, Iterator, Sequence

GRAPH_FORMAT = "pursuit-graph-v1"


class GraphError(ValueError):
    pass


class UnknownVertex(GraphError, KeyError):
    pass


class BudgetExceeded(RuntimeError):
    """A search or exploration would exceed its configured vertex/state budget."""


@dataclass(frozen=True)
class FiniteGraph:
    """Immutable simple undirected graph on ids ``0..n-1``.

    ``adj[v]`` is the sorted tuple of neighbours of ``v``. ``boundary`` marks
    vertices of a truncation that have neighbours outside it in the infinite
    graph it was cut from.
    """

    labels: tuple[str, ...]
    adj: tuple[tuple[int, ...], ...]
    name: str = ""
    boundary: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        n = len(self.labels)
        if len(self.adj) != n:
            raise GraphError("adjacency and label lists differ in length")
        if len(set(self.labels)) != n:
            raise GraphError("labels must be unique")
        for v, nbrs in enumerate(self.adj):
            if list(nbrs) != sorted(set(nbrs)):
                raise GraphError(f"neighbours of {v} are not a sorted set")
            for u in nbrs:
                if u == v:
                    raise GraphError(f"loop at {self.labels[v]}")
                if not 0 <= u < n:
                    raise GraphError(f"neighbour id {u} out of range")
                if v not in self._adjsets[u]:
                    raise GraphError(f"edge {v}-{u} is not symmetric")
        for b in self.boundary:
            if not 0 <= b < n:
                raise GraphError("boundary id out of range")

    # construction ---------------------------------------------------------

    @classmethod
    def from_edges(
        cls,
        labels: Sequence[Any],
        edges: Iterable[tuple[int, int]],
        name: str = "",
        boundary: Iterable[int] = (),
    ) -> FiniteGraph:
        n = len(labels)
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if u == v:
                raise GraphError(f"loop at {labels[u]}")
            nbrs[u].add(v)
            nbrs[v].add(u)
        return cls(
            tuple(str(x) for x in labels),
            tuple(tuple(sorted(s)) for s in nbrs),
            name,
            frozenset(boundary),
        )

    @classmethod
    def from_labeled_edges(
        cls, labels: Sequence[str], edges: Iterable[tuple[str, str]], name: str = ""
    ) -> FiniteGraph:
        index = {lab: i for i, lab in enumerate(labels)}
        return cls.from_edges(labels, [(index[a], index[b]) for a, b in edges], name)

    # basic structure ------------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.labels)

    @cached_property
    def _adjsets(self) -> tuple[frozenset[int], ...]:
        return tuple(frozenset(a) for a in self.adj)

    @cached_property
    def masks(self) -> tuple[int, ...]:
        """Closed neighbourhoods as integer bitmasks."""
        out = []
        for v, nbrs in enumerate(self.adj):
            m = 1 << v
            for u in nbrs:
                m |= 1 << u
            out.append(m)
        return tuple(out)

    @cached_property
    def index(self) -> dict[str, int]:
        return {lab: i for i, lab in enumerate(self.labels)}

    def edges(self) -> Iterator[tuple[int, int]]:
        for v, nbrs in enumerate(self.adj):
            for u in nbrs:
                if v < u:
                    yield (v, u)

    @property
    def m(self) -> int:
        return sum(len(a) for a in self.adj) // 2

    def vid(self, v: int | str) -> int:
        """Resolve a vertex id or label to an id."""
        if isinstance(v, str):
            try:
                return self.index[v]
            except KeyError:
                raise UnknownVertex(v) from None
        if isinstance(v, int) and 0 <= v < self.n:
            return v
        raise UnknownVertex(v)

    def closed_neighborhood(self, v: int | str) -> frozenset[int]:
        v = self.vid(v)
        return self._adjsets[v] | {v}

    def dominates(self, u: int | str, v: int | str) -> bool:
        """True iff ``N[v]`` is contained in ``N[u]``; ``u == v`` is rejected."""
        u, v = self.vid(u), self.vid(v)
        if u == v:
            raise GraphError("a vertex is not compared with itself for domination")
        return self.masks[v] & ~self.masks[u] == 0

    def is_connected(self) -> bool:
        if self.n == 0:
            return False
        seen = {0}
        stack = [0]
        while stack:
            v = stack.pop()
            for u in self.adj[v]:
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        return len(seen) == self.n

    def induced(self, vertices: Iterable[int | str]) -> tuple[FiniteGraph, tuple[int, ...]]:
        """Induced subgraph on ``vertices``; returns the graph and new-id -> old-id."""
        keep = sorted({self.vid(v) for v in vertices})
        new_id = {old: i for i, old in enumerate(keep)}
        adj = tuple(
            tuple(new_id[u] for u in self.adj[old] if u in new_id) for old in keep
        )
        boundary = frozenset(new_id[b] for b in self.boundary if b in new_id)
        sub = FiniteGraph(tuple(self.labels[i] for i in keep), adj, self.name, boundary)
        return sub, tuple(keep)

    def without(self, v: int | str) -> tuple[FiniteGraph, tuple[int, ...]]:
        v = self.vid(v)
        return self.induced(u for u in range(self.n) if u != v)

    def relabeled(self, name: str) -> FiniteGraph:
        return FiniteGraph(self.labels, self.adj, name, self.boundary)

    # oracle protocol --------------------------------------------------------

    locally_finite = True

    def key(self, v: int) -> str:
        return self.labels[v]

    def parse(self, key: str) -> int:
        return self.vid(key)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adj[v]

    def adjacent(self, u: int, v: int) -> bool:
        return v in self._adjsets[u]

    def random_vertex(self, rng: random.Random) -> int:
        return rng.randrange(self.n)

    def vertices(self) -> range:
        return range(self.n)

    # serialization -----------------------------------------------------------

    def to_json(self) -> dict[str, Any]:
        return {
            "format": GRAPH_FORMAT,
            "name": self.name,
            "vertices": [{"id": i, "label": lab} for i, lab in enumerate(self.labels)],
            "edges": [[u, v] for u, v in self.edges()],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"))

    @classmethod
    def from_json(cls, data: dict[str, Any]) -> FiniteGraph:
        if data.get("format") != GRAPH_FORMAT:
            raise GraphError(f"expected format {GRAPH_FORMAT!r}")
        verts = data["vertices"]
        if [v["id"] for v in verts] != list(range(len(verts))):
            raise GraphError("vertex ids must be contiguous from 0")
        edges = [tuple(e) for e in data["edges"]]
        for u, v in edges:
            if not u < v:
                raise GraphError("edges must be listed with i < j")
        if edges != sorted(edges):
            raise GraphError("edges must be sorted")
        return cls.from_edges([v["label"] for v in verts], edges, data.get("name", ""))

    @classmethod
    def loads(cls, text: str) -> FiniteGraph:
        return cls.from_json(json.loads(text))

    def to_dot(self) -> str:
        lines = [f"graph {json.dumps(self.name or 'G')} {{"]
        for i, lab in enumerate(self.labels):
            extra = ", style=dashed" if i in self.boundary else ""
            lines.append(f"  {i} [label={json.dumps(lab)}{extra}];")
        for u, v in self.edges():
            lines.append(f"  {u} -- {v};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def load_graph(path: str | Path) -> FiniteGraph:
    return FiniteGraph.loads(Path(path).read_text(encoding="utf-8"))


def save_graph(graph: FiniteGraph, path: str | Path) -> None:
    Path(path).write_text(graph.dumps() + "\n", encoding="utf-8")


class NeighborOracle:
    """Lazy graph given by canonical keys and a neighbour function.

    Subclasses implement ``key``, ``parse`` and either ``neighbors`` (locally
    finite families) or at least ``adjacent``. Families with a consistent parent
    map override ``parent`` and ``trail_hits``.
    """

    name = "oracle"
    locally_finite = True
    has_parents = False

    def key(self, v: Hashable) -> str:
        raise NotImplementedError

    def parse(self, key: str) -> Hashable:
        raise NotImplementedError

    def neighbors(self, v: Hashable) -> tuple:
        raise NotImplementedError(f"{self.name} does not enumerate neighbours")

    def adjacent(self, u: Hashable, v: Hashable) -> bool:
        return u != v and v in self.neighbors(u)

    def parent(self, v: Hashable) -> Hashable | None:
        return None

    def potential(self, v: Hashable) -> int:
        """Family coordinate used for drift metrics and trail termination."""
        return 0

    def trail_hits(self, v: Hashable, targets: Iterable[Hashable]) -> int | None:
        """Earliest ``k`` with ``parent^k(v)`` in ``targets``, or None.

        The default walk stops at a root or once the potential passes the largest
        potential in ``targets`` (parents never decrease the potential).
        """
        targets = set(targets)
        if not targets:
            return None
        ceiling = max(self.potential(t) for t in targets)
        cur: Hashable | None = v
        k = 0
        while cur is not None and self.potential(cur) <= ceiling:
            if cur in targets:
                return k
            cur = self.parent(cur)
            k += 1
        return None

    def random_vertex(self, rng: random.Random) -> Hashable:
        raise NotImplementedError

    def random_closed_neighbor(self, v: Hashable, rng: random.Random) -> Hashable:
        options = (v,) + tuple(self.neighbors(v))
        return options[rng.randrange(len(options))]

    def distance_hint(self, u: Hashable, v: Hashable) -> float:
        """Cheap estimate used by chasers once exact BFS exceeds its budget."""
        return 0.0 if u == v else 1.0

    def closed_moves(self, v: Hashable, context: Sequence[Hashable] = ()) -> tuple:
        """A finite menu of legal moves from ``v`` (including staying).

        For locally finite oracles this is the whole closed neighbourhood.
        Families with infinite degree return a bounded menu shaped by ``context``.
        """
        return (v,) + tuple(self.neighbors(v))


class CertifiedGraph(NeighborOracle):
    """A finite graph seen as an oracle whose parent map comes from a certificate."""

    def __init__(self, graph: FiniteGraph, parents: dict[int, int], order: Sequence[int]):
        self.graph = graph
        self.name = graph.name
        self._parents = dict(parents)
        self._rank = {v: i for i, v in enumerate(order)}
        self.has_parents = True

    def key(self, v: int) -> str:
        return self.graph.labels[v]

    def parse(self, key: str) -> int:
        return self.graph.vid(key)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.graph.adj[v]

    def adjacent(self, u: int, v: int) -> bool:
        return self.graph.adjacent(u, v)

    def parent(self, v: int) -> int | None:
        return self._parents.get(v)

    def potential(self, v: int) -> int:
        # trails walk towards the root, i.e. towards smaller construction rank
        return -self._rank[v]

    def trail_hits(self, v: int, targets: Iterable[int]) -> int | None:
        targets = set(targets)
        cur: int | None = v
        k = 0
        while cur is not None:
            if cur in targets:
                return k
            cur = self._parents.get(cur)
            k += 1
        return None

    def random_vertex(self, rng: random.Random) -> int:
        return rng.randrange(self.graph.n)


def _bfs(
    graph: FiniteGraph | NeighborOracle,
    sources: Iterable[Hashable],
    cap: int,
    budget: int | None,
    stop: set | None = None,
) -> tuple[dict, bool]:
    """Breadth-first distances up to ``cap`` (exclusive). Returns (dist, complete)."""
    dist: dict = {}
    frontier = deque()
    for s in sources:
        if s not in dist:
            dist[s] = 0
            frontier.append(s)
    while frontier:
        v = frontier.popleft()
        d = dist[v]
        if stop is not None and v in stop:
            return dist, True
        if d + 1 >= cap:
            continue
        for u in graph.neighbors(v):
            if u not in dist:
                dist[u] = d + 1
                if budget is not None and len(dist) > budget:
                    return dist, False
                frontier.append(u)
    return dist, True


def distance(
    graph: FiniteGraph | NeighborOracle,
    u: Hashable,
    target: Hashable | set | frozenset | list | Callable[[Hashable], bool],
    cap: int,
    budget: int | None = 2_000_000,
    lower_bound: Callable[[Hashable], int] | None = None,
) -> int | None:
    """Exact BFS distance from ``u`` to a target, or None when it is ``>= cap``.

    The target is a vertex, a set/frozenset/list of vertices, or a predicate
    (for infinite targets such as a spine). ``budget`` bounds the number of
    vertices explored; exceeding it raises :class:`BudgetExceeded` rather than
    returning a wrong answer.

    ``lower_bound`` may give a consistent estimate of the distance to the
    target (1-Lipschitz along edges, never above the true distance). The search
    then runs best-first and skips vertices that cannot reach the target
    within ``cap``; the answer stays exact.
    """
    if cap < 0:
        raise GraphError("cap must be non-negative")
    if callable(target):
        hit = target
    else:
        targets = set(target) if isinstance(target, (set, frozenset, list)) else {target}
        if isinstance(graph, FiniteGraph):
            targets = {graph.vid(t) for t in targets}
        hit = targets.__contains__
    if isinstance(graph, FiniteGraph):
        u = graph.vid(u)
    if cap == 0:
        return None
    if lower_bound is not None:
        return _astar(graph, u, hit, cap, budget, lower_bound)
    dist: dict = {u: 0}
    frontier = deque([u])
    while frontier:
        v = frontier.popleft()
        d = dist[v]
        if hit(v):
            return d
        if d + 1 >= cap:
            continue
        for w in graph.neighbors(v):
            if w not in dist:
                dist[w] = d + 1
                if budget is not None and len(dist) > budget:
                    raise BudgetExceeded(f"BFS explored more than {budget} vertices")
                frontier.append(w)
    return None


def _astar(graph, u, hit, cap: int, budget: int | None, h: Callable[[Hashable], int]) -> int | None:
    # ties prefer the deeper vertex so near-exact bounds walk straight in
    if h(u) >= cap:
        return None
    best = {u: 0}
    heap = [(h(u), 0, 0, u)]
    tick = 0
    while heap:
        f, neg_g, _, v = heapq.heappop(heap)
        g = -neg_g
        if g > best.get(v, g):
            continue
        if hit(v):
            return g
        for w in graph.neighbors(v):
            g2 = g + 1
            if g2 >= best.get(w, cap):
                continue
            f2 = g2 + h(w)
            if f2 >= cap:
                continue
            best[w] = g2
            if budget is not None and len(best) > budget:
                raise BudgetExceeded(f"search explored more than {budget} vertices")
            tick += 1
            heapq.heappush(heap, (f2, -g2, tick, w))
    return None


def bfs_distances(graph: FiniteGraph, source: int) -> list[int]:
    """All distances from ``source`` in a finite graph (-1 for unreachable)."""
    dist = [-1] * graph.n
    dist[source] = 0
    frontier = deque([source])
    while frontier:
        v = frontier.popleft()
        for u in graph.adj[v]:
            if dist[u] < 0:
                dist[u] = dist[v] + 1
                frontier.append(u)
    return dist


@dataclass(frozen=True)
class Truncation:
    """A finite induced piece of an oracle graph with its key table."""

    graph: FiniteGraph
    vertices: tuple  # id -> oracle vertex

    @cached_property
    def ids(self) -> dict:
        return {v: i for i, v in enumerate(self.vertices)}

    def key_table(self) -> dict[int, str]:
        return {i: lab for i, lab in enumerate(self.graph.labels)}


def materialize(
    oracle: NeighborOracle,
    seeds: Iterable[Hashable],
    radius: int,
    budget: int = 200_000,
) -> Truncation:
    """Induced finite graph on the closed ball of ``radius`` around ``seeds``."""
    if not oracle.locally_finite:
        raise GraphError(
            f"{oracle.name} is not locally finite; use materialize_set with an explicit vertex set"
        )
    dist, complete = _bfs(oracle, seeds, radius + 1, budget)
    if not complete:
        raise BudgetExceeded(f"ball of radius {radius} exceeds {budget} vertices")
    return materialize_set(oracle, dist.keys())


def materialize_set(oracle: NeighborOracle, vertices: Iterable[Hashable]) -> Truncation:
    """Induced finite graph on an explicit vertex set.

    Keys sort the vertices so ids are reproducible. Boundary vertices are those
    with an oracle neighbour outside the set (always true for infinite degree).
    """
    verts = sorted(set(vertices), key=oracle.key)
    ids = {v: i for i, v in enumerate(verts)}
    edges = []
    boundary = []
    for v in verts:
        i = ids[v]
        if oracle.locally_finite:
            outside = False
            for u in oracle.neighbors(v):
                j = ids.get(u)
                if j is None:
                    outside = True
                elif i < j:
                    edges.append((i, j))
            if outside:
                boundary.append(i)
        else:
            for u in verts:
                j = ids[u]
                if i < j and oracle.adjacent(v, u):
                    edges.append((i, j))
            if oracle_has_outside(oracle, v, ids):
                boundary.append(i)
    graph = FiniteGraph.from_edges([oracle.key(v) for v in verts], edges, oracle.name, boundary)
    return Truncation(graph, tuple(verts))


def oracle_has_outside(oracle: NeighborOracle, v: Hashable, inside: dict) -> bool:
    check = getattr(oracle, "has_neighbor_outside", None)
    if check is None:
        return True
    return check(v, inside)
