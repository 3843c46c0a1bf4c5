"""Dismantling, construction certificates and searches over construction orders.

Closed neighbourhoods are int bitmasks throughout: ``N[v] <= N[u]`` inside a
vertex set S is ``masks[v] & ~masks[u] & S == 0``.
"""

from __future__ import annotations

import random
import sys
import time
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

from .graph import FiniteGraph, GraphError

MAX_SUBSET_VERTICES = 20


class CertificateError(GraphError):
    pass


@dataclass(frozen=True)
class Certificate:
    """Construction order (root first) with a parent for every non-root vertex."""

    order: tuple[int, ...]
    parents: dict[int, int] = field(hash=False)

    @property
    def root(self) -> int:
        return self.order[0]

    def to_json(self, graph: FiniteGraph) -> dict[str, Any]:
        lab = graph.labels
        return {
            "order": [lab[v] for v in self.order],
            "parents": {lab[v]: lab[self.parents[v]] for v in self.order[1:] if v in self.parents},
        }

    @classmethod
    def from_json(cls, graph: FiniteGraph, data: dict[str, Any]) -> Certificate:
        try:
            order = tuple(graph.vid(x) for x in data["order"])
            parents = {graph.vid(k): graph.vid(v) for k, v in data["parents"].items()}
        except (KeyError, TypeError, AttributeError) as exc:
            raise CertificateError(f"malformed certificate: {exc}") from exc
        return cls(order, parents)


@dataclass(frozen=True)
class Dismantling:
    """Outcome of :func:`dismantle`."""

    constructible: bool
    elimination: tuple[tuple[int, int], ...]  # (removed vertex, its dominator), in removal order
    certificate: Certificate | None
    witness: FiniteGraph | None  # the stuck induced subgraph when not constructible
    witness_ids: tuple[int, ...] = ()


@dataclass(frozen=True)
class Diagnostic:
    position: int
    reason: str

    def __str__(self) -> str:
        return f"position {self.position}: {self.reason}"


def _full(n: int) -> int:
    return (1 << n) - 1


def _bits(mask: int) -> Iterable[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _dominators_in(masks: Sequence[int], v: int, alive: int) -> list[int]:
    need = masks[v] & alive
    return [u for u in _bits(need & ~(1 << v)) if need & ~masks[u] == 0]


def dominators(g: FiniteGraph, v: int | str) -> frozenset[int]:
    """All u != v with N[v] contained in N[u]."""
    v = g.vid(v)
    return frozenset(_dominators_in(g.masks, v, _full(g.n)))


def _greedy(masks: Sequence[int], alive: int, rng: random.Random | None = None) -> tuple[list[tuple[int, int]], int]:
    """Remove dominated vertices until one is left or none is dominated."""
    steps = []
    while alive & (alive - 1):
        found = None
        candidates = list(_bits(alive))
        if rng is not None:
            rng.shuffle(candidates)
        for v in candidates:
            doms = _dominators_in(masks, v, alive)
            if doms:
                found = (v, doms[0] if rng is None else rng.choice(doms))
                break
        if found is None:
            break
        steps.append(found)
        alive &= ~(1 << found[0])
    return steps, alive


def _result(g: FiniteGraph, steps: list[tuple[int, int]], alive: int) -> Dismantling:
    if alive & (alive - 1) == 0:
        root = alive.bit_length() - 1
        order = (root,) + tuple(v for v, _ in reversed(steps))
        cert = Certificate(order, {v: p for v, p in steps})
        return Dismantling(True, tuple(steps), cert, None)
    left = tuple(_bits(alive))
    witness, _ = g.induced(left)
    return Dismantling(False, tuple(steps), None, witness, left)


def dismantle(g: FiniteGraph) -> Dismantling:
    """Greedy dismantling: always remove the lowest-id dominated vertex, parent = lowest-id dominator."""
    if g.n == 0:
        raise GraphError("empty graph")
    if not g.is_connected():
        raise GraphError("dismantle needs a connected graph")
    steps, alive = _greedy(g.masks, _full(g.n))
    return _result(g, steps, alive)


def dismantle_random(g: FiniteGraph, seed: int) -> Dismantling:
    """Dismantling with a seeded random choice of vertex and dominator at each step."""
    if not g.is_connected():
        raise GraphError("dismantle needs a connected graph")
    steps, alive = _greedy(g.masks, _full(g.n), random.Random(seed))
    return _result(g, steps, alive)


def is_constructible(g: FiniteGraph) -> bool:
    """Dismantlable to a single vertex (False for disconnected graphs with 2+ vertices)."""
    if g.n == 0:
        return False
    return _greedy(g.masks, _full(g.n))[1].bit_count() == 1


def _constructible_mask(masks: Sequence[int], alive: int) -> bool:
    return alive != 0 and _greedy(masks, alive)[1].bit_count() == 1


def can_be_last(g: FiniteGraph, v: int | str) -> bool:
    """Whether some construction order of g ends with v."""
    v = g.vid(v)
    if g.n == 1:
        return True
    if not _dominators_in(g.masks, v, _full(g.n)):
        return False
    return _constructible_mask(g.masks, _full(g.n) & ~(1 << v))


def validate(g: FiniteGraph, cert: Certificate) -> Diagnostic | None:
    """None when the certificate is valid, else the first failing position."""
    order = cert.order
    if sorted(order) != list(range(g.n)):
        bad = next((i for i, v in enumerate(order) if not 0 <= v < g.n or order.index(v) != i), len(order))
        return Diagnostic(bad, "order is not a permutation of the vertices")
    if order[0] in cert.parents:
        return Diagnostic(0, "the root must not have a parent")
    missing = [i for i, v in enumerate(order) if i and v not in cert.parents]
    if missing:
        return Diagnostic(missing[0], "incomplete parents")
    rank = {v: i for i, v in enumerate(order)}
    masks = g.masks
    alive = 1 << order[0]
    for k in range(1, len(order)):
        v = order[k]
        p = cert.parents[v]
        alive |= 1 << v
        if p == v:
            return Diagnostic(k, "a vertex cannot be its own parent")
        if p not in rank or rank[p] > k:
            return Diagnostic(k, f"parent {g.labels[p]} is not constructed before {g.labels[v]}")
        if masks[v] & alive & ~masks[p]:
            return Diagnostic(k, f"{g.labels[p]} does not dominate {g.labels[v]} among the first {k + 1} vertices")
    return None


def homomorphism_failures(g: FiniteGraph, cert: Certificate) -> list[tuple[int, int]]:
    """Edges (u, v) between non-root vertices whose parents are neither equal nor adjacent.

    Edges at the root are skipped since the root has no image.
    """
    diag = validate(g, cert)
    if diag is not None:
        raise CertificateError(f"invalid certificate: {diag}")
    par = cert.parents
    out = []
    for u, v in g.edges():
        if u == cert.root or v == cert.root:
            continue
        a, b = par[u], par[v]
        if a != b and not g.adjacent(a, b):
            out.append((u, v))
    return out


def is_homomorphism(g: FiniteGraph, cert: Certificate) -> bool:
    return not homomorphism_failures(g, cert)


# ---------------------------------------------------------------------------
# order search with a fixed first block


def order_exists_with_prefix(g: FiniteGraph, prefix: Iterable[int | str]) -> bool:
    """Whether some construction order of g starts with exactly the vertices of ``prefix``."""
    if g.n > MAX_SUBSET_VERTICES:
        raise GraphError(f"subset search is limited to {MAX_SUBSET_VERTICES} vertices (got {g.n})")
    s = 0
    for v in prefix:
        s |= 1 << g.vid(v)
    if s == 0:
        raise GraphError("prefix must be non-empty")
    masks = g.masks
    full = _full(g.n)
    # G[S] can be built from one vertex iff it dismantles, and greedy dismantling decides that
    if not _constructible_mask(masks, s):
        return False
    memo: dict[int, bool] = {}
    old_limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old_limit, 1000))

    def extendable(cur: int) -> bool:
        if cur == full:
            return True
        hit = memo.get(cur)
        if hit is not None:
            return hit
        ok = False
        for v in _bits(full & ~cur):
            grown = cur | (1 << v)
            if masks[v] & cur and _dominators_in(masks, v, grown) and extendable(grown):
                ok = True
                break
        memo[cur] = ok
        return ok

    try:
        return extendable(s)
    finally:
        sys.setrecursionlimit(old_limit)


def valid_roots(g: FiniteGraph) -> list[int]:
    return [v for v in range(g.n) if order_exists_with_prefix(g, [v])]


# ---------------------------------------------------------------------------
# homomorphic domination maps


@dataclass(frozen=True)
class HomSearch:
    status: str  # "found", "none" or "budget"
    certificate: Certificate | None
    nodes: int
    seconds: float

    def to_json(self, graph: FiniteGraph) -> dict[str, Any]:
        out: dict[str, Any] = {
            "result": self.status,
            "nodes": self.nodes,
            "root_edges_exempt": True,
        }
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_json(graph)
        return out


class _OutOfBudget(Exception):
    pass


def search_hom(
    g: FiniteGraph,
    time_budget: float | None = 60.0,
    node_budget: int | None = None,
) -> HomSearch:
    """Depth-first search for a certificate whose parent map is a homomorphism.

    Vertices are removed in dismantling order (last constructed first). Removing
    v with parent p is pruned at once if some already removed neighbour w of v
    has a parent that is neither p nor adjacent to p. Dead states are memoized
    on the live set plus the parents that can still constrain later choices.
    """
    if not g.is_connected():
        raise GraphError("search_hom needs a connected graph")
    start = time.perf_counter()
    masks = g.masks
    adj = g._adjsets
    n = g.n
    parent: dict[int, int] = {}
    removed_order: list[int] = []
    dead: set = set()
    nodes = 0

    def state_key(alive: int) -> tuple:
        # only parents of removed vertices with a live neighbour can still matter
        rel = tuple(sorted((w, parent[w]) for w in removed_order if masks[w] & alive))
        return alive, rel

    def dfs(alive: int) -> bool:
        nonlocal nodes
        nodes += 1
        if node_budget is not None and nodes > node_budget:
            raise _OutOfBudget
        if time_budget is not None and nodes % 512 == 0 and time.perf_counter() - start > time_budget:
            raise _OutOfBudget
        if alive & (alive - 1) == 0:
            return True
        key = state_key(alive)
        if key in dead:
            return False
        for v in _bits(alive):
            doms = _dominators_in(masks, v, alive)
            if not doms:
                continue
            gone = [w for w in adj[v] if w in parent]
            for p in doms:
                if any(parent[w] != p and p not in adj[parent[w]] for w in gone):
                    continue
                parent[v] = p
                removed_order.append(v)
                if dfs(alive & ~(1 << v)):
                    return True
                removed_order.pop()
                del parent[v]
        dead.add(key)
        return False

    old_limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old_limit, 4 * n + 100))
    try:
        found = dfs(_full(n))
    except _OutOfBudget:
        return HomSearch("budget", None, nodes, time.perf_counter() - start)
    finally:
        sys.setrecursionlimit(old_limit)
    elapsed = time.perf_counter() - start
    if not found:
        return HomSearch("none", None, nodes, elapsed)
    alive_root = _full(n)
    for v in removed_order:
        alive_root &= ~(1 << v)
    root = alive_root.bit_length() - 1
    cert = Certificate((root,) + tuple(reversed(removed_order)), dict(parent))
    return HomSearch("found", cert, nodes, elapsed)


def random_constructible(n: int, rng: random.Random, keep: float = 0.5) -> FiniteGraph:
    """A constructible graph on n vertices: each new vertex joins its parent and part of the parent's neighbourhood."""
    if n < 1:
        raise GraphError("need at least one vertex")
    nbrs: list[set[int]] = [set()]
    for v in range(1, n):
        p = rng.randrange(v)
        chosen = {u for u in nbrs[p] if rng.random() < keep} | {p}
        nbrs.append(chosen)
        for u in chosen:
            nbrs[u].add(v)
    edges = [(u, v) for v in range(n) for u in nbrs[v] if u < v]
    return FiniteGraph.from_edges([f"v{i}" for i in range(n)], edges, f"random-constructible-{n}")
