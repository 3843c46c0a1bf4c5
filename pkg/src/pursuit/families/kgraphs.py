"""The seven-vertex valve graph K and the graphs glued together from copies of it."""

from __future__ import annotations

import json
import random
import re
from functools import lru_cache
from importlib import resources
from typing import Iterable

from ..graph import FiniteGraph, GraphError, NeighborOracle

# K's vertex names, in id order. x gets id 0 so lowest-id tie-breaks land on it.
K_NAMES = ("x", "y", "z", "z'", "t", "t'", "w")
K_EDGES = (
    ("y", "x"), ("y", "z"), ("y", "z'"), ("y", "t"), ("y", "t'"),
    ("x", "t"), ("x", "t'"),
    ("w", "t"), ("w", "z"), ("w", "t'"), ("w", "z'"),
    ("z", "t"), ("z'", "t'"), ("z", "z'"),
)
# every K vertex other than the two gates x and y
K_INTERIOR = ("z", "z'", "t", "t'", "w")


@lru_cache(maxsize=1)
def k_graph() -> FiniteGraph:
    """K, loaded from the frozen fixture and checked against the edge table above."""
    text = resources.files("pursuit").joinpath("data/k_graph.json").read_text(encoding="utf-8")
    g = FiniteGraph.loads(text)
    expected = FiniteGraph.from_labeled_edges(K_NAMES, K_EDGES, "K")
    if g.labels != expected.labels or g.adj != expected.adj:
        raise GraphError("K fixture disagrees with the built-in edge table")
    return g


def _k_copy_edges(name: dict[str, str]) -> list[tuple[str, str]]:
    return [(name[a], name[b]) for a, b in K_EDGES]


def two_k() -> FiniteGraph:
    """Two copies of K with the x of the first identified with the y of the second."""
    first = {v: f"{v}1" for v in K_NAMES}
    second = {v: f"{v}2" for v in K_NAMES}
    second["y"] = first["x"]
    labels = [first[v] for v in K_NAMES] + [second[v] for v in K_NAMES if v != "y"]
    edges = _k_copy_edges(first) + _k_copy_edges(second)
    return FiniteGraph.from_labeled_edges(labels, edges, "two_k")


def chain_block_names(i: int) -> dict[str, str]:
    """Labels of block i in a chain; y_i is the junction x_{i+1}."""
    names = {v: f"{v}{i}" for v in K_NAMES}
    names["y"] = f"x{i + 1}"
    return names


def kchain(blocks: int, hub: bool = False, direction: str = "one") -> FiniteGraph:
    """Finite truncation with ``blocks`` copies K_1..K_b glued by y_i = x_{i+1}.

    With ``hub`` a vertex joined to every x_i and y_i is added. The boundary
    marks where the infinite chain continues: x_{b+1} always, x_1 for the
    two-way chain, and the hub (it has infinite degree in the full graph).
    """
    if blocks < 1:
        raise GraphError("kchain needs at least one block")
    if direction not in ("one", "two"):
        raise GraphError("direction must be 'one' or 'two'")
    labels: list[str] = []
    edges: list[tuple[str, str]] = []
    for i in range(1, blocks + 1):
        names = chain_block_names(i)
        labels.extend(names[v] for v in K_NAMES if v != "y")
        edges.extend(_k_copy_edges(names))
    labels.append(f"x{blocks + 1}")
    if hub:
        labels.append("hub")
        edges.extend(("hub", f"x{i}") for i in range(1, blocks + 2))
    g = FiniteGraph.from_labeled_edges(labels, edges, f"kchain-{blocks}")
    boundary = {g.index[f"x{blocks + 1}"]}
    if direction == "two":
        boundary.add(g.index["x1"])
    if hub:
        boundary.add(g.index["hub"])
    return FiniteGraph(g.labels, g.adj, g.name, frozenset(boundary))


def omega1(blocks: int) -> FiniteGraph:
    """Finite surrogate: A, B and disjoint K_1..K_b, A~x_i, A~y_i, B~x_i, A~B."""
    if blocks < 1:
        raise GraphError("omega1 needs at least one block")
    labels = ["A", "B"]
    edges = [("A", "B")]
    for i in range(1, blocks + 1):
        names = {v: f"{v}{i}" for v in K_NAMES}
        labels.extend(names[v] for v in K_NAMES)
        edges.extend(_k_copy_edges(names))
        edges += [("A", names["x"]), ("A", names["y"]), ("B", names["x"])]
    return FiniteGraph.from_labeled_edges(labels, edges, f"omega1-{blocks}")


def omega1_parts(blocks: int) -> dict[str, list[str]]:
    """Label groups of :func:`omega1`: ``A``, ``B`` and ``K1``..``Kb``."""
    parts: dict[str, list[str]] = {"A": ["A"], "B": ["B"]}
    for i in range(1, blocks + 1):
        parts[f"K{i}"] = [f"{v}{i}" for v in K_NAMES]
    return parts


def extend_with_K(g: FiniteGraph, a: int | str, b: int | str) -> tuple[FiniteGraph, int, int]:
    """Glue a fresh K onto ``g``: its y becomes ``b`` and its x is joined to ``a``.

    Returns the new graph, ``a`` and the new x (the next ``b``).
    """
    a, b = g.vid(a), g.vid(b)
    if a == b:
        raise GraphError("A and B must be distinct")
    if not g.adjacent(a, b):
        raise GraphError("A and B must be adjacent")
    k = 1
    while any(f"{v}#{k}" in g.index for v in K_NAMES):
        k += 1
    names = {v: f"{v}#{k}" for v in K_NAMES}
    names["y"] = g.labels[b]
    labels = list(g.labels) + [names[v] for v in K_NAMES if v != "y"]
    old_edges = [(g.labels[u], g.labels[v]) for u, v in g.edges()]
    new_edges = _k_copy_edges(names) + [(names["x"], g.labels[a])]
    out = FiniteGraph.from_labeled_edges(labels, old_edges + new_edges, g.name)
    return out, a, out.index[names["x"]]


def omega_chain(steps: int) -> tuple[FiniteGraph, int, int]:
    """Start from a single edge A-B and apply :func:`extend_with_K` ``steps`` times."""
    g = FiniteGraph.from_labeled_edges(["A", "B"], [("A", "B")], "omega-chain")
    a, b = 0, 1
    for _ in range(steps):
        g, a, b = extend_with_K(g, a, b)
    return g, a, b


# ---------------------------------------------------------------------------
# the infinite chain as an oracle

_CHAIN_KEY = re.compile(r"^(x|z'|z|t'|t|w)(-?\d+)$")
_RIGHT = {"z": "x", "z'": "x", "x": "x"}  # parents pointing to x_{i+1}
_LOCAL_PARENT = {"w": "z", "t": "z", "t'": "z'"}


class KChainOracle(NeighborOracle):
    """Infinite chain of K copies, one-way (blocks 1, 2, ...) or two-way (all integers).

    Vertices are ``(kind, i)`` with ``kind`` a K name other than ``y``
    (``y_i`` is ``("x", i + 1)``), plus ``("hub", 0)`` when the hub is present.
    Without the hub the chain carries the parent map that builds any finite
    stretch from its right end, so it supports trail queries.
    """

    def __init__(self, hub: bool = False, direction: str = "one"):
        if direction not in ("one", "two"):
            raise GraphError("direction must be 'one' or 'two'")
        self.hub = hub
        self.direction = direction
        self.name = f"kchain?direction={direction}&hub={'true' if hub else 'false'}"
        self.locally_finite = not hub
        self.has_parents = not hub

    def _block_ok(self, i: int) -> bool:
        return self.direction == "two" or i >= 1

    def is_vertex(self, v) -> bool:
        if v == ("hub", 0):
            return self.hub
        return (
            isinstance(v, tuple) and len(v) == 2 and v[0] in K_NAMES and v[0] != "y"
            and isinstance(v[1], int) and self._block_ok(v[1])
        )

    def key(self, v) -> str:
        return "hub" if v[0] == "hub" else f"{v[0]}{v[1]}"

    def parse(self, key: str):
        if key == "hub" and self.hub:
            return ("hub", 0)
        m = _CHAIN_KEY.match(key)
        if not m:
            raise GraphError(f"bad chain key {key!r}")
        v = (m.group(1), int(m.group(2)))
        if not self.is_vertex(v):
            raise GraphError(f"{key!r} is not in this chain")
        return v

    def _as_name(self, v, block: int) -> str | None:
        """Name of ``v`` inside block ``block`` (or None)."""
        kind, i = v
        if kind == "x" and i == block + 1:
            return "y"
        if i == block:
            return kind
        return None

    def neighbors(self, v) -> tuple:
        if v[0] == "hub":
            raise GraphError("the hub has infinite degree; use adjacent() or closed_moves()")
        kind, i = v
        out = []
        blocks = [i - 1, i] if kind == "x" else [i]
        for b in blocks:
            if not self._block_ok(b):
                continue
            me = self._as_name(v, b)
            for a, c in K_EDGES:
                other = c if a == me else a if c == me else None
                if other is not None:
                    out.append(("x", b + 1) if other == "y" else (other, b))
        if self.hub and kind == "x":
            out.append(("hub", 0))
        return tuple(sorted(set(out), key=self.key))

    def adjacent(self, u, v) -> bool:
        if u == v:
            return False
        if u[0] == "hub" or v[0] == "hub":
            other = v if u[0] == "hub" else u
            return self.hub and other[0] == "x"
        return v in self.neighbors(u)

    def parent(self, v):
        if not self.has_parents:
            return None
        kind, i = v
        if kind in _RIGHT:
            return ("x", i + 1)
        return (_LOCAL_PARENT[kind], i)

    def potential(self, v) -> int:
        return 0 if v[0] == "hub" else v[1]

    def block_of(self, v) -> int | None:
        return None if v[0] == "hub" else v[1]

    def random_vertex(self, rng: random.Random):
        lo = -5 if self.direction == "two" else 1
        kind = K_NAMES[rng.randrange(len(K_NAMES))]
        i = rng.randint(lo, 5)
        return ("x", i + 1) if kind == "y" else (kind, i)

    def distance_hint(self, u, v) -> float:
        if u == v:
            return 0.0
        if u[0] == "hub" or v[0] == "hub":
            return 1.0 if (u[0] == "x" or v[0] == "x") else 2.0
        d = 2.0 * abs(u[1] - v[1])
        return d + (0.0 if u[0] == v[0] else 1.0)

    def closed_moves(self, v, context: Iterable = ()) -> tuple:
        if v[0] != "hub":
            return (v,) + self.neighbors(v)
        blocks = {c[1] for c in context if c[0] != "hub"} or {1}
        lo, hi = min(blocks) - 1, max(blocks) + 2
        xs = [("x", i) for i in range(lo, hi + 1) if self._block_ok(i)]
        return (v,) + tuple(xs)


def k_fixture_json() -> str:
    """The K fixture exactly as shipped (used to regenerate data/k_graph.json)."""
    g = FiniteGraph.from_labeled_edges(K_NAMES, K_EDGES, "K")
    return json.dumps(g.to_json(), indent=1) + "\n"
