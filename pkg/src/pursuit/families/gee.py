"""The coordinate graph built from interleaved 4-cycles and 6-paths.

Positions 1, 2, 3, ... alternate: odd positions hold a 4-cycle value in
{0,1,2,3}, even positions a path value in {0..6}; all but finitely many are 0.
A vertex is stored sparsely as a sorted tuple of ``(position, value)`` pairs
with nonzero values, so the all-zero vertex is ``()``.
"""

from __future__ import annotations

import itertools
import random
import re
from functools import lru_cache
from typing import Iterable, Sequence

from ..graph import FiniteGraph, GraphError, NeighborOracle

GeeVertex = tuple  # tuple[tuple[int, int], ...]

ZERO: GeeVertex = ()
TOP = 6  # height of every path coordinate

_PAIR = re.compile(r"^(\d+)=(\d+)$")


def is_cycle_pos(p: int) -> bool:
    return p % 2 == 1


def cyc_dist(a: int, b: int) -> int:
    d = (a - b) % 4
    return min(d, 4 - d)


def coord_dist(p: int, a: int, b: int) -> int:
    return cyc_dist(a, b) if p % 2 else abs(a - b)


def make_vertex(coords: dict[int, int] | Iterable[tuple[int, int]]) -> GeeVertex:
    items = coords.items() if isinstance(coords, dict) else coords
    out = []
    for p, v in items:
        if p < 1:
            raise GraphError(f"position {p} out of range")
        limit = 3 if p % 2 else TOP
        if not 0 <= v <= limit:
            raise GraphError(f"value {v} out of range at position {p}")
        if v:
            out.append((p, v))
    out.sort()
    if len({p for p, _ in out}) != len(out):
        raise GraphError("repeated position")
    return tuple(out)


def from_dense(values: Sequence[int]) -> GeeVertex:
    """Dense coordinates (position 1 first) to the sparse form."""
    return make_vertex({i + 1: v for i, v in enumerate(values)})


def to_dense(v: GeeVertex, length: int | None = None) -> tuple[int, ...]:
    """Sparse to dense, trimmed of trailing zeros unless ``length`` is given."""
    top = v[-1][0] if v else 0
    n = top if length is None else length
    if n < top:
        raise GraphError("length shorter than the support")
    out = [0] * n
    for p, val in v:
        out[p - 1] = val
    return tuple(out)


def gee_key(v: GeeVertex) -> str:
    return ";".join(f"{p}={val}" for p, val in v) if v else "0"


def parse_gee_key(key: str) -> GeeVertex:
    key = key.strip()
    if key == "0":
        return ZERO
    pairs = []
    for part in key.split(";"):
        m = _PAIR.match(part)
        if not m:
            raise GraphError(f"bad coordinate {part!r} in key {key!r}")
        pairs.append((int(m.group(1)), int(m.group(2))))
    v = make_vertex(pairs)
    if [p for p, _ in pairs] != [p for p, _ in v] or any(val == 0 for _, val in pairs):
        raise GraphError(f"key {key!r} is not canonical")
    return v


def value_at(v: GeeVertex, p: int) -> int:
    for q, val in v:
        if q == p:
            return val
        if q > p:
            break
    return 0


def top_cycle(v: GeeVertex) -> int:
    """Largest odd position with a nonzero value (0 if none)."""
    for p, _ in reversed(v):
        if p % 2:
            return p
    return 0


def sixes(v: GeeVertex) -> list[int]:
    return [p for p, val in v if p % 2 == 0 and val == TOP]


def has_six(v: GeeVertex) -> bool:
    return any(p % 2 == 0 and val == TOP for p, val in v)


def support_max(v: GeeVertex) -> int:
    return v[-1][0] if v else 0


def zero_distance_bound(v: GeeVertex) -> int:
    """1-Lipschitz lower bound on the distance to the zero vertex.

    The largest path value must come down one step at a time: a coordinate can
    only jump while a higher path coordinate holds 6 on both ends, and that 6
    then has to come down too. A lone cycle coordinate costs at least one move.
    """
    best = max((val for p, val in v if p % 2 == 0), default=0)
    return best if best or not v else 1


def gee_adjacent(a: GeeVertex, b: GeeVertex) -> bool:
    if a == b:
        return False
    # the shared prefix agrees, so only the rest needs looking at
    n = min(len(a), len(b))
    i = 0
    while i < n and a[i] == b[i]:
        i += 1
    da = dict(a[i:])
    db = dict(b[i:])
    positions = da.keys() | db.keys()
    m1 = max(top_cycle(a), top_cycle(b))
    bvals = dict(b)
    m2 = max((p for p, val in a if p % 2 == 0 and val == TOP and bvals.get(p) == TOP), default=0)
    if m1 == 0 and m2 == 0:
        return all(abs(da.get(p, 0) - db.get(p, 0)) <= 1 for p in positions)
    if m1 < m2:
        return all(abs(da.get(p, 0) - db.get(p, 0)) <= 1 for p in positions if p > m2)
    for p in positions:
        x, y = da.get(p, 0), db.get(p, 0)
        if p < m1:
            if x != y:
                return False
        elif p == m1:
            if cyc_dist(x, y) > 1:
                return False
        elif abs(x - y) > 1:
            return False
    return True


def gee_adjacent_reference(a: GeeVertex, b: GeeVertex) -> bool:
    """Direct transcription of the three adjacency cases on dense coordinates."""
    if a == b:
        return False
    n = max(support_max(a), support_max(b))
    x, y = to_dense(a, n), to_dense(b, n)
    pos = range(1, n + 1)
    m1 = max((p for p in pos if p % 2 and (x[p - 1] or y[p - 1])), default=0)
    m2 = max((p for p in pos if p % 2 == 0 and x[p - 1] == y[p - 1] == TOP), default=0)
    if m1 == 0 and m2 == 0:
        return all(abs(x[p - 1] - y[p - 1]) <= 1 for p in pos)
    if m1 < m2:
        return all(abs(x[p - 1] - y[p - 1]) <= 1 for p in pos if p > m2)
    if any(x[p - 1] != y[p - 1] for p in pos if p < m1):
        return False
    if cyc_dist(x[m1 - 1], y[m1 - 1]) > 1:
        return False
    return all(abs(x[p - 1] - y[p - 1]) <= 1 for p in pos if p > m1)


def change(v: GeeVertex, p: int, value: int) -> GeeVertex:
    """``v`` with the coordinate at ``p`` replaced."""
    out = [(q, val) for q, val in v if q != p]
    if value:
        out.append((p, value))
        out.sort()
    return tuple(out)


def single_change_legal(v: GeeVertex, p: int, new: int, top_c: int, six_pos: Sequence[int]) -> bool:
    """Whether changing coordinate ``p`` of ``v`` to ``new`` is a move along an edge.

    ``top_c`` and ``six_pos`` are :func:`top_cycle` and :func:`sixes` of ``v``,
    passed in so menus can be built without rescanning ``v``.
    """
    old = value_at(v, p)
    if old == new or coord_dist(p, old, new) != 1:
        return False
    m2 = max((s for s in six_pos if s != p), default=0)
    m1 = top_c
    if p % 2 and p > m1 and new:
        m1 = p
    if m1 == 0 and m2 == 0:
        return True
    if m1 < m2:
        return p < m2 or p % 2 == 0
    return p >= m1


def stage_vertices(k: int) -> list[GeeVertex]:
    """All vertices supported on positions 1..k, in lexicographic dense order."""
    ranges = [range(4) if p % 2 else range(TOP + 1) for p in range(1, k + 1)]
    return [from_dense(vals) for vals in itertools.product(*ranges)]


@lru_cache(maxsize=8)
def gee_stage(k: int) -> FiniteGraph:
    """Finite stage k of the coordinate graph (positions 1..k)."""
    if k < 1:
        raise GraphError("stage must be at least 1")
    if k > 5:
        raise GraphError("stages above 5 are too large to materialize")
    verts = stage_vertices(k)
    edges = []
    for i, a in enumerate(verts):
        for j in range(i + 1, len(verts)):
            if gee_adjacent(a, verts[j]):
                edges.append((i, j))
    return FiniteGraph.from_edges([gee_key(v) for v in verts], edges, f"gee-{k}")


class GeeOracle(NeighborOracle):
    """The full coordinate graph (infinite degree), or a window of positions 1..max_position."""

    def __init__(self, max_position: int | None = None):
        self.max_position = max_position
        self.name = "gee" if max_position is None else f"gee?stage={max_position}"
        self.locally_finite = max_position is not None
        # random walkers stay on positions <= 8; unconfined they drift upward without bound
        self.random_window = 8 if max_position is None else None

    def is_vertex(self, v) -> bool:
        if not isinstance(v, tuple):
            return False
        try:
            ok = make_vertex(v) == v
        except (GraphError, TypeError, ValueError):
            return False
        return ok and (self.max_position is None or support_max(v) <= self.max_position)

    def key(self, v: GeeVertex) -> str:
        return gee_key(v)

    def parse(self, key: str) -> GeeVertex:
        v = parse_gee_key(key)
        if self.max_position is not None and support_max(v) > self.max_position:
            raise GraphError(f"{key!r} lies outside stage {self.max_position}")
        return v

    def adjacent(self, u: GeeVertex, v: GeeVertex) -> bool:
        return gee_adjacent(u, v)

    def neighbors(self, v: GeeVertex) -> tuple:
        if self.max_position is None:
            raise GraphError("vertices of the full coordinate graph have infinite degree")
        g = gee_stage(self.max_position)
        i = g.index[gee_key(v)]
        return tuple(parse_gee_key(g.labels[j]) for j in g.adj[i])

    def potential(self, v: GeeVertex) -> int:
        return support_max(v)

    def random_vertex(self, rng: random.Random) -> GeeVertex:
        k = self.max_position or 4
        coords = {}
        for p in range(1, k + 1):
            coords[p] = rng.randrange(4) if p % 2 else rng.randrange(TOP + 1)
        return make_vertex(coords)

    def distance_hint(self, u: GeeVertex, v: GeeVertex) -> float:
        du, dv = dict(u), dict(v)
        return float(sum(coord_dist(p, du.get(p, 0), dv.get(p, 0)) for p in du.keys() | dv.keys()))

    def closed_moves(self, v: GeeVertex, context: Iterable[GeeVertex] = ()) -> tuple:
        """Stay, or change one coordinate by one step.

        Candidate positions are the supports of ``v`` and ``context`` plus the
        two positions just above them (capped at ``max_position``).
        """
        positions = {p for p, _ in v}
        top = support_max(v)
        for c in context:
            positions.update(p for p, _ in c)
            top = max(top, support_max(c))
        positions.update((top + 1, top + 2))
        if self.max_position is not None:
            positions = {p for p in positions if p <= self.max_position}
        tc, sx = top_cycle(v), sixes(v)
        out = [v]
        for p in sorted(positions):
            old = value_at(v, p)
            if p % 2:
                options = ((old + 1) % 4, (old - 1) % 4)
            else:
                options = tuple(x for x in (old - 1, old + 1) if 0 <= x <= TOP)
            for new in options:
                if single_change_legal(v, p, new, tc, sx):
                    out.append(change(v, p, new))
        return tuple(out)


def stage_to_ppath_label(v: GeeVertex) -> str:
    """Image of a stage-2 vertex under the coordinate bijection onto ppath(cycle 4, 6)."""
    c, j = to_dense(v, 2)
    return f"({c},{j})"
