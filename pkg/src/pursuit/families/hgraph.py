"""The layered union of iterated hive graphs, with its projection maps.

Construction: G_0 is a single vertex (the origin). H_n glues a new 4-cycle
onto the origin of G_{n-1}; G_n is the hive of H_n of height l_n = 2n+5 with
apex v_n. G_{n-1} sits inside G_n as layer 0. The full graph takes one copy
of every G_n and joins (n,x) to (n',x') when |n-n'| <= 1 and x, x' are adjacent
or equal once both are read inside the larger G.

An element of G_n is stored flat as ``(kind, k, c, layers)``:

* ``("O", 0, 0, layers)``: the origin of G_0 wrapped in ``len(layers)`` hive layers;
* ``("V", k, 0, layers)``: the apex v_k of G_k wrapped in layers for levels k+1..n;
* ``("C", k, c, layers)``: cycle vertex c (1..3) of the 4-cycle added in H_k,
  wrapped in layers for levels k..n (so ``layers`` is never empty).

``layers[j]`` is the height inside the hive at level ``base + j + 1`` where
base is 0, k, k-1 for the three kinds. Since an element of G_n determines n,
the element itself serves as the vertex (n, x) of the union graph.
"""

from __future__ import annotations

import random
import re
from functools import lru_cache
from typing import Iterable, Iterator

from ..graph import FiniteGraph, GraphError, NeighborOracle

HVertex = tuple  # (kind, k, c, layers)


def height(n: int) -> int:
    """Hive height l_n used at level n."""
    return 2 * n + 5


def base_level(v: HVertex) -> int:
    kind, k = v[0], v[1]
    return 0 if kind == "O" else k if kind == "V" else k - 1


def level(v: HVertex) -> int:
    return base_level(v) + len(v[3])


def origin(n: int = 0) -> HVertex:
    return ("O", 0, 0, (0,) * n)


def hive_vertex(k: int) -> HVertex:
    if k < 1:
        raise GraphError("hive vertices exist from level 1")
    return ("V", k, 0, ())


def cycle_vertex(k: int, c: int, n: int | None = None) -> HVertex:
    """Cycle vertex c of the 4-cycle added at level k, read in G_n (default n=k)."""
    if k < 1 or c not in (1, 2, 3):
        raise GraphError("cycle vertices are C_k(c) with k >= 1 and c in 1..3")
    n = k if n is None else n
    if n < k:
        raise GraphError("a level-k cycle vertex first exists in G_k")
    return ("C", k, c, (0,) * (n - k + 1))


def embed(v: HVertex, times: int = 1) -> HVertex:
    """The copy of ``v`` one (or more) levels up, in layer 0."""
    return (v[0], v[1], v[2], v[3] + (0,) * times)


def is_origin(v: HVertex) -> bool:
    return v[0] == "O" and not any(v[3])


def on_spine(v: HVertex) -> bool:
    return is_origin(v)


def is_valid(v) -> bool:
    if not (isinstance(v, tuple) and len(v) == 4 and isinstance(v[3], tuple)):
        return False
    kind, k, c, layers = v
    if kind == "O":
        if k != 0 or c != 0:
            return False
    elif kind == "V":
        if k < 1 or c != 0:
            return False
    elif kind == "C":
        if k < 1 or c not in (1, 2, 3) or not layers:
            return False
    else:
        return False
    b = base_level(v)
    return all(isinstance(i, int) and 0 <= i <= height(b + j + 1) for j, i in enumerate(layers))


def _zero_prefix(layers: tuple) -> int:
    """Length of the all-zero prefix of ``layers``."""
    for j, i in enumerate(layers):
        if i:
            return j
    return len(layers)


def layer_at(v: HVertex, lvl: int) -> int | None:
    """Hive height of ``v`` at level ``lvl`` (None below its core)."""
    j = lvl - base_level(v) - 1
    if 0 <= j < len(v[3]):
        return v[3][j]
    return None


def truncate(v: HVertex, n: int) -> HVertex:
    """The element of G_n obtained by stripping layers above level n (plain hive maps)."""
    b = base_level(v)
    return (v[0], v[1], v[2], v[3][: n - b])


# ---------------------------------------------------------------------------
# adjacency


def similar(a: HVertex, b: HVertex) -> bool:
    """Adjacent-or-equal for two elements of the same G_n."""
    n = level(a)
    if level(b) != n:
        raise GraphError("similar() compares elements of the same level")
    la, lb = a[3], b[3]
    ba, bb = base_level(a), base_level(b)
    za, zb = _zero_prefix(la), _zero_prefix(lb)
    lvl = n
    while True:
        a_bare = lvl == ba
        b_bare = lvl == bb
        if a_bare or b_bare:
            if a_bare and b_bare:
                return a[:3] == b[:3]
            # one side is the apex v_lvl (an origin can only be bare at level 0)
            other_layers, other_base = (lb, bb) if a_bare else (la, ba)
            return other_layers[lvl - other_base - 1] == height(lvl)
        ia, ib = la[lvl - ba - 1], lb[lvl - bb - 1]
        if abs(ia - ib) > 1:
            return False
        # strip the level-lvl wrapper: elements of H_lvl
        a_cyc = _cycle_value(a, lvl, ba, za)
        b_cyc = _cycle_value(b, lvl, bb, zb)
        if a_cyc is not None and a_cyc >= 1 or b_cyc is not None and b_cyc >= 1:
            if a_cyc is None or b_cyc is None:
                return False
            d = (a_cyc - b_cyc) % 4
            return min(d, 4 - d) <= 1
        lvl -= 1


def _cycle_value(v: HVertex, lvl: int, base: int, zero_prefix: int) -> int | None:
    """Position of v's H_lvl element on the 4-cycle added at lvl (origin=0), else None."""
    if v[0] == "C" and v[1] == lvl:
        return v[2]
    if v[0] == "O" and zero_prefix >= lvl - 1:
        return 0
    return None


def adjacent(a: HVertex, b: HVertex) -> bool:
    """Adjacency in the union graph."""
    if a == b:
        return False
    na, nb = level(a), level(b)
    if na == nb:
        return similar(a, b)
    if abs(na - nb) != 1:
        return False
    if na < nb:
        return similar(embed(a), b)
    return similar(a, embed(b))


# ---------------------------------------------------------------------------
# neighbourhood enumeration (only sensible at low levels: sizes grow like 2^n)


def elements_G(n: int) -> Iterator[HVertex]:
    """All elements of G_n (the apex last at each level)."""
    if n == 0:
        yield origin(0)
        return
    for h in elements_H(n):
        for i in range(height(n) + 1):
            yield (h[0], h[1], h[2], h[3] + (i,))
    yield hive_vertex(n)


def elements_H(n: int) -> Iterator[HVertex]:
    """Elements of H_n, as G_n elements would store them before their level-n layer."""
    yield from elements_G(n - 1)
    for c in (1, 2, 3):
        yield ("C", n, c, ())


@lru_cache(maxsize=None)
def size_G(n: int) -> int:
    if n == 0:
        return 1
    return size_H(n) * (height(n) + 1) + 1


def size_H(n: int) -> int:
    return size_G(n - 1) + 3


def closed_H(h: HVertex, n: int) -> list[HVertex]:
    """Closed neighbourhood of an H_n element (bare-cycle form for the new cycle)."""
    if h[0] == "C" and h[1] == n and not h[3]:
        c = h[2]
        out = [("C", n, c2, ()) for c2 in (1, 2, 3) if min((c - c2) % 4, (c2 - c) % 4) <= 1]
        if c in (1, 3):
            out.append(origin(n - 1))
        return out
    out = closed_G(h)
    if is_origin(h):
        out += [("C", n, 1, ()), ("C", n, 3, ())]
    return out


def closed_G(x: HVertex) -> list[HVertex]:
    """Closed neighbourhood of ``x`` inside its own G_n."""
    n = level(x)
    if n == 0:
        return [x]
    top = height(n)
    if x[0] == "V" and x[1] == n:
        return [x] + [(h[0], h[1], h[2], h[3] + (top,)) for h in elements_H(n)]
    h = (x[0], x[1], x[2], x[3][:-1])
    i = x[3][-1]
    out = []
    for h2 in closed_H(h, n):
        for i2 in (i - 1, i, i + 1):
            if 0 <= i2 <= top:
                out.append((h2[0], h2[1], h2[2], h2[3] + (i2,)))
    if i == top:
        out.append(hive_vertex(n))
    return out


def closed_union(x: HVertex) -> list[HVertex]:
    """Closed neighbourhood in the union graph."""
    n = level(x)
    out = closed_G(x)
    for h in closed_H(x, n + 1):
        for i in (0, 1):
            out.append((h[0], h[1], h[2], h[3] + (i,)))
    h = _down_element(x)
    if h is not None:
        out.extend(closed_G(h))
    elif _down_to_origin(x):
        out.append(origin(n - 1))
    return out


def _down_to_origin(x: HVertex) -> bool:
    """A fresh cycle vertex next to the origin, in layer 0 or 1, also sees the origin one level down."""
    return x[0] == "C" and x[2] in (1, 3) and len(x[3]) == 1 and x[3][0] <= 1


# ---------------------------------------------------------------------------
# counting and uniform sampling of closed neighbourhoods (cost linear in depth)


def _span(i: int, lvl: int) -> int:
    return (i > 0) + 1 + (i < height(lvl))


def _prefix_counts(x: HVertex) -> list[int]:
    """cnt[j] = size of the closed G-neighbourhood of x cut to its first j layers.

    For a cycle core the j=0 entry is the closed H-neighbourhood size (3)
    of the bare cycle vertex instead.
    """
    kind, k, _, layers = x
    b = base_level(x)
    z = _zero_prefix(layers)
    if kind == "O":
        cnt = [1]
    elif kind == "V":
        cnt = [1 + size_H(k)]
    else:
        cnt = [3]
    for j, i in enumerate(layers):
        lvl = b + j + 1
        if kind == "C" and j == 0:
            ch = 3
        else:
            ch = cnt[-1] + (2 if kind == "O" and z >= lvl - 1 else 0)
        cnt.append(ch * _span(i, lvl) + (1 if i == height(lvl) else 0))
    return cnt


def count_closed_G(x: HVertex) -> int:
    return _prefix_counts(x)[-1]


def count_closed_H(x: HVertex, n: int) -> int:
    """|N_{H_n}[x]| for x an element of G_{n-1}."""
    return count_closed_G(x) + (2 if is_origin(x) else 0)


def _down_element(x: HVertex) -> HVertex | None:
    """(n-1, h) is a union-graph neighbour when x = P(h, i) with i <= 1 and h in G_{n-1}."""
    n = level(x)
    if n < 1 or not x[3] or x[3][-1] > 1:
        return None
    if x[0] == "C" and x[1] == n:
        return None
    return (x[0], x[1], x[2], x[3][:-1])


def count_closed_union(x: HVertex) -> int:
    cnt = _prefix_counts(x)
    total = cnt[-1] + 2 * (cnt[-1] + (2 if is_origin(x) else 0))
    if _down_element(x) is not None:
        total += cnt[-2]
    elif _down_to_origin(x):
        total += 1
    return total


def sample_G(n: int, rng: random.Random) -> HVertex:
    """Uniform element of G_n."""
    suffix: list[int] = []
    while n > 0:
        r = rng.randrange(size_G(n))
        if r == 0:
            return ("V", n, 0, tuple(reversed(suffix)))
        suffix.append(rng.randrange(height(n) + 1))
        r = rng.randrange(size_H(n))
        if r < 3:
            return ("C", n, r + 1, tuple(reversed(suffix)))
        n -= 1
    return ("O", 0, 0, tuple(reversed(suffix)))


def _sample_prefix(x: HVertex, j: int, cnt: list[int], rng: random.Random) -> HVertex:
    """Uniform member of N_G[x cut to j layers], walking down one level at a time."""
    kind, k, c, layers = x
    b = base_level(x)
    z = _zero_prefix(layers)
    suffix: list[int] = []
    while True:
        if j == 0:
            if kind == "O":
                result = origin(0)
            elif kind == "V":
                r = rng.randrange(cnt[0])
                if r == 0:
                    result = hive_vertex(k)
                else:
                    rr = rng.randrange(size_H(k))
                    if rr < 3:
                        result = ("C", k, rr + 1, (height(k),))
                    else:
                        g = sample_G(k - 1, rng)
                        result = (g[0], g[1], g[2], g[3] + (height(k),))
            else:
                raise GraphError("a bare cycle vertex is not an element of any G_n")
            break
        lvl = b + j
        i = layers[j - 1]
        top = height(lvl)
        if i == top and rng.randrange(cnt[j]) == 0:
            result = hive_vertex(lvl)
            break
        opts = [i2 for i2 in (i - 1, i, i + 1) if 0 <= i2 <= top]
        suffix.append(opts[rng.randrange(len(opts))])
        if kind == "C" and j == 1:
            pool = [("C", k, cc, ()) for cc in (1, 2, 3) if min((c - cc) % 4, (cc - c) % 4) <= 1]
            if c in (1, 3):
                pool.append(origin(k - 1))
            result = pool[rng.randrange(len(pool))]
            break
        extra = 2 if kind == "O" and z >= lvl - 1 else 0
        if extra and rng.randrange(cnt[j - 1] + extra) < extra:
            result = ("C", lvl, 1 if rng.randrange(2) == 0 else 3, ())
            break
        j -= 1
    return (result[0], result[1], result[2], result[3] + tuple(reversed(suffix)))


def sample_closed_G(x: HVertex, rng: random.Random) -> HVertex:
    """Uniform member of the closed neighbourhood of ``x`` inside its own G_n."""
    cnt = _prefix_counts(x)
    return _sample_prefix(x, len(x[3]), cnt, rng)


def sample_closed_union(x: HVertex, rng: random.Random) -> HVertex:
    """Uniform member of the closed neighbourhood of ``x`` in the union graph."""
    n = level(x)
    cnt = _prefix_counts(x)
    same = cnt[-1]
    extra = 2 if is_origin(x) else 0
    up = 2 * (same + extra)
    if _down_element(x) is not None:
        down = cnt[-2]
    else:
        down = 1 if _down_to_origin(x) else 0
    r = rng.randrange(same + up + down)
    if r < same:
        return _sample_prefix(x, len(x[3]), cnt, rng)
    if r < same + up:
        layer = rng.randrange(2)
        rr = rng.randrange(same + extra)
        if rr < extra:
            h = ("C", n + 1, 1 if rr == 0 else 3, ())
        else:
            h = _sample_prefix(x, len(x[3]), cnt, rng)
        return (h[0], h[1], h[2], h[3] + (layer,))
    if down == 1 and _down_element(x) is None:
        return origin(n - 1)
    return _sample_prefix(x, len(x[3]) - 1, cnt, rng)


# ---------------------------------------------------------------------------
# projections


def hive_order(v: HVertex) -> int | None:
    """k when v is hive-type of order k (its n-projection for n=k is the apex v_k)."""
    return v[1] if v[0] == "V" else None


def hive_map(x: HVertex) -> HVertex | None:
    """Project an element of G_n (n>=1) to the base layer, as an element of H_n.

    Returns None at the apex, where the map is undefined. A cycle vertex of the
    level-n cycle comes back in bare form ``("C", n, c, ())``.
    """
    n = level(x)
    if n == 0:
        raise GraphError("the hive map acts on G_n for n >= 1")
    if x[0] == "V" and x[1] == n:
        return None
    return (x[0], x[1], x[2], x[3][:-1])


def one_step(x: HVertex) -> HVertex | None:
    """One-step projection G_n minus apex -> G_{n-1}: hive map, then the new cycle to the origin."""
    h = hive_map(x)
    if h is None:
        return None
    n = level(x)
    if h[0] == "C" and h[1] == n and not h[3]:
        return origin(n - 1)
    return h


def project(v: HVertex, n: int) -> HVertex:
    """The n-projection: an element of G_n, or an apex v_k with k > n."""
    m = level(v)
    if m <= n:
        return embed(v, n - m)
    kind, k = v[0], v[1]
    if kind == "V" and k > n:
        return hive_vertex(k)
    if kind == "C" and k > n:
        return origin(n)
    return truncate(v, n)


def project_H(v: HVertex, n: int) -> HVertex:
    """Projection onto H_n: the n-projection followed by the hive map.

    Apexes v_k with k >= n are returned unchanged. Elements of the level-n
    cycle come back bare, ``("C", n, c, ())``; other results are G_{n-1}
    elements.
    """
    p = project(v, n)
    if p[0] == "V" and p[1] >= n and not p[3]:
        return p
    return hive_map(p)


def dist_H(n: int, p: HVertex, cycle_pos: int) -> int | None:
    """Distance in H_n from ``p`` to the cycle vertex at ``cycle_pos`` (0 = origin), if cheap.

    The origin cuts H_n, so distances from G_{n-1} add up through it. Returns
    None when ``p`` is an apex (outside H_n).
    """
    if p[0] == "V" and not p[3] and p[1] >= n:
        return None
    if p[0] == "C" and p[1] == n and not p[3]:
        d = (p[2] - cycle_pos) % 4
        return min(d, 4 - d)
    d0 = psi_to_origin(p)
    d = cycle_pos % 4
    return d0 + min(d, 4 - d)


def psi_to_origin(p: HVertex) -> int:
    """Exact distance from an element of G_m to the origin of G_m.

    Every layer must come down to 0 and the cycle/apex cores must be left;
    moves can fix all of these at once, so the distance is the largest of the
    individual costs.
    """
    return potential(p)


def potential(v: HVertex) -> int:
    """1-Lipschitz potential vanishing on the spine: a lower bound on the distance to it."""
    best = max(v[3], default=0)
    if v[0] == "V":
        best = max(best, height(v[1]) + 1)
    elif v[0] == "C":
        best = max(best, 2 if v[2] == 2 else 1)
    return best


# ---------------------------------------------------------------------------
# keys


_CORE = re.compile(r"ORIGIN|HIVE\((\d+)\)|CYC\(([123])\)")
_TAIL = re.compile(r",(\d+)\)")


def h_key(v: HVertex) -> str:
    kind, k, c, layers = v
    core = "ORIGIN" if kind == "O" else f"HIVE({k})" if kind == "V" else f"CYC({c})"
    return f"{level(v)}:" + "PAIR(" * len(layers) + core + "".join(f",{i})" for i in layers)


def parse_h_key(key: str) -> HVertex:
    head, sep, body = key.partition(":")
    if not sep or not head.isdigit():
        raise GraphError(f"bad key {key!r}")
    n = int(head)
    depth = 0
    while body.startswith("PAIR(", depth * 5):
        depth += 1
    rest = body[depth * 5:]
    m = _CORE.match(rest)
    if not m:
        raise GraphError(f"bad core in {key!r}")
    pos = m.end()
    layers = []
    while pos < len(rest):
        t = _TAIL.match(rest, pos)
        if not t:
            raise GraphError(f"bad layer list in {key!r}")
        layers.append(int(t.group(1)))
        pos = t.end()
    if len(layers) != depth:
        raise GraphError(f"unbalanced PAIR nesting in {key!r}")
    if m.group(0) == "ORIGIN":
        v = ("O", 0, 0, tuple(layers))
    elif m.group(1) is not None:
        v = ("V", n - depth, 0, tuple(layers))
    else:
        v = ("C", n - depth + 1, int(m.group(2)), tuple(layers))
    if not is_valid(v) or level(v) != n:
        raise GraphError(f"key {key!r} does not describe a vertex at level {n}")
    return v


class HOracle(NeighborOracle):
    """The locally finite layered hive graph, optionally cut to levels <= max_level."""

    locally_finite = True

    def __init__(self, max_level: int | None = None):
        self.max_level = max_level
        self.name = "hgraph" if max_level is None else f"hgraph?levels={max_level}"
        # menu walks climb about a level every few moves; random walkers stay at level <= 3
        self.random_window = 3 if max_level is None else None

    def _ok(self, v: HVertex) -> bool:
        return self.max_level is None or level(v) <= self.max_level

    def is_vertex(self, v) -> bool:
        return is_valid(v) and self._ok(v)

    def key(self, v: HVertex) -> str:
        return h_key(v)

    def parse(self, key: str) -> HVertex:
        v = parse_h_key(key)
        if not self._ok(v):
            raise GraphError(f"{key!r} lies above level {self.max_level}")
        return v

    def neighbors(self, v: HVertex) -> tuple:
        out = {u for u in closed_union(v) if u != v and self._ok(u)}
        return tuple(sorted(out, key=h_key))

    def adjacent(self, u: HVertex, v: HVertex) -> bool:
        return adjacent(u, v)

    def has_neighbor_outside(self, v: HVertex, inside) -> bool:
        if self.max_level is None or level(v) >= self.max_level:
            return True
        return any(u not in inside for u in closed_union(v))

    def potential(self, v: HVertex) -> int:
        return level(v)

    def random_vertex(self, rng: random.Random) -> HVertex:
        return sample_G(rng.randint(0, self.max_level if self.max_level is not None else 2), rng)

    def random_closed_neighbor(self, v: HVertex, rng: random.Random) -> HVertex:
        while True:
            u = sample_closed_union(v, rng)
            if self._ok(u):
                return u

    def distance_hint(self, u: HVertex, v: HVertex) -> float:
        return float(hint(u, v))

    def closed_moves(self, v: HVertex, context: Iterable = ()) -> tuple:
        return tuple(m for m in moves_menu(v) if self._ok(m))


def hint(u: HVertex, v: HVertex) -> int:
    """Cheap closeness score: level gap plus per-level layer gaps plus core mismatch."""
    nu, nv = level(u), level(v)
    total = abs(nu - nv)
    for lvl in range(1, max(nu, nv) + 1):
        a = layer_at(u, lvl) or 0
        b = layer_at(v, lvl) or 0
        total += abs(a - b)
    if u[:3] != v[:3]:
        total += potential((u[0], u[1], u[2], ())) + potential((v[0], v[1], v[2], ()))
    return total


def moves_menu(v: HVertex) -> list[HVertex]:
    """Stay, or one elementary move: a layer +-1, a level up/down, a cycle step, apex in/out."""
    n = level(v)
    kind, k, c, layers = v
    b = base_level(v)
    out = [v, embed(v)]
    for j, i in enumerate(layers):
        lvl = b + j + 1
        for i2 in (i - 1, i + 1):
            if 0 <= i2 <= height(lvl):
                out.append((kind, k, c, layers[:j] + (i2,) + layers[j + 1:]))
    if layers and layers[-1] <= 1:
        h = (kind, k, c, layers[:-1])
        if not (kind == "C" and k == n and not h[3]):
            out.append(h)
    if kind == "C":
        for c2 in (1, 2, 3):
            if min((c - c2) % 4, (c2 - c) % 4) == 1:
                out.append(("C", k, c2, layers))
        if c in (1, 3):
            out.append(("O", 0, 0, (0,) * (k - 1) + layers))
    if kind == "O":
        z = _zero_prefix(layers)
        # the origin of G_{lvl-1}, wrapped, can step onto the lvl cycle
        for lvl in range(1, min(z + 1, len(layers)) + 1):
            rest = layers[lvl - 1:]
            out.append(("C", lvl, 1, rest))
            out.append(("C", lvl, 3, rest))
    if kind == "V":
        out.append(("O", 0, 0, (0,) * (k - 1) + (height(k),) + layers))
    for j, i in enumerate(layers):
        lvl = b + j + 1
        if i == height(lvl):
            out.append(("V", lvl, 0, layers[j + 1:]))
    seen = set()
    uniq = []
    for m in out:
        if m not in seen:
            seen.add(m)
            uniq.append(m)
    return uniq


def stage_truncation(levels: int) -> tuple[FiniteGraph, tuple]:
    """Finite induced subgraph on all vertices of level <= ``levels``; returns (graph, vertices)."""
    verts = [v for n in range(levels + 1) for v in elements_G(n)]
    verts.sort(key=h_key)
    ids = {v: i for i, v in enumerate(verts)}
    edges = []
    for v in verts:
        i = ids[v]
        for u in closed_union(v):
            j = ids.get(u)
            if j is not None and i < j:
                edges.append((i, j))
    boundary = [ids[v] for v in verts if level(v) == levels]
    g = FiniteGraph.from_edges([h_key(v) for v in verts], edges, f"hgraph-{levels}", boundary)
    return g, tuple(verts)


def g_level_graph(n: int) -> tuple[FiniteGraph, tuple]:
    """G_n on its own (no union edges)."""
    verts = sorted(elements_G(n), key=h_key)
    ids = {v: i for i, v in enumerate(verts)}
    edges = []
    for v in verts:
        for u in closed_G(v):
            if ids[u] > ids[v]:
                edges.append((ids[v], ids[u]))
    return FiniteGraph.from_edges([h_key(v) for v in verts], edges, f"G{n}"), tuple(verts)
