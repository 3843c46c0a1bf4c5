import random
from itertools import islice

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pursuit.constructibility import dominators
from pursuit.families import SpecError, make, make_finite, parse_spec, resolve_graph
from pursuit.families import gee as G
from pursuit.families import hgraph as H
from pursuit.families import kgraphs, products
from pursuit.families.spec import FamilySpec
from pursuit.graph import FiniteGraph, GraphError, bfs_distances

# -- spec strings

_names = st.sampled_from(["K", "path", "cycle", "ppath", "kchain", "x_y"])
_keys = st.text("abcdefgh", min_size=1, max_size=4)
_scalars = st.one_of(st.integers(-5, 50), st.booleans(), st.text("abcxyz", min_size=1, max_size=5))


@st.composite
def specs(draw, depth=2):
    name = draw(_names)
    keys = draw(st.lists(_keys, unique=True, max_size=3))
    params = []
    for k in keys:
        if depth and draw(st.booleans()):
            params.append((k, draw(specs(depth - 1))))
        else:
            params.append((k, draw(_scalars)))
    return FamilySpec(name, tuple(sorted(params)))


@given(specs())
@settings(max_examples=200)
def test_spec_round_trip(spec):
    assert parse_spec(str(spec)) == spec


def test_spec_nested_and_ordering():
    s = parse_spec("ppath?n=6&base={cycle?n=4}")
    assert s.get("base") == FamilySpec("cycle", (("n", 4),))
    assert str(s) == "ppath?base={cycle?n=4}&n=6"


@pytest.mark.parametrize("bad", ["", "?", "K?", "K?a", "K?a=1&a=2", "p?base={cycle?n=4", "p?b=}", "a{b}"])
def test_spec_errors(bad):
    with pytest.raises(SpecError):
        parse_spec(bad)


@pytest.mark.parametrize(
    "bad",
    ["nope", "K?n=3", "path", "path?n=0", "cycle?n=2", "kchain?blocks=0", "kchain?hub=3",
     "gee?stage=6", "hgraph?levels=4", "ppath?base=3&n=2", "ppath?base={gee}&n=2", "path?n=yes"],
)
def test_make_rejects(bad):
    with pytest.raises((SpecError, GraphError)):
        make(bad)


def test_make_finite_refuses_oracles():
    with pytest.raises(SpecError):
        make_finite("gee")


def test_resolve_graph(tmp_path):
    g = make("K")
    p = tmp_path / "k.json"
    p.write_text(g.dumps())
    assert resolve_graph(str(p)).dumps() == g.dumps()
    assert resolve_graph("family:K").dumps() == g.dumps()
    with pytest.raises(GraphError):
        resolve_graph(str(tmp_path / "missing.json"))


# -- K and friends


def test_k_structure():
    g = make("K")
    assert (g.n, g.m) == (7, 14)
    y = g.vid("y")
    assert sorted(g.labels[v] for v in g.closed_neighborhood(y)) == sorted(["x", "y", "z", "z'", "t", "t'"])
    assert [g.labels[v] for v in range(g.n) if dominators(g, v)] == ["x"]
    assert {g.labels[u] for u in dominators(g, "x")} == {"y"}


def test_k_fixture_matches_generator():
    from importlib import resources

    text = resources.files("pursuit").joinpath("data/k_graph.json").read_text()
    assert FiniteGraph.loads(text).dumps() == kgraphs.k_graph().dumps()


@pytest.mark.parametrize(
    "spec,n,m",
    [
        ("two_k", 13, None),
        ("kchain?blocks=3&hub=true", 20, None),
        ("ppath?base={cycle?n=4}&n=6", 28, 102),
        ("gee?stage=1", 4, 4),
        ("gee?stage=2", 28, 102),
        ("gee?stage=3", 112, 214),
        ("gee?stage=4", 784, 10740),
        ("hgraph?levels=2", 395, None),
        ("cycle?n=5", 5, 5),
        ("path?n=4", 4, 3),
    ],
)
def test_sizes(spec, n, m):
    g = make(spec)
    assert g.n == n
    if m is not None:
        assert g.m == m


def test_extend_with_k_adds_a_copy():
    g, a, b = kgraphs.omega_chain(1)
    assert g.n == 2 + 6
    # A-B, then 14 edges of K (y is the old B) and the new x joined to A
    assert g.m == 1 + 14 + 1
    g2, a2, b2 = kgraphs.extend_with_K(g, a, b)
    assert a2 == a and g2.n == g.n + 6
    with pytest.raises(GraphError):
        kgraphs.extend_with_K(g, a, a)


def test_omega1_parts_cover_graph():
    g = make("omega1?blocks=2")
    parts = kgraphs.omega1_parts(2)
    labels = [lab for group in parts.values() for lab in group]
    assert sorted(labels) == sorted(g.labels)


def test_kchain_oracle_agrees_with_truncation_inside():
    o = make("kchain")
    g = make("kchain?blocks=4")
    # away from the cut the finite chain and the oracle agree
    for lab in g.labels:
        v = o.parse(lab)
        if o.block_of(v) in (2, 3) or lab in ("x3",):
            assert sorted(o.key(u) for u in o.neighbors(v)) == sorted(g.labels[u] for u in g.adj[g.vid(lab)])


def test_kchain_oracle_parents_are_neighbours():
    o = make("kchain")
    for key in ["x1", "z1", "z'1", "t1", "t'1", "w1", "x2", "w3"]:
        v = o.parse(key)
        assert o.adjacent(v, o.parent(v)), key
    assert o.trail_hits(o.parse("w1"), [o.parse("x2")]) == 2


def test_kchain_hub_drops_parents():
    assert make("kchain").has_parents
    assert not make("kchain?hub=true").has_parents
    o = make("kchain?direction=two")
    assert o.parse("x-2") in o.neighbors(o.parse("x-3"))


# -- products


def test_ppath_layers():
    g = make("ppath?base={cycle?n=4}&n=3")
    top = [lab for lab in g.labels if lab.endswith(",3)")]
    assert len(top) == 4
    ids = [g.vid(t) for t in top]
    assert all(g.adjacent(a, b) for a in ids for b in ids if a != b)
    assert not g.adjacent(g.vid("(0,0)"), g.vid("(2,0)"))


def test_hive_apex():
    g, apex, levels = products.hive(products.cycle(4), 3)
    assert levels[apex] is None
    assert len(g.adj[apex]) == 4
    assert bfs_distances(g, apex)[g.vid("(0,0)")] == 4


def test_c4dot():
    g = products.c4dot(products.path(2))
    assert (g.n, g.m) == (8, 9)


# -- the coordinate graph

_gee_vertices = st.dictionaries(st.integers(1, 7), st.integers(0, 6), max_size=5).map(
    lambda d: G.make_vertex({p: (v % 4 if p % 2 else v) for p, v in d.items()})
)


@given(_gee_vertices, _gee_vertices)
@settings(max_examples=400)
def test_gee_adjacency_matches_reference(a, b):
    assert G.gee_adjacent(a, b) == G.gee_adjacent_reference(a, b)
    assert G.gee_adjacent(a, b) == G.gee_adjacent(b, a)


@given(_gee_vertices)
@settings(max_examples=200)
def test_gee_key_round_trip_and_menu_is_legal(v):
    assert G.parse_gee_key(G.gee_key(v)) == v
    o = G.GeeOracle()
    for m in o.closed_moves(v, ((( 3, 1),),)):
        assert m == v or G.gee_adjacent(v, m)


def test_gee_key_rejects_noncanonical():
    for bad in ["2=1;1=1", "1=0", "1=4", "2=7", "x", "1=1;1=2"]:
        with pytest.raises(GraphError):
            G.parse_gee_key(bad)


def test_gee_stage2_is_ppath_over_c4():
    g = make("gee?stage=2")
    p = make("ppath?base={cycle?n=4}&n=6")
    mapping = {g.vid(lab): p.vid(G.stage_to_ppath_label(G.parse_gee_key(lab))) for lab in g.labels}
    assert len(set(mapping.values())) == p.n
    for u, v in g.edges():
        assert p.adjacent(mapping[u], mapping[v])
    assert g.m == p.m


def test_gee_zero_distance_bound_is_a_lower_bound():
    g = make("gee?stage=3")
    d = bfs_distances(g, g.vid("0"))
    verts = [G.parse_gee_key(lab) for lab in g.labels]
    for i, v in enumerate(verts):
        assert G.zero_distance_bound(v) <= d[i]
    for a, b in g.edges():
        assert abs(G.zero_distance_bound(verts[a]) - G.zero_distance_bound(verts[b])) <= 1


def test_gee_six_is_far_from_zero():
    g = make("gee?stage=4")
    d = bfs_distances(g, g.vid("0"))
    for i, lab in enumerate(g.labels):
        if G.has_six(G.parse_gee_key(lab)):
            assert d[i] >= 6


def test_gee_zero_neighbours():
    assert G.gee_adjacent(G.ZERO, ((1, 1),))
    assert not G.gee_adjacent(G.ZERO, ((1, 2),))


# -- the hive union


def test_hgraph_level_sizes():
    assert H.size_G(1) == 33
    assert H.size_G(2) == 361
    assert sum(1 for _ in H.elements_G(2)) == 361


def test_hgraph_keys_round_trip():
    for v in islice(H.elements_G(2), 0, None, 7):
        assert H.parse_h_key(H.h_key(v)) == v


@pytest.fixture(scope="module")
def h2():
    return H.stage_truncation(2)


def test_hgraph_adjacency_consistent(h2):
    g, verts = h2
    for i, v in enumerate(verts):
        nb = {verts[j] for j in g.adj[i]}
        union = set(H.closed_union(v)) - {v}
        assert nb == {u for u in union if H.level(u) <= 2}
        for u in nb:
            assert H.adjacent(v, u) and H.adjacent(u, v)
        assert H.count_closed_union(v) == len(set(H.closed_union(v)))


def test_hgraph_potential_is_spine_lower_bound(h2):
    g, verts = h2
    pot = [H.potential(v) for v in verts]
    for a, b in g.edges():
        assert abs(pot[a] - pot[b]) <= 1
    for i, v in enumerate(verts):
        if H.on_spine(v):
            assert pot[i] == 0


def test_hgraph_menu_and_sampling(h2):
    _, verts = h2
    rng = random.Random(5)
    for v in verts[::5]:
        closed = set(H.closed_union(v))
        assert set(H.moves_menu(v)) <= closed
        for _ in range(3):
            assert H.sample_closed_union(v, rng) in closed


def test_hgraph_hive_distance_lemma():
    for m in (1, 2):
        g, verts = H.g_level_graph(m)
        d = bfs_distances(g, verts.index(H.hive_vertex(m)))
        assert d[verts.index(H.origin(m))] == H.height(m) + 1


def test_hgraph_projection_fixes_low_levels():
    for v in islice(H.elements_G(1), 0, None, 3):
        assert H.project(v, 1) == v
