import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import connected_graphs
from pursuit.families import make
from pursuit.families.gee import GeeOracle
from pursuit.graph import (
    BudgetExceeded,
    FiniteGraph,
    GraphError,
    bfs_distances,
    distance,
    load_graph,
    materialize,
    materialize_set,
    save_graph,
)


def test_from_edges_sorts_and_symmetrizes():
    g = FiniteGraph.from_edges(["a", "b", "c"], [(2, 0), (0, 1)], "tri-ish")
    assert g.adj == ((1, 2), (0,), (0,))
    assert g.m == 2
    assert g.adjacent(0, 2) and g.adjacent(2, 0)
    assert not g.adjacent(1, 2)


def test_rejects_bad_input():
    with pytest.raises(GraphError):
        FiniteGraph.from_edges(["a", "a"], [])
    with pytest.raises(GraphError):
        FiniteGraph.from_edges(["a", "b"], [(1, 1)])
    with pytest.raises(GraphError):
        FiniteGraph(("a", "b"), ((1,), ()))


def test_vid_accepts_labels_and_ids():
    g = make("K")
    assert g.vid("y") == g.vid(g.vid("y"))
    with pytest.raises(GraphError):
        g.vid("nope")
    with pytest.raises(GraphError):
        g.vid(99)


def test_json_round_trip(tmp_path):
    g = make("two_k")
    path = tmp_path / "g.json"
    save_graph(g, path)
    assert load_graph(path).dumps() == g.dumps()
    data = json.loads(path.read_text())
    assert data["format"] == "pursuit-graph-v1"
    assert data["edges"] == sorted(data["edges"])


def test_json_rejects_unsorted_edges():
    data = make("K").to_json()
    data["edges"] = list(reversed(data["edges"]))
    with pytest.raises(GraphError):
        FiniteGraph.from_json(data)
    data = make("K").to_json()
    data["format"] = "something-else"
    with pytest.raises(GraphError):
        FiniteGraph.from_json(data)


def test_dot_marks_boundary():
    t = materialize(make("kchain"), [make("kchain").parse("x1")], 2)
    dot = t.graph.to_dot()
    assert dot.startswith("graph ")
    assert "dashed" in dot


def test_induced_and_without():
    g = make("K")
    h, ids = g.without("x")
    assert h.n == 6 and "x" not in h.labels
    assert h.m == g.m - len(g.adj[g.vid("x")])
    sub, keep = g.induced(["y", "z", "w"])
    assert [g.labels[i] for i in keep] == ["y", "z", "w"]


@given(connected_graphs(max_n=8), st.integers(0, 7), st.integers(0, 7))
@settings(max_examples=150, deadline=None)
def test_distance_matches_bfs(g, a, b):
    a %= g.n
    b %= g.n
    d = bfs_distances(g, a)[b]
    assert distance(g, a, b, g.n + 1) == d
    assert distance(g, a, b, d) is None
    # the zero function is a trivially admissible bound
    assert distance(g, a, b, g.n + 1, lower_bound=lambda v: 0) == d


@given(connected_graphs(max_n=8), st.integers(0, 7), st.integers(0, 7))
@settings(max_examples=100, deadline=None)
def test_astar_with_exact_bound_is_exact(g, a, b):
    a %= g.n
    b %= g.n
    to_b = bfs_distances(g, b)
    assert distance(g, a, b, g.n + 1, lower_bound=lambda v: to_b[v]) == to_b[a]


def test_distance_budget_raises():
    g = make("path?n=50")
    with pytest.raises(BudgetExceeded):
        distance(g, "0", "49", 100, budget=10)


def test_distance_to_predicate_on_oracle():
    o = make("kchain")
    x3 = o.parse("x3")
    # x2 plays y for the first copy, so it sees both x1 and x3
    assert distance(o, x3, lambda v: o.key(v) == "x1", 20) == 2
    assert distance(o, x3, lambda v: o.key(v) == "x1", 2) is None


def test_materialize_ball_is_induced():
    o = GeeOracle(2)
    t = materialize(o, [()], 1)
    assert t.graph.n == 1 + len(o.neighbors(()))
    for i, v in enumerate(t.vertices):
        for j, u in enumerate(t.vertices):
            assert t.graph.adjacent(i, j) == o.adjacent(v, u)


def test_materialize_set_on_infinite_degree_marks_everything_boundary():
    o = make("gee")
    t = materialize_set(o, [(), ((1, 1),), ((2, 1),)])
    assert t.graph.boundary == frozenset(range(3))
    with pytest.raises(GraphError):
        materialize(o, [()], 1)


def test_oracle_random_closed_neighbor_stays_close():
    o = make("kchain")
    rng = random.Random(3)
    v = o.parse("z2")
    for _ in range(50):
        u = o.random_closed_neighbor(v, rng)
        assert u == v or o.adjacent(v, u)
