import itertools
import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import connected_graphs, constructible_graphs
from pursuit.constructibility import (
    Certificate,
    CertificateError,
    can_be_last,
    dismantle,
    dismantle_random,
    dominators,
    homomorphism_failures,
    is_constructible,
    is_homomorphism,
    order_exists_with_prefix,
    random_constructible,
    search_hom,
    valid_roots,
    validate,
)
from pursuit.families import make
from pursuit.graph import FiniteGraph, GraphError


def closed(g, v):
    return set(g.adj[v]) | {v}


def all_certificates(g: FiniteGraph):
    """Every (order, parents) pair, built forwards; independent of the library."""
    out = []

    def grow(order, parents, present):
        if len(order) == g.n:
            out.append(Certificate(tuple(order), dict(parents)))
            return
        for v in range(g.n):
            if v in present:
                continue
            now = present | {v}
            need = closed(g, v) & now
            for p in sorted(present):
                if need <= closed(g, p):
                    parents[v] = p
                    order.append(v)
                    grow(order, parents, now)
                    order.pop()
                    del parents[v]

    for r in range(g.n):
        grow([r], {}, {r})
    return out


def homomorphic(g, cert):
    root = cert.order[0]
    for u, v in g.edges():
        if root in (u, v):
            continue
        a, b = cert.parents[u], cert.parents[v]
        if a != b and not g.adjacent(a, b):
            return False
    return True


# -- dismantling


def test_k_elimination_is_greedy_lowest_id():
    g = make("K")
    res = dismantle(g)
    assert res.constructible
    steps = [(g.labels[v], g.labels[p]) for v, p in res.elimination]
    assert steps == [("x", "y"), ("t", "z"), ("y", "z'"), ("z", "z'"), ("z'", "t'"), ("t'", "w")]
    assert validate(g, res.certificate) is None


def test_two_k_starts_with_the_joined_x():
    g = make("two_k")
    steps = [(g.labels[v], g.labels[p]) for v, p in dismantle(g).elimination]
    assert steps[:2] == [("x2", "x1"), ("t2", "z2")]


def test_c4_is_stuck_with_itself_as_witness():
    g = make("cycle?n=4")
    res = dismantle(g)
    assert not res.constructible
    assert res.certificate is None
    assert res.witness.n == 4 and len(res.witness_ids) == 4


def test_dismantle_needs_connected():
    g = FiniteGraph.from_edges(["a", "b"], [])
    with pytest.raises(GraphError):
        dismantle(g)


@given(constructible_graphs(max_n=14), st.integers(0, 1000))
@settings(max_examples=100, deadline=None)
def test_generated_graphs_dismantle_in_any_order(g, seed):
    assert is_constructible(g)
    res = dismantle_random(g, seed)
    assert res.constructible
    assert validate(g, res.certificate) is None


@given(connected_graphs(max_n=7))
@settings(max_examples=150, deadline=None)
def test_greedy_agrees_with_exhaustive(g):
    assert is_constructible(g) == bool(all_certificates(g))


@given(connected_graphs(max_n=6))
@settings(max_examples=80, deadline=None)
def test_can_be_last_and_roots_match_enumeration(g):
    certs = all_certificates(g)
    lasts = {c.order[-1] for c in certs}
    roots = {c.order[0] for c in certs}
    for v in range(g.n):
        assert can_be_last(g, v) == (v in lasts)
    assert set(valid_roots(g)) == roots


@given(connected_graphs(min_n=2, max_n=6), st.data())
@settings(max_examples=80, deadline=None)
def test_prefix_search_matches_enumeration(g, data):
    k = data.draw(st.integers(1, g.n))
    prefix = data.draw(st.permutations(range(g.n)))[:k]
    expected = any(set(c.order[:k]) == set(prefix) for c in all_certificates(g))
    assert order_exists_with_prefix(g, prefix) == expected


def test_k_only_x_can_be_last():
    g = make("K")
    assert [g.labels[v] for v in range(g.n) if can_be_last(g, v)] == ["x"]


def test_omega1_prefix_obstruction():
    from pursuit.families.kgraphs import omega1_parts

    g = make("omega1?blocks=2")
    parts = omega1_parts(2)
    assert not order_exists_with_prefix(g, parts["A"] + parts["K1"] + parts["B"])
    assert order_exists_with_prefix(g, parts["A"] + parts["K1"] + parts["K2"])
    assert can_be_last(g, "B")
    assert not can_be_last(g, "w1")


# -- certificates


def test_validate_diagnostics():
    g = make("K")
    good = dismantle(g).certificate
    bad_perm = Certificate(good.order[:-1], good.parents)
    assert "permutation" in validate(g, bad_perm).reason
    parents = dict(good.parents)
    del parents[good.order[3]]
    assert validate(g, Certificate(good.order, parents)) == validate(g, Certificate(good.order, parents))
    assert validate(g, Certificate(good.order, parents)).reason == "incomplete parents"
    # swap the root and the last vertex: the new last vertex is no longer dominated
    order = list(good.order)
    swapped = Certificate(tuple(reversed(order)), {order[0]: order[1], **{v: order[0] for v in order[1:-1]}})
    assert validate(g, swapped) is not None


def test_certificate_json_round_trip():
    g = make("two_k")
    cert = dismantle(g).certificate
    data = json.loads(json.dumps(cert.to_json(g)))
    assert set(data) == {"order", "parents"}
    assert Certificate.from_json(g, data) == cert
    with pytest.raises(CertificateError):
        Certificate.from_json(g, {"order": data["order"]})


def test_homomorphism_failures_reject_invalid_certificate():
    g = make("K")
    cert = dismantle(g).certificate
    broken = Certificate(cert.order, {})
    with pytest.raises(CertificateError):
        homomorphism_failures(g, broken)


# -- homomorphism search


def test_two_k_has_no_homomorphic_certificate():
    g = make("two_k")
    res = search_hom(g, time_budget=60)
    assert res.status == "none"
    assert res.seconds < 60


def count_certificates(g):
    """Subset DP over bitmasks: (all certificates, homomorphic ones by pruned DFS)."""
    closed_mask = [sum(1 << u for u in g.adj[v]) | 1 << v for v in range(g.n)]
    full = (1 << g.n) - 1
    ways = [0] * (full + 1)
    for r in range(g.n):
        ways[1 << r] = 1
    for s in range(1, full + 1):
        if not ways[s]:
            continue
        for v in range(g.n):
            if s >> v & 1:
                continue
            t = s | 1 << v
            need = closed_mask[v] & t
            ways[t] += ways[s] * sum(1 for p in range(g.n) if s >> p & 1 and need & ~closed_mask[p] == 0)

    hom = 0

    def grow(s, root, parents):
        nonlocal hom
        if s == full:
            hom += 1
            return
        for v in range(g.n):
            if s >> v & 1:
                continue
            t = s | 1 << v
            need = closed_mask[v] & t
            for p in range(g.n):
                if not (s >> p & 1 and need & ~closed_mask[p] == 0):
                    continue
                ok = all(
                    u == root or parents[u] == p or g.adjacent(parents[u], p)
                    for u in g.adj[v] if s >> u & 1
                )
                if ok:
                    parents[v] = p
                    grow(t, root, parents)
                    del parents[v]

    for r in range(g.n):
        grow(1 << r, r, {})
    return ways[full], hom


def test_bitmask_counts_agree_with_enumeration():
    g = make("K")
    assert count_certificates(g) == (448, 286)


def test_k_brute_force_counts():
    g = make("K")
    certs = all_certificates(g)
    assert len(certs) == 448
    assert sum(homomorphic(g, c) for c in certs) == 286
    res = search_hom(g)
    assert res.status == "found" and is_homomorphism(g, res.certificate)


@pytest.mark.parametrize("spec", ["cycle?n=3", "path?n=2", "path?n=5", "kchain?blocks=1"])
def test_positive_controls(spec):
    g = make(spec)
    res = search_hom(g)
    assert res.status == "found"
    assert validate(g, res.certificate) is None
    assert homomorphic(g, res.certificate)


def test_kchain_two_blocks_has_none():
    assert search_hom(make("kchain?blocks=2")).status == "none"


@given(constructible_graphs(min_n=2, max_n=7))
@settings(max_examples=60, deadline=None)
def test_search_matches_brute_force(g):
    res = search_hom(g, time_budget=30)
    certs = all_certificates(g)
    assert res.status == ("found" if any(homomorphic(g, c) for c in certs) else "none")
    if res.status == "found":
        assert homomorphic(g, res.certificate)


def test_none_means_random_dismantlings_fail():
    g = make("two_k")
    assert search_hom(g).status == "none"
    for seed in range(100):
        cert = dismantle_random(g, seed).certificate
        assert not is_homomorphism(g, cert)


def test_search_budget_reports_budget():
    g = random_constructible(40, random.Random(1), 0.9)
    res = search_hom(g, time_budget=None, node_budget=5)
    assert res.status in ("budget", "found")
    if res.status == "budget":
        assert res.certificate is None


def test_dominators_of_isolated_pair():
    g = make("path?n=2")
    assert dominators(g, 0) == {1} and dominators(g, 1) == {0}


def test_exhaustive_counts_are_stable():
    # certificates on a triangle: 3 roots, 2 orders of the rest, each added vertex has 1 or 2 parents
    g = make("cycle?n=3")
    assert len(all_certificates(g)) == 3 * 2 * 1 * 2
    assert len(list(itertools.permutations(range(3)))) == 6
