import json

import pytest

from pursuit.arena import Arena, play
from pursuit.families import SpecError, make
from pursuit.families import gee as G
from pursuit.families import hgraph as H
from pursuit.graph import GraphError
from pursuit.strategies import (
    COPS,
    ROBBERS,
    InvariantViolation,
    StrategyError,
    check_claims,
    make_strategy,
    strategy_names,
)


def game(spec, cop, robber, horizon=200, seed=0, marks=()):
    arena = Arena.from_spec("family:" + spec)
    c, r = make_strategy(cop, "cop"), make_strategy(robber, "robber")
    return play(arena, c, r, horizon, seed, marks), c, r


# -- registry


def test_registry_names():
    assert strategy_names("cop") == sorted(set(COPS) | {"random"})
    assert "k-escape" in strategy_names("robber")
    assert make_strategy("random?window=2", "cop").spec == "random?window=2"
    assert make_strategy("trail?strict=false", "cop").params == {"strict": False}


def test_registry_errors():
    with pytest.raises(SpecError):
        make_strategy("k-escape", "cop")
    with pytest.raises(SpecError):
        make_strategy("bogus", "robber")
    with pytest.raises(ValueError):
        make_strategy("random", "referee")


def test_family_bound_strategies_refuse_other_arenas():
    with pytest.raises(GraphError):
        game("K", "gee", "random")
    with pytest.raises(StrategyError):
        game("gee", "solver", "random")
    with pytest.raises(StrategyError):
        game("kchain?blocks=2", "chain-script", "random")


# -- finite arenas


def test_shadow_survives_on_c4():
    tr, _, _ = game("cycle?n=4", "shortest-path", "shadow", 500)
    assert tr.outcome["outcome"] == "horizon"


def test_solver_robber_survives_on_c4_and_loses_on_k():
    tr, _, _ = game("cycle?n=4", "solver", "solver", 100)
    assert tr.outcome["outcome"] == "horizon"
    tr, _, _ = game("K", "solver", "solver", 100)
    assert tr.captured and tr.positions("robber")[-1] == "x"


def test_k_escape_is_caught_at_x():
    tr, _, r = game("K", "solver", "k-escape", 100)
    assert tr.captured
    assert tr.positions("robber")[-1] == "x"
    assert r.reached_x


def test_k_escape_needs_a_copy():
    with pytest.raises(StrategyError):
        game("cycle?n=5", "random", "k-escape")


@pytest.mark.parametrize("spec", ["K", "two_k", "kchain?blocks=3&hub=true", "ppath?base={cycle?n=4}&n=4"])
@pytest.mark.parametrize("robber", ["shadow", "solver", "random"])
def test_trail_cop_captures_within_n_squared(spec, robber):
    n = make(spec).n
    tr, cop, _ = game(spec, "trail", robber, n * n + 2 * n, seed=4)
    assert tr.captured
    # every revisit lowered the trail index
    seen = {}
    for v, k in cop.log:
        if v in seen:
            assert k < seen[v]
        seen[v] = k


def test_trail_cop_refuses_a_cop_win_free_graph():
    with pytest.raises(StrategyError):
        game("cycle?n=5", "trail", "random")


def test_trail_cop_with_certificate_file(tmp_path):
    from pursuit.constructibility import dismantle

    g = make("two_k")
    p = tmp_path / "c.json"
    p.write_text(json.dumps(dismantle(g).certificate.to_json(g)))
    tr, _, _ = game("two_k", f"trail?cert={p}", "solver", 200)
    assert tr.captured


@pytest.mark.parametrize("spec", ["K", "two_k", "omega1?blocks=2"])
def test_consistent_cop_captures(spec):
    tr, cop, _ = game(spec, "consistent", "solver", 300, seed=1)
    assert tr.captured
    # once Case 1 starts it never stops
    cases = cop.cases
    if 1 in cases:
        assert all(c == 1 for c in cases[cases.index(1):])


def test_consistent_cop_on_the_chain_oracle():
    tr, cop, _ = game("kchain", "consistent", "random", 400, seed=2)
    assert tr.outcome["outcome"] in ("capture", "horizon")
    cases = cop.cases
    if 1 in cases:
        assert all(c == 1 for c in cases[cases.index(1):])


def test_consistent_cop_needs_parents():
    with pytest.raises(StrategyError):
        game("kchain?hub=true", "consistent", "random")


@pytest.mark.parametrize("blocks", [2, 3, 4])
@pytest.mark.parametrize("robber", ["solver", "shadow", "random"])
def test_chain_script_claims_hold(blocks, robber):
    tr, cop, _ = game(f"kchain?blocks={blocks}&hub=true", "chain-script", robber, 500, seed=blocks)
    assert tr.captured
    assert check_claims(cop) == []


def test_chain_script_makes_claims_against_the_solver():
    tr, cop, _ = game("kchain?blocks=3&hub=true", "chain-script", "solver", 500)
    assert tr.captured and cop.claims and not cop.off_script


# -- oracles


def test_random_window_keeps_walks_low():
    tr, _, _ = game("gee", "random", "random", 400, seed=5)
    assert tr.outcome["metrics"]["cop_potential_max"] <= 8
    assert tr.outcome["metrics"]["robber_potential_max"] <= 8
    tr, _, _ = game("hgraph", "random", "random", 200, seed=5)
    assert tr.outcome["metrics"]["cop_potential_max"] <= 3


def test_random_window_override():
    tr, _, _ = game("gee", "random?start=0&window=2", "random?start=1=2&window=2", 200, seed=5)
    assert tr.outcome["metrics"]["cop_potential_max"] <= 2


def test_random_exact_mode_on_a_locally_finite_oracle():
    tr, _, _ = game("kchain", "random?mode=exact", "random?mode=exact", 200, seed=1)
    assert tr.outcome["outcome"] in ("capture", "horizon")


@pytest.mark.parametrize("cop", ["random", "shortest-path", "gee"])
def test_gee_robber_survives(cop):
    tr, _, rob = game("gee", cop, "gee", 2000, seed=7, marks=["0"])
    assert tr.outcome["outcome"] == "horizon", tr.outcome
    m = tr.outcome["metrics"]
    assert m["confined"] or m["marks"]["0"]["arrivals"] >= 5
    assert all(d >= 6 for d in rob.stage2_entry_distance)


def test_gee_robber_placement_and_memory():
    arena = Arena.from_spec("family:gee")
    rob = make_strategy("gee", "robber")
    import random

    rob.reset(arena, random.Random(0))
    cop = G.make_vertex({2: 5, 3: 1})
    w = rob.place(cop)
    assert w == ((5, 2),)
    assert rob.memory() == {"stage": 1, "m": 5}


def test_gee_robber_check_catches_bad_states():
    import random

    rob = make_strategy("gee", "robber")
    rob.reset(Arena.from_spec("family:gee"), random.Random(0))
    rob.m = 1
    with pytest.raises(InvariantViolation):
        rob._check(((1, 1),), ((1, 2),))


@pytest.mark.parametrize("cop", ["random", "shortest-path", "hgraph"])
def test_h_robber_survives(cop):
    tr, _, rob = game("hgraph", cop, "hgraph", 1000, seed=3, marks=[H.h_key(H.origin(0))])
    assert tr.outcome["outcome"] == "horizon", tr.outcome
    assert not any(e["spine_distance_ok"] is False for e in rob.entries)


def test_h_climber_reaches_the_hive():
    tr, cop, rob = game("hgraph", "hgraph", "hgraph", 1000, seed=0)
    assert any(e["order"] >= 1 for e in rob.entries)


def test_cycle_helpers():
    from pursuit.strategies.hgraph import _robber_position, cycle_position, cycle_vertex_at

    assert cycle_vertex_at(2, 0) == H.origin(2)
    assert cycle_position(H.origin(1), 2) == 0
    for pos in range(1, 4):
        assert _robber_position(cycle_vertex_at(2, pos), 2) == pos
        assert cycle_position(("C", 2, pos, ()), 2) == pos
    assert cycle_position(H.origin(0), 2) is None
