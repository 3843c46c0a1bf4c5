"""The theorem-surrogate suite behind ``pursuit paper-suite`` and the acceptance tests.

Each check returns a :class:`CheckResult`; ``quick`` shrinks seed counts and
horizons but never the exhaustive or exact parts.
"""

from __future__ import annotations

import json
import random
import tempfile
import time
import traceback
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable

from .arena import Arena, Transcript, play, replay
from .constructibility import (
    Certificate,
    can_be_last,
    dismantle,
    dominators,
    is_constructible,
    order_exists_with_prefix,
    random_constructible,
    search_hom,
    validate,
)
from .families import gee as G
from .families import hgraph as H
from .families import kgraphs, make, make_finite
from .graph import FiniteGraph, bfs_distances, distance
from .solver import solve
from .strategies import check_claims, make_strategy
from .sweep import equivalence_sweep


@dataclass
class CheckResult:
    number: int
    title: str
    ok: bool
    detail: str = ""
    seconds: float = 0.0
    data: dict[str, Any] = field(default_factory=dict)

    def line(self) -> str:
        return f"[{'PASS' if self.ok else 'FAIL'}] {self.number:2d} {self.title}: {self.detail} ({self.seconds:.1f}s)"


def _finish(number: int, title: str, start: float, problems: list[str], detail: str, data=None) -> CheckResult:
    ok = not problems
    text = detail if ok else "; ".join(problems[:5])
    return CheckResult(number, title, ok, text, time.perf_counter() - start, data or {})


# 1


def check_equivalence(quick: bool = False) -> CheckResult:
    t0 = time.perf_counter()
    rep = equivalence_sweep(6)
    problems = [f"disagreement on {g.name}" for g in rep.exceptions]
    if rep.seconds >= 120:
        problems.append(f"sweep took {rep.seconds:.1f}s")
    detail = f"{rep.total} connected graphs on <= 6 vertices, 0 disagreements, {rep.seconds:.1f}s"
    return _finish(1, "dismantlable == cop-win on <= 6 vertices", t0, problems, detail,
                   {"counts": rep.counts, "copwin": rep.copwin, "seconds": rep.seconds})


# 2

K_ELIMINATION = (("x", "y"), ("t", "z"), ("y", "z'"), ("z", "z'"), ("z'", "t'"), ("t'", "w"))


def check_k(quick: bool = False) -> CheckResult:
    t0 = time.perf_counter()
    g = make_finite("K")
    problems = []
    dominated = [g.labels[v] for v in range(g.n) if dominators(g, v)]
    if dominated != ["x"]:
        problems.append(f"dominated vertices {dominated}")
    doms = sorted(g.labels[u] for u in dominators(g, "x"))
    if doms != ["y"]:
        problems.append(f"dominators of x {doms}")
    y = g.vid("y")
    missed = sorted(g.labels[v] for v in range(g.n) if v != y and not g.adjacent(y, v))
    if missed != ["w"]:
        problems.append(f"y misses {missed}")
    removed = [v for v, _ in K_ELIMINATION]
    order = [g.vid("w")] + [g.vid(v) for v in reversed(removed)]
    cert = Certificate(tuple(order), {g.vid(v): g.vid(p) for v, p in K_ELIMINATION})
    diag = validate(g, cert)
    if diag is not None:
        problems.append(f"stated elimination rejected: {diag}")
    last = [g.labels[v] for v in range(g.n) if can_be_last(g, v)]
    if last != ["x"]:
        problems.append(f"possible last vertices {last}")
    sol = solve(g)
    if not sol.copwin:
        problems.append("solver says K is robber-win")
    arena = Arena(g, "family:K")
    for seed in range(3):
        for robber in ("solver", "k-escape"):
            tr = play(arena, make_strategy("solver", "cop"), make_strategy(robber, "robber"), 50, seed)
            if tr.outcome["outcome"] != "capture" or tr.events[-1][2] != "x":
                problems.append(f"{robber} robber not caught at x (seed {seed}): {tr.outcome['outcome']} at {tr.events[-1][2]}")
    return _finish(2, "K suite", t0, problems, f"x unique dominated, y unique dominator, elimination valid, capture at x in {sol.capture_time}")


# 3


def check_search_hom(quick: bool = False) -> CheckResult:
    t0 = time.perf_counter()
    problems = []
    two = make_finite("two_k")
    res = search_hom(two, time_budget=60.0)
    if res.status != "none":
        problems.append(f"two_k search gave {res.status}")
    if res.seconds >= 60:
        problems.append(f"two_k search took {res.seconds:.1f}s")
    controls = {}
    for spec in ("cycle?n=3", "path?n=2", "path?n=4", "path?n=6", "K"):
        g = make_finite(spec)
        r = search_hom(g, time_budget=60.0)
        controls[spec] = r.status
        if r.status != "found":
            problems.append(f"{spec}: {r.status}")
    detail = f"two_k none after {res.nodes} nodes in {res.seconds:.2f}s; controls found"
    return _finish(3, "no domination map of two_k is a homomorphism", t0, problems, detail,
                   {"two_k": res.to_json(two), "controls": controls})


# 4


def check_chain(quick: bool = False) -> CheckResult:
    t0 = time.perf_counter()
    problems = []
    info = {}
    for b in (2, 3, 4):
        spec = f"kchain?blocks={b}&hub=true"
        g = make_finite(spec)
        sol = solve(g)
        if not sol.copwin:
            problems.append(f"blocks={b}: solver says robber-win")
        cop = make_strategy("chain-script", "cop")
        tr = play(Arena(g, "family:" + spec), cop, make_strategy("solver", "robber"), 200, 0)
        if tr.outcome["outcome"] != "capture":
            problems.append(f"blocks={b}: {tr.outcome['outcome']}")
        bad = check_claims(cop)
        if bad:
            problems.append(f"blocks={b}: {len(bad)} forced-move claims wrong")
        if not cop.claims:
            problems.append(f"blocks={b}: no forced moves exercised")
        info[b] = {"capture_turn": tr.outcome["turn"], "claims": len(cop.claims), "solver_time": sol.capture_time}
    detail = ", ".join(f"blocks={b}: caught at {v['capture_turn']}, {v['claims']} claims" for b, v in info.items())
    return _finish(4, "scripted chase on K chains with a hub", t0, problems, detail, {"blocks": info})


# 5


def check_omega1(quick: bool = False) -> CheckResult:
    t0 = time.perf_counter()
    g = make_finite("omega1?blocks=2")
    parts = kgraphs.omega1_parts(2)
    bad_prefix = parts["A"] + parts["K1"] + parts["B"]
    good_prefix = parts["A"] + parts["K1"] + parts["K2"]
    a = order_exists_with_prefix(g, bad_prefix)
    b = order_exists_with_prefix(g, good_prefix)
    problems = []
    if a:
        problems.append("A, K1, B extends to a construction order")
    if not b:
        problems.append("A, K1, K2 does not extend")
    return _finish(5, "prefix obstruction on omega1 with two blocks", t0, problems, "A+K1+B: no order; A+K1+K2: order exists")


# 6


def check_trail(quick: bool = False) -> CheckResult:
    t0 = time.perf_counter()
    seeds = 40 if quick else 200
    problems = []
    longest = revisits = 0
    for seed in range(seeds):
        rng = random.Random(f"trail-graph/{seed}")
        n = rng.randint(5, 25)
        g = random_constructible(n, rng, keep=rng.choice((0.3, 0.5, 0.8)))
        arena = Arena(g, f"random-constructible/{seed}")
        cop = make_strategy("trail", "cop")
        try:
            tr = play(arena, cop, make_strategy("random", "robber"), n * n + 2 * n, seed)
        except AssertionError as exc:
            problems.append(f"seed {seed}: {exc}")
            continue
        if tr.outcome["outcome"] != "capture":
            problems.append(f"seed {seed}: {tr.outcome['outcome']} {tr.outcome.get('detail', '')}")
        longest = max(longest, tr.outcome["turn"])
        revisits += len(cop.log) - len({v for v, _ in cop.log})
    return _finish(6, "trail cop on random constructible graphs", t0, problems,
                   f"{seeds} graphs, all captured, never stuck, longest game {longest} turns, {revisits} revisits checked")


# 7


def check_ppath(quick: bool = False) -> CheckResult:
    t0 = time.perf_counter()
    problems = []
    for n in (3, 6):
        if not is_constructible(make_finite(f"ppath?base={{cycle?n=4}}&n={n}")):
            problems.append(f"n={n} not constructible")
    g = make_finite("ppath?base={cycle?n=4}&n=3")
    top = [lab for lab in g.labels if lab.endswith(",3)")]
    free = solve(g)
    blocked = solve(g, forbidden_cop=top)
    if not free.copwin:
        problems.append("n=3 robber-win without restriction")
    if blocked.copwin:
        problems.append("n=3 still cop-win with the top layer forbidden")
    return _finish(7, "path products over C4", t0, problems,
                   f"n=3,6 constructible; n=3 cop-win in {free.capture_time}, robber-win with {len(top)} top vertices forbidden")


# 8

GEE_COPS = ("random", "shortest-path", "gee")


def check_gee(quick: bool = False) -> CheckResult:
    t0 = time.perf_counter()
    problems = []
    verdicts = [is_constructible(G.gee_stage(k)) for k in (1, 2, 3, 4)]
    if verdicts != [False, True, False, True]:
        problems.append(f"stage verdicts {verdicts}")
    seeds = 3 if quick else 20
    horizon = 10_000 if quick else 100_000
    arena = Arena.from_spec("family:gee")
    summary = {}
    entry = []
    for cop_spec in GEE_COPS:
        runs = []
        for seed in range(seeds):
            robber = make_strategy("gee", "robber")
            try:
                tr = play(arena, make_strategy(cop_spec, "cop"), robber, horizon, seed, marks=["0"])
            except AssertionError as exc:
                problems.append(f"{cop_spec} seed {seed}: {exc}")
                continue
            out = tr.outcome
            m = out["metrics"]
            zero = m["marks"]["0"]["arrivals"]
            if out["outcome"] != "horizon":
                problems.append(f"{cop_spec} seed {seed}: {out['outcome']} at {out['turn']} {out.get('detail', '')}")
            elif not (m.get("confined") or zero >= 5):
                problems.append(f"{cop_spec} seed {seed}: neither confined nor 5 returns ({zero})")
            entry.extend(robber.stage2_entry_distance)
            if any(d < 6 for d in robber.stage2_entry_distance):
                problems.append(f"{cop_spec} seed {seed}: cop within 6 of zero at a stage-2 entry")
            runs.append((zero, bool(m.get("confined"))))
        summary[cop_spec] = runs
    parts = []
    for c, runs in summary.items():
        conf = sum(1 for _, f in runs if f)
        parts.append(f"{c}: {len(runs)} survived, {conf} confined, min returns {min((z for z, _ in runs), default=0)}")
    detail = f"stages NC/C/NC/C; {horizon} turns x {seeds} seeds; " + "; ".join(parts)
    data = {"seeds": seeds, "horizon": horizon, "min_entry_distance": min(entry, default=None),
            "runs": {c: len(r) for c, r in summary.items()}}
    return _finish(8, "coordinate graph: alternation and robber survival", t0, problems, detail, data)


# 9

H_COPS = ("random", "shortest-path", "hgraph")


def spine_distances_stage2() -> dict[str, int]:
    """Distance to the spine of every order-1 hive-type vertex, read in the level <= 2 truncation."""
    g, verts = H.stage_truncation(2)
    spine = [i for i, v in enumerate(verts) if H.on_spine(v)]
    # multi-source BFS from the spine
    dist = [-1] * g.n
    frontier = list(spine)
    for i in spine:
        dist[i] = 0
    while frontier:
        nxt = []
        for v in frontier:
            for u in g.adj[v]:
                if dist[u] < 0:
                    dist[u] = dist[v] + 1
                    nxt.append(u)
        frontier = nxt
    return {g.labels[i]: dist[i] for i, v in enumerate(verts) if H.hive_order(v) == 1}


def check_hgraph(quick: bool = False) -> CheckResult:
    t0 = time.perf_counter()
    problems = []
    lemma = {}
    for m in (1, 2):
        g, verts = H.g_level_graph(m)
        d = bfs_distances(g, verts.index(H.hive_vertex(m)))[verts.index(H.origin(m))]
        lemma[m] = d
        if d != H.height(m) + 1:
            problems.append(f"d(v_{m}, origin) = {d}, expected {H.height(m) + 1}")
    spine = spine_distances_stage2()
    near = {k: d for k, d in spine.items() if d < 8}
    if near:
        problems.append(f"order-1 hive vertices closer than 8: {sorted(near.items())[:3]}")
    oracle = H.HOracle()
    for key in spine:
        v = H.parse_h_key(key)
        if distance(oracle, v, H.on_spine, 8, lower_bound=H.potential) is not None:
            problems.append(f"{key} within 8 of the spine in the full graph")
    seeds = 2 if quick else 5
    horizon = 2_000 if quick else 10_000
    arena = Arena.from_spec("family:hgraph")
    origin = H.h_key(H.origin(0))
    runs = {}
    for cop_spec in H_COPS:
        for seed in range(seeds):
            robber = make_strategy("hgraph", "robber")
            try:
                tr = play(arena, make_strategy(cop_spec, "cop"), robber, horizon, seed, marks=[origin])
            except AssertionError as exc:
                problems.append(f"{cop_spec} seed {seed}: {exc}")
                continue
            out = tr.outcome
            if out["outcome"] != "horizon":
                problems.append(f"{cop_spec} seed {seed}: {out['outcome']} at {out['turn']} {out.get('detail', '')}")
            if any(e["spine_distance_ok"] is False for e in robber.entries):
                problems.append(f"{cop_spec} seed {seed}: spine distance bound failed")
            runs.setdefault(cop_spec, []).append((len(robber.entries), len(robber.passes)))
    detail = (
        f"d(v_m, origin) = {lemma}; {len(spine)} order-1 hive vertices, min spine distance {min(spine.values())}; "
        f"{horizon} turns x {seeds} seeds survived; stage-2 entries "
        + ", ".join(f"{c}: {sum(e for e, _ in r)}" for c, r in runs.items())
    )
    data = {"seeds": seeds, "horizon": horizon, "lemma": lemma, "min_spine_distance": min(spine.values())}
    return _finish(9, "hive graph: metric lemmas and robber survival", t0, problems, detail, data)


# 10

REPLAY_CASES = (
    ("family:two_k", "solver", "random", 100),
    ("family:kchain?blocks=3&hub=true", "chain-script", "shadow", 200),
    ("family:cycle?n=4", "shortest-path", "shadow", 300),
    ("family:gee", "gee", "gee", 2_000),
    ("family:gee", "random", "gee", 2_000),
    ("family:hgraph", "hgraph", "hgraph", 1_000),
    ("family:hgraph", "random", "hgraph", 1_000),
    ("family:K", "random", "random", 100),
)


def check_reproducibility(quick: bool = False) -> CheckResult:
    t0 = time.perf_counter()
    problems = []
    with tempfile.TemporaryDirectory() as tmp:
        tmpdir = Path(tmp)
        for i, (graph, cop, robber, horizon) in enumerate(REPLAY_CASES):
            arena = Arena.from_spec(graph)
            tr = play(arena, make_strategy(cop, "cop"), make_strategy(robber, "robber"), horizon, 7 + i, marks=())
            path = tmpdir / f"run{i}.jsonl"
            tr.save(path)
            loaded = Transcript.load(path)
            if loaded.dumps() != tr.dumps():
                problems.append(f"{graph} {cop}/{robber}: transcript does not round-trip")
            again = replay(loaded)
            if again.dumps() != tr.dumps():
                problems.append(f"{graph} {cop}/{robber}: replay differs")
        for spec in ("K", "two_k", "kchain?blocks=2&hub=true", "ppath?base={cycle?n=4}&n=3", "gee?stage=2", "hgraph?levels=1"):
            g = make_finite(spec)
            if FiniteGraph.loads(g.dumps()).dumps() != g.dumps():
                problems.append(f"{spec}: graph JSON does not round-trip")
            res = dismantle(g)
            if res.constructible:
                cj = json.loads(json.dumps(res.certificate.to_json(g)))
                if Certificate.from_json(g, cj) != res.certificate:
                    problems.append(f"{spec}: certificate does not round-trip")
            if g.n <= 200:
                sj = solve(g).to_json(policies=True)
                if json.loads(json.dumps(sj)) != sj:
                    problems.append(f"{spec}: solution JSON does not round-trip")
        hs = search_hom(make_finite("path?n=3"))
        hj = hs.to_json(make_finite("path?n=3"))
        if json.loads(json.dumps(hj)) != hj:
            problems.append("search result JSON does not round-trip")
    return _finish(10, "replay and artifact round-trips", t0, problems,
                   f"{len(REPLAY_CASES)} transcripts replay bit-exactly; graph, certificate, solution JSON round-trip")


CHECKS: dict[int, Callable[[bool], CheckResult]] = {
    1: check_equivalence,
    2: check_k,
    3: check_search_hom,
    4: check_chain,
    5: check_omega1,
    6: check_trail,
    7: check_ppath,
    8: check_gee,
    9: check_hgraph,
    10: check_reproducibility,
}


def run_check(number: int, quick: bool = False) -> CheckResult:
    """Run one check; unexpected exceptions become a failed result."""
    t0 = time.perf_counter()
    try:
        return CHECKS[number](quick)
    except Exception as exc:  # report, do not crash the table
        tb = traceback.format_exc(limit=3).strip().splitlines()[-1]
        return CheckResult(number, CHECKS[number].__name__, False, f"{type(exc).__name__}: {exc} [{tb}]", time.perf_counter() - t0)


def run_suite(quick: bool = False, only: list[int] | None = None, echo: Callable[[str], None] | None = None) -> list[CheckResult]:
    out = []
    for number in only or sorted(CHECKS):
        res = run_check(number, quick)
        if echo:
            echo(res.line())
        out.append(res)
    return out
