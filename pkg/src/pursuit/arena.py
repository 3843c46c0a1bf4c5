"""Referee loop, transcripts and replay.

A game is one cop placement, one robber placement, then rounds in which the
cop moves and the robber answers. ``horizon`` counts rounds. Every position is
logged by its canonical key, so transcripts are plain JSONL:

    {"format": "pursuit-transcript-v1", "graph": ..., "cop": ..., "robber": ..., "seed": ..., "horizon": ...}
    {"t": 0, "a": "cop", "v": "x"}
    {"t": 0, "a": "robber", "v": "w", "m": {"stage": 1}}
    ...
    {"outcome": "capture", "turn": 3, "actor": "cop", "metrics": {...}}
"""

from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Hashable, Iterable, Sequence

from .families import resolve_graph
from .families.spec import SpecError, parse_spec
from .graph import FiniteGraph, GraphError, NeighborOracle, bfs_distances

TRANSCRIPT_FORMAT = "pursuit-transcript-v1"


class IllegalMove(RuntimeError):
    pass


class Arena:
    """Uniform view of a FiniteGraph or an oracle for strategies and the referee."""

    def __init__(self, graph: FiniteGraph | NeighborOracle, spec: str | None = None):
        self.graph = graph
        self.finite = isinstance(graph, FiniteGraph)
        self.spec = spec if spec is not None else f"family:{graph.name}"
        self._dist: dict[int, list[int]] = {}
        try:
            body = self.spec[len("family:"):] if self.spec.startswith("family:") else ""
            self.family = parse_spec(body).name if body else ""
        except SpecError:
            self.family = ""

    @classmethod
    def from_spec(cls, spec: str) -> Arena:
        return cls(resolve_graph(spec), spec)

    def key(self, v: Hashable) -> str:
        return self.graph.labels[v] if self.finite else self.graph.key(v)

    def parse(self, key: str) -> Hashable:
        return self.graph.vid(key) if self.finite else self.graph.parse(key)

    def adjacent(self, u: Hashable, v: Hashable) -> bool:
        return self.graph.adjacent(u, v)

    def legal(self, u: Hashable, v: Hashable) -> bool:
        return u == v or self.graph.adjacent(u, v)

    def closed_moves(self, v: Hashable, context: Sequence[Hashable] = ()) -> tuple:
        if self.finite:
            return (v,) + self.graph.adj[v]
        return self.graph.closed_moves(v, context)

    def random_vertex(self, rng: random.Random) -> Hashable:
        return self.graph.random_vertex(rng)

    def potential(self, v: Hashable) -> int:
        return 0 if self.finite else self.graph.potential(v)

    def distances_to(self, target: int) -> list[int]:
        """All BFS distances to ``target`` (finite arenas only, cached)."""
        d = self._dist.get(target)
        if d is None:
            d = bfs_distances(self.graph, target)
            self._dist[target] = d
        return d

    def hint(self, u: Hashable, v: Hashable) -> float:
        if self.finite:
            d = self.distances_to(v)[u]
            return float("inf") if d < 0 else float(d)
        return self.graph.distance_hint(u, v)

    def graph_digest(self) -> str:
        if self.finite:
            return hashlib.sha256(self.graph.dumps().encode()).hexdigest()[:16]
        return self.graph.name


class Strategy:
    """Base class: a single-run state machine for one side.

    ``reset`` binds the arena and a private RNG; ``place`` and ``move`` return
    vertices; ``memory`` returns the declared state (logged when it changes).
    """

    side = "cop"
    name = "strategy"
    families: tuple[str, ...] = ()  # empty means any arena

    def __init__(self, **params: Any):
        self.params = params

    @property
    def spec(self) -> str:
        if not self.params:
            return self.name
        return self.name + "?" + "&".join(f"{k}={_fmt(v)}" for k, v in sorted(self.params.items()))

    def reset(self, arena: Arena, rng: random.Random) -> None:
        if self.families and arena.family not in self.families:
            raise GraphError(f"strategy {self.name} needs one of {', '.join(self.families)}, not {arena.family or 'a file graph'}")
        self.arena = arena
        self.rng = rng

    def place(self, other: Hashable | None) -> Hashable:
        raise NotImplementedError

    def move(self, cop: Hashable, robber: Hashable) -> Hashable:
        raise NotImplementedError

    def memory(self) -> dict[str, Any] | None:
        return None


def _fmt(v: Any) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


@dataclass
class Transcript:
    header: dict[str, Any]
    events: list[tuple] = field(default_factory=list)  # (turn, actor, key, memory-or-None)
    outcome: dict[str, Any] = field(default_factory=dict)

    def positions(self, actor: str) -> list[str]:
        return [e[2] for e in self.events if e[1] == actor]

    @property
    def captured(self) -> bool:
        return self.outcome.get("outcome") == "capture"

    def event_lines(self) -> Iterable[str]:
        for t, a, v, m in self.events:
            ev: dict[str, Any] = {"t": t, "a": a, "v": v}
            if m is not None:
                ev["m"] = m
            yield json.dumps(ev, sort_keys=True, separators=(",", ":"))

    def lines(self) -> Iterable[str]:
        yield json.dumps(self.header, sort_keys=True, separators=(",", ":"))
        yield from self.event_lines()
        yield json.dumps(self.outcome, sort_keys=True, separators=(",", ":"))

    def dumps(self) -> str:
        return "\n".join(self.lines()) + "\n"

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.dumps(), encoding="utf-8")

    @classmethod
    def loads(cls, text: str) -> Transcript:
        rows = [json.loads(line) for line in text.splitlines() if line.strip()]
        if len(rows) < 2:
            raise ValueError("a transcript needs a header and an outcome line")
        header, outcome = rows[0], rows[-1]
        if header.get("format") != TRANSCRIPT_FORMAT:
            raise ValueError(f"not a {TRANSCRIPT_FORMAT} transcript")
        if "outcome" not in outcome:
            raise ValueError("last line is not an outcome record")
        events = [(r["t"], r["a"], r["v"], r.get("m")) for r in rows[1:-1]]
        return cls(header, events, outcome)

    @classmethod
    def load(cls, path: str | Path) -> Transcript:
        return cls.loads(Path(path).read_text(encoding="utf-8"))


def _rngs(seed: int) -> tuple[random.Random, random.Random]:
    return random.Random(f"{seed}/cop"), random.Random(f"{seed}/robber")


def play(
    arena: Arena,
    cop: Strategy,
    robber: Strategy,
    horizon: int,
    seed: int,
    marks: Sequence[str] = (),
    check_legal: bool = True,
) -> Transcript:
    """Run one game. Illegal moves end the game with an ``error`` outcome naming the actor and turn."""
    if horizon < 1:
        raise ValueError("horizon must be at least 1")
    if cop.side != "cop" or robber.side != "robber":
        raise ValueError("pass a cop strategy and a robber strategy")
    header = {
        "format": TRANSCRIPT_FORMAT,
        "graph": arena.spec,
        "graph_digest": arena.graph_digest(),
        "cop": cop.spec,
        "robber": robber.spec,
        "seed": seed,
        "horizon": horizon,
        "marks": list(marks),
    }
    tr = Transcript(header)
    cop_rng, rob_rng = _rngs(seed)
    cop.reset(arena, cop_rng)
    robber.reset(arena, rob_rng)
    ev = tr.events
    key = arena.key
    last_mem = {"cop": None, "robber": None}

    def log(t: int, actor: str, v: Hashable, strat: Strategy) -> None:
        m = strat.memory()
        if m == last_mem[actor]:
            m_out = None
        else:
            m_out = m
            last_mem[actor] = m
        ev.append((t, actor, key(v), m_out))

    def finish(kind: str, t: int, actor: str | None, detail: str | None = None) -> Transcript:
        out: dict[str, Any] = {"outcome": kind, "turn": t}
        if actor is not None:
            out["actor"] = actor
        if detail:
            out["detail"] = detail
        out["metrics"] = analyze(tr, marks, arena)
        tr.outcome = out
        return tr

    c = cop.place(None)
    log(0, "cop", c, cop)
    r = robber.place(c)
    log(0, "robber", r, robber)
    if r == c:
        return finish("capture", 0, "robber")
    for t in range(1, horizon + 1):
        c2 = cop.move(c, r)
        if check_legal and not arena.legal(c, c2):
            return finish("error", t, "cop", f"illegal cop move {key(c)} -> {key(c2)}")
        c = c2
        log(t, "cop", c, cop)
        if c == r:
            return finish("capture", t, "cop")
        r2 = robber.move(c, r)
        if check_legal and not arena.legal(r, r2):
            return finish("error", t, "robber", f"illegal robber move {key(r)} -> {key(r2)}")
        r = r2
        log(t, "robber", r, robber)
        if c == r:
            return finish("capture", t, "robber")
    return finish("horizon", horizon, None)


def analyze(tr: Transcript, marks: Iterable[str] = (), arena: Arena | None = None) -> dict[str, Any]:
    """Visit statistics for the marked vertices plus drift of the family potential."""
    marks = list(marks)
    robber = [e for e in tr.events if e[1] == "robber"]
    out: dict[str, Any] = {"robber_moves": len(robber)}
    visits: dict[str, dict[str, Any]] = {}
    for mk in marks:
        turns = [e[0] for e in robber if e[2] == mk]
        # a return is an arrival after being elsewhere
        arrivals = [e[0] for i, e in enumerate(robber) if e[2] == mk and (i == 0 or robber[i - 1][2] != mk)]
        gaps = [b - a for a, b in zip(arrivals, arrivals[1:])]
        visits[mk] = {
            "visits": len(turns),
            "arrivals": len(arrivals),
            "last_visit": turns[-1] if turns else None,
            "max_gap": max(gaps) if gaps else None,
        }
    out["marks"] = visits
    if arena is not None and not arena.finite:
        pot = [arena.potential(arena.parse(e[2])) for e in robber]
        out["robber_potential_max"] = max(pot) if pot else None
        out["robber_potential_last"] = pot[-1] if pot else None
        cop_pos = [arena.potential(arena.parse(e[2])) for e in tr.events if e[1] == "cop"]
        out["cop_potential_max"] = max(cop_pos) if cop_pos else None
    staged = [(e[0], e[3]) for e in robber if e[3] and "m" in e[3]]
    if staged:
        # confined: stage 1 on one committed cycle over the whole second half
        last_turn = robber[-1][0]
        final = staged[-1][1]
        out["robber_last_commit_turn"] = staged[-1][0]
        out["confined"] = final.get("stage") == 1 and staged[-1][0] <= last_turn // 2
    flags = sorted({k for e in tr.events if e[3] for k, v in e[3].items() if k == "flag" and v})
    if flags:
        out["flags"] = flags
    return out


def replay(tr: Transcript) -> Transcript:
    """Re-run a transcript from its header alone."""
    from .strategies import make_strategy

    h = tr.header
    arena = Arena.from_spec(h["graph"])
    if arena.graph_digest() != h.get("graph_digest", arena.graph_digest()):
        raise ValueError("the graph named in the header has changed since the run")
    cop = make_strategy(h["cop"], "cop")
    robber = make_strategy(h["robber"], "robber")
    return play(arena, cop, robber, h["horizon"], h["seed"], h.get("marks", ()))
