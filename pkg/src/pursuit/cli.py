"""Command line: ``pursuit check|solve|simulate|family|search-hom|paper-suite``.

Exit codes: 0 success (or "yes"), 1 a mathematical "no"/"none", 2 usage or
input errors, 3 when a search or solve runs out of budget.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any

from .graph import BudgetExceeded, FiniteGraph, GraphError

EXIT_OK, EXIT_NO, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _emit(obj: Any) -> None:
    print(json.dumps(obj, indent=2, sort_keys=False))


def _finite(arg: str) -> FiniteGraph:
    from .families import resolve_graph

    g = resolve_graph(arg)
    if not isinstance(g, FiniteGraph):
        raise UsageError(f"{arg} is an infinite family; give a truncation (blocks, stage or levels)")
    return g


def _labels(text: str | None) -> list[str]:
    return [s for s in (text or "").split(",") if s]


def cmd_check(args) -> int:
    from .constructibility import Certificate, dismantle, validate

    g = _finite(args.graph)
    if args.cert:
        cert = Certificate.from_json(g, json.loads(Path(args.cert).read_text(encoding="utf-8")))
        diag = validate(g, cert)
        _emit({"graph": g.name, "valid": diag is None, **({"problem": str(diag)} if diag else {})})
        return EXIT_OK if diag is None else EXIT_NO
    res = dismantle(g)
    if res.constructible:
        out = {"graph": g.name, "constructible": True, "certificate": res.certificate.to_json(g)}
        if args.out:
            Path(args.out).write_text(json.dumps(res.certificate.to_json(g)) + "\n", encoding="utf-8")
        _emit(out)
        return EXIT_OK
    _emit({
        "graph": g.name,
        "constructible": False,
        "witness": [g.labels[v] for v in res.witness_ids],
        "eliminated": [[g.labels[v], g.labels[p]] for v, p in res.elimination],
    })
    return EXIT_NO


def cmd_solve(args) -> int:
    from .solver import solve

    g = _finite(args.graph)
    sol = solve(g, _labels(args.forbid))
    out = sol.to_json(policies=args.policies)
    if args.out:
        Path(args.out).write_text(json.dumps(out) + "\n", encoding="utf-8")
    _emit(out if not args.out else {k: v for k, v in out.items() if not k.endswith("_policy")})
    return EXIT_OK if sol.copwin else EXIT_NO


def cmd_simulate(args) -> int:
    from .arena import Arena, Transcript, play, replay
    from .strategies import make_strategy

    if args.replay:
        tr = Transcript.load(args.replay)
        again = replay(tr)
        same = again.dumps() == tr.dumps()
        _emit({"replay": args.replay, "identical": same, "outcome": again.outcome})
        return EXIT_OK if same else EXIT_NO
    missing = [n for n in ("graph", "cop", "robber") if getattr(args, n) is None]
    if missing:
        raise UsageError("simulate needs --" + ", --".join(missing))
    if args.steps < 1:
        raise UsageError("--steps must be at least 1")
    arena = Arena.from_spec(args.graph if ":" in args.graph or Path(args.graph).exists() else "family:" + args.graph)
    tr = play(arena, make_strategy(args.cop, "cop"), make_strategy(args.robber, "robber"), args.steps, args.seed, marks=args.marks or ())
    if args.out:
        tr.save(args.out)
    _emit(tr.outcome)
    return EXIT_NO if tr.outcome["outcome"] == "error" else EXIT_OK


def cmd_family(args) -> int:
    from .families import make
    from .graph import save_graph

    g = make(args.spec)
    if not isinstance(g, FiniteGraph):
        raise UsageError(f"{args.spec} is infinite; give a truncation (blocks, stage or levels)")
    if args.out:
        save_graph(g, args.out)
    if args.dot:
        Path(args.dot).write_text(g.to_dot(), encoding="utf-8")
    if args.out or args.dot:
        _emit({"name": g.name, "vertices": g.n, "edges": g.m, "out": args.out, "dot": args.dot})
    else:
        print(g.dumps())
    return EXIT_OK


def cmd_search_hom(args) -> int:
    from .constructibility import search_hom

    g = _finite(args.graph)
    if args.budget_ms is not None and args.budget_ms <= 0:
        raise UsageError("--budget-ms must be positive")
    res = search_hom(g, time_budget=None if args.budget_ms is None else args.budget_ms / 1000.0)
    out = res.to_json(g)
    out["graph"] = g.name
    out["seconds"] = round(res.seconds, 3)
    _emit(out)
    return {"found": EXIT_OK, "none": EXIT_NO}.get(res.status, EXIT_BUDGET)


def cmd_paper_suite(args) -> int:
    from .suite import CHECKS, run_suite

    only = None
    if args.only:
        try:
            only = [int(x) for x in args.only.split(",")]
        except ValueError as exc:
            raise UsageError("--only takes comma-separated check numbers") from exc
        bad = [n for n in only if n not in CHECKS]
        if bad:
            raise UsageError(f"no checks numbered {bad}")
    results = run_suite(quick=args.quick, only=only, echo=lambda s: print(s, flush=True))
    passed = sum(r.ok for r in results)
    print(f"{passed}/{len(results)} checks passed")
    if args.json:
        Path(args.json).write_text(json.dumps([
            {"number": r.number, "title": r.title, "ok": r.ok, "detail": r.detail, "seconds": round(r.seconds, 2)}
            for r in results
        ], indent=2) + "\n", encoding="utf-8")
    return EXIT_OK if passed == len(results) else EXIT_NO


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pursuit", description="Cops and robber on dismantlable graphs and their infinite relatives.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="dismantle a graph; print a certificate or the stuck witness")
    c.add_argument("--graph", required=True, help="family:<spec> or a graph JSON file")
    c.add_argument("--cert", help="validate this certificate JSON instead")
    c.add_argument("--out", help="write the certificate JSON here")
    c.set_defaults(func=cmd_check)

    s = sub.add_parser("solve", help="solve the one-cop game exactly")
    s.add_argument("--graph", required=True)
    s.add_argument("--forbid", help="comma-separated labels the cop may not enter")
    s.add_argument("--policies", action="store_true", help="include both optimal policies")
    s.add_argument("--out", help="write the full solution JSON here")
    s.set_defaults(func=cmd_solve)

    m = sub.add_parser("simulate", help="play one seeded game and write a JSONL transcript")
    m.add_argument("--graph")
    m.add_argument("--cop")
    m.add_argument("--robber")
    m.add_argument("--steps", type=int, default=1000)
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("--out")
    m.add_argument("--marks", action="append", help="vertex key to track (repeatable)")
    m.add_argument("--replay", help="re-run this transcript from its header and compare")
    m.set_defaults(func=cmd_simulate)

    f = sub.add_parser("family", help="export a finite family member")
    f.add_argument("--spec", required=True)
    f.add_argument("--out")
    f.add_argument("--dot")
    f.set_defaults(func=cmd_family)

    h = sub.add_parser("search-hom", help="search for a certificate whose parent map is a homomorphism")
    h.add_argument("--graph", required=True)
    h.add_argument("--budget-ms", type=int, default=60_000)
    h.set_defaults(func=cmd_search_hom)

    q = sub.add_parser("paper-suite", help="run the theorem checks and print a pass/fail table")
    q.add_argument("--quick", action="store_true", help="fewer seeds and shorter horizons")
    q.add_argument("--only", help="comma-separated check numbers")
    q.add_argument("--json", help="also write the results here")
    q.set_defaults(func=cmd_paper_suite)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    from .families.spec import SpecError
    from .strategies import InvariantViolation, StrategyError

    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"pursuit: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except InvariantViolation as exc:
        print(f"pursuit: strategy invariant failed: {exc}", file=sys.stderr)
        return EXIT_NO
    except (UsageError, SpecError, GraphError, StrategyError, OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"pursuit: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
