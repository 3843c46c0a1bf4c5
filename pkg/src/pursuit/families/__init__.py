"""Generators for every graph family, addressed by spec strings such as ``ppath?base={cycle?n=4}&n=6``."""

from __future__ import annotations

from pathlib import Path

from ..graph import FiniteGraph, GraphError, NeighborOracle, load_graph
from . import gee, hgraph, kgraphs, products
from .spec import FamilySpec, SpecError, parse_spec

FAMILIES = ("K", "two_k", "kchain", "omega1", "ppath", "c4dot", "gee", "hive", "hgraph", "path", "cycle")

_ALLOWED = {
    "K": set(),
    "two_k": set(),
    "kchain": {"blocks", "hub", "direction"},
    "omega1": {"blocks"},
    "ppath": {"base", "n"},
    "c4dot": {"base"},
    "gee": {"stage"},
    "hive": {"base", "height"},
    "hgraph": {"levels"},
    "path": {"n"},
    "cycle": {"n"},
}
_REQUIRED = {
    "omega1": {"blocks"},
    "ppath": {"base", "n"},
    "c4dot": {"base"},
    "hive": {"base", "height"},
    "path": {"n"},
    "cycle": {"n"},
}


def _int(spec: FamilySpec, key: str, lo: int, hi: int | None = None) -> int:
    v = spec.get(key)
    if isinstance(v, bool) or not isinstance(v, int):
        raise SpecError(f"{spec.name}: {key} must be an integer")
    if v < lo or (hi is not None and v > hi):
        rng = f">= {lo}" if hi is None else f"in {lo}..{hi}"
        raise SpecError(f"{spec.name}: {key} must be {rng}")
    return v


def _base(spec: FamilySpec) -> FiniteGraph:
    base = spec.get("base")
    if not isinstance(base, FamilySpec):
        raise SpecError(f"{spec.name}: base must be a brace-quoted family spec")
    g = make(base)
    if not isinstance(g, FiniteGraph):
        raise SpecError(f"{spec.name}: base {base} is not a finite graph")
    return g


def validate(spec: FamilySpec) -> None:
    if spec.name not in _ALLOWED:
        raise SpecError(f"unknown family {spec.name!r}; expected one of {', '.join(FAMILIES)}")
    extra = set(spec.keys()) - _ALLOWED[spec.name]
    if extra:
        raise SpecError(f"{spec.name}: unknown parameter(s) {', '.join(sorted(extra))}")
    missing = _REQUIRED.get(spec.name, set()) - set(spec.keys())
    if missing:
        raise SpecError(f"{spec.name}: missing parameter(s) {', '.join(sorted(missing))}")


def make(spec: FamilySpec | str) -> FiniteGraph | NeighborOracle:
    """Build the graph named by ``spec``: a FiniteGraph, or an oracle for infinite families."""
    if isinstance(spec, str):
        spec = parse_spec(spec)
    validate(spec)
    name = spec.name
    label = str(spec)
    if name == "K":
        return kgraphs.k_graph().relabeled(label)
    if name == "two_k":
        return kgraphs.two_k().relabeled(label)
    if name == "kchain":
        hub = spec.get("hub", False)
        direction = spec.get("direction", "one")
        if not isinstance(hub, bool):
            raise SpecError("kchain: hub must be true or false")
        if direction not in ("one", "two"):
            raise SpecError("kchain: direction must be one or two")
        if "blocks" not in spec:
            return kgraphs.KChainOracle(hub=hub, direction=direction)
        return kgraphs.kchain(_int(spec, "blocks", 1), hub, direction).relabeled(label)
    if name == "omega1":
        return kgraphs.omega1(_int(spec, "blocks", 1)).relabeled(label)
    if name == "ppath":
        return products.ppath(_base(spec), _int(spec, "n", 1)).relabeled(label)
    if name == "c4dot":
        return products.c4dot(_base(spec)).relabeled(label)
    if name == "hive":
        g, _, _ = products.hive(_base(spec), _int(spec, "height", 1))
        return g.relabeled(label)
    if name == "path":
        return products.path(_int(spec, "n", 1)).relabeled(label)
    if name == "cycle":
        return products.cycle(_int(spec, "n", 3)).relabeled(label)
    if name == "gee":
        if "stage" not in spec:
            return gee.GeeOracle()
        return gee.gee_stage(_int(spec, "stage", 1, 5)).relabeled(label)
    if name == "hgraph":
        if "levels" not in spec:
            return hgraph.HOracle()
        g, _ = hgraph.stage_truncation(_int(spec, "levels", 0, 3))
        return g.relabeled(label)
    raise SpecError(f"unknown family {name!r}")  # pragma: no cover - validate() guards this


def make_finite(spec: FamilySpec | str) -> FiniteGraph:
    g = make(spec)
    if not isinstance(g, FiniteGraph):
        raise SpecError(f"{spec} is infinite; give a truncation parameter (blocks, stage or levels)")
    return g


def resolve_graph(arg: str) -> FiniteGraph | NeighborOracle:
    """CLI graph argument: ``family:<spec>`` or a path to a graph JSON file."""
    if arg.startswith("family:"):
        return make(arg[len("family:"):])
    path = Path(arg)
    if not path.exists():
        raise GraphError(f"no such graph file {arg!r} (use family:<spec> for generated graphs)")
    return load_graph(path)


__all__ = [
    "FAMILIES",
    "FamilySpec",
    "SpecError",
    "make",
    "make_finite",
    "parse_spec",
    "resolve_graph",
    "validate",
]
