"""Family spec strings: ``name?key=value&key=value`` with brace-quoted nested specs."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

Value = Union[int, bool, str, "FamilySpec"]


class SpecError(ValueError):
    pass


@dataclass(frozen=True)
class FamilySpec:
    name: str
    params: tuple[tuple[str, Value], ...] = ()

    def get(self, key: str, default: Value | None = None) -> Value | None:
        for k, v in self.params:
            if k == key:
                return v
        return default

    def __contains__(self, key: str) -> bool:
        return any(k == key for k, _ in self.params)

    def keys(self) -> list[str]:
        return [k for k, _ in self.params]

    def with_params(self, **updates: Value) -> FamilySpec:
        merged = dict(self.params)
        merged.update(updates)
        return FamilySpec(self.name, tuple(sorted(merged.items())))

    def __str__(self) -> str:
        if not self.params:
            return self.name
        parts = []
        for k, v in self.params:
            parts.append(f"{k}={format_value(v)}")
        return f"{self.name}?{'&'.join(parts)}"


def format_value(v: Value) -> str:
    if isinstance(v, FamilySpec):
        return "{" + str(v) + "}"
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def _split_top(text: str, sep: str) -> list[str]:
    """Split on ``sep`` outside braces."""
    out, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch == "{":
            depth += 1
        elif ch == "}":
            depth -= 1
            if depth < 0:
                raise SpecError(f"unbalanced braces in {text!r}")
        elif ch == sep and depth == 0:
            out.append(text[start:i])
            start = i + 1
    if depth:
        raise SpecError(f"unbalanced braces in {text!r}")
    out.append(text[start:])
    return out


def _parse_value(raw: str) -> Value:
    if raw.startswith("{"):
        if not raw.endswith("}"):
            raise SpecError(f"nested spec must be fully brace-quoted: {raw!r}")
        return parse_spec(raw[1:-1])
    low = raw.lower()
    if low in ("true", "yes"):
        return True
    if low in ("false", "no"):
        return False
    try:
        return int(raw)
    except ValueError:
        return raw


def parse_spec(text: str) -> FamilySpec:
    text = text.strip()
    if not text:
        raise SpecError("empty family spec")
    head, sep, rest = text.partition("?")
    if "{" in head or "}" in head or "=" in head:
        raise SpecError(f"bad family name in {text!r}")
    params: dict[str, Value] = {}
    if sep:
        if not rest:
            raise SpecError(f"dangling '?' in {text!r}")
        for item in _split_top(rest, "&"):
            key, eq, raw = item.partition("=")
            if not eq or not key or not raw:
                raise SpecError(f"expected key=value, got {item!r}")
            if key in params:
                raise SpecError(f"duplicate parameter {key!r}")
            params[key] = _parse_value(raw)
    return FamilySpec(head, tuple(sorted(params.items())))
