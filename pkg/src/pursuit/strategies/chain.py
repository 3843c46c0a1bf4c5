"""Scripted cop for finite chains of K copies with a hub."""

from __future__ import annotations

import re

from .base import Strategy, StrategyError, require_finite, safe_moves

_LABEL = re.compile(r"^(x|z'|z|t'|t|w)(\d+)$")
_INTERIOR = ("z", "z'", "t", "t'", "w")


class ChainScriptCop(Strategy):
    """Start at the hub, drop onto y_i of the robber's copy, then push the robber left copy by copy.

    In copy i the cop walks y_i, z_i, z'_i, y_i; the robber's only safe replies
    are w_i, then t'_i, then x_i. The cop then follows to x_i = y_{i-1}.
    ``claims`` records (cop, robber, claimed safe replies) for every forced step.
    """

    name = "chain-script"
    families = ("kchain",)

    def reset(self, arena, rng):
        super().reset(arena, rng)
        require_finite(self, arena)
        g = arena.graph
        if "hub" not in g.index:
            raise StrategyError("chain-script needs the hub")
        self.g = g
        self.hub = g.vid("hub")
        self.claims: list[tuple[int, int, frozenset[int]]] = []
        self.off_script = 0

    def _where(self, v: int) -> tuple[str, int]:
        if v == self.hub:
            return "hub", 0
        m = _LABEL.match(self.g.labels[v])
        if not m:
            raise StrategyError(f"unexpected vertex {self.g.labels[v]}")
        return m.group(1), int(m.group(2))

    def _v(self, kind: str, i: int) -> int | None:
        return self.g.index.get(f"{kind}{i}")

    def _claim(self, cop: int, robber: int, names: list[tuple[str, int]]) -> None:
        self.claims.append((cop, robber, frozenset(self._v(k, i) for k, i in names)))

    def place(self, other):
        return self.hub

    def _fallback(self, cop, robber):
        self.off_script += 1
        d = self.arena.distances_to(robber)
        return min(self.arena.closed_moves(cop), key=lambda m: (d[m], m))

    def move(self, cop, robber):
        a = self.arena
        if a.legal(cop, robber):
            return robber
        ck, ci = self._where(cop)
        rk, ri = self._where(robber)
        if ck == "hub":
            if rk in _INTERIOR:
                dest = self._v("x", ri + 1)
                self._claim(dest, robber, [("w", ri)])
                return dest
            return self._fallback(cop, robber)
        if ck == "x":
            i = ci - 1  # the cop stands on y_i
            if rk == "w" and ri == i:
                dest = self._v("z", i)
                self._claim(dest, robber, [("t'", i)])
                return dest
            if rk in _INTERIOR and ri == i:
                self._claim(cop, robber, [("w", i)])
                return cop
            if ri <= i:
                # robber is left of y_i: follow to x_i = y_{i-1}
                dest = self._v("x", i)
                if dest is None or not a.legal(cop, dest):
                    return self._fallback(cop, robber)
                if rk in _INTERIOR and ri == i - 1:
                    self._claim(dest, robber, [("w", ri)])
                return dest
            return self.hub
        if ck == "z" and rk == "t'" and ri == ci:
            dest = self._v("z'", ci)
            self._claim(dest, robber, [("x", ci)])
            return dest
        if ck == "z'" and rk == "x" and ri == ci:
            return self._v("x", ci + 1)
        return self._fallback(cop, robber)

    def memory(self):
        return {"flag": "off-script"} if self.off_script else None


def check_claims(strategy: ChainScriptCop) -> list[tuple[int, int, frozenset[int], frozenset[int]]]:
    """Claims whose set differs from the robber's actual safe replies: (cop, robber, claimed, actual)."""
    bad = []
    for cop, robber, claimed in strategy.claims:
        actual = frozenset(safe_moves(strategy.arena, cop, robber))
        if actual != claimed:
            bad.append((cop, robber, claimed, actual))
    return bad
