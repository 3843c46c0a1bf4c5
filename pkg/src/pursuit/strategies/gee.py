"""Strategies on the coordinate graph: the three-stage robber and a cop that forces its second stage."""

from __future__ import annotations

from ..families import gee as G
from .base import InvariantViolation, Strategy


def _next_odd_above(p: int) -> int:
    return p + 1 if p % 2 == 0 else p + 2


def _next_even_above(p: int) -> int:
    return p + 2 if p % 2 == 0 else p + 1


class GeeRobber(Strategy):
    """Keeps every coordinate 0 except one cycle coordinate m.

    Stage 1: the cop has no 6; keep the m-th coordinates 2 apart (or 1 apart
    while the cop has a nonzero coordinate below m). Stage 2: the cop has a 6;
    stay once, then walk to the zero vertex. Stage 3: at the zero vertex, hop
    onto a fresh cycle coordinate above the cop's support.
    """

    side = "robber"
    name = "gee"
    families = ("gee",)

    def reset(self, arena, rng):
        super().reset(arena, rng)
        self.stage = 1
        self.m = 0
        self.zero_visits = 0
        self.stage2_entry_distance: list[int] = []

    def place(self, cop):
        self.m = _next_odd_above(G.support_max(cop))
        self.stage = 1
        w = ((self.m, 2),)
        self._check(cop, w)
        self.last_cop_m = G.value_at(cop, self.m)  # needed by the mirror rule
        return w

    def _check(self, cop, w) -> None:
        if w == cop or G.gee_adjacent(cop, w):
            raise InvariantViolation(f"robber {G.gee_key(w)} within reach of cop {G.gee_key(cop)}")
        if self.stage == 1 and w:
            d = G.cyc_dist(G.value_at(cop, self.m), G.value_at(w, self.m))
            if not (d == 2 or (d == 1 and any(p < self.m for p, _ in cop))):
                raise InvariantViolation(f"stage 1 gap broken at m={self.m}: cop {G.gee_key(cop)}, robber {G.gee_key(w)}")

    def move(self, cop, robber):
        w = robber
        if self.stage == 3 or not w:
            # at the zero vertex: recommit above everything the cop touches
            self.m = _next_odd_above(G.support_max(cop))
            w = ((self.m, 1),)
            self.stage = 1
        elif self.stage == 2 or G.has_six(cop):
            if self.stage != 2:
                self.stage = 2
                self.stage2_entry_distance.append(G.zero_distance_bound(cop))
            else:
                val = w[0][1]
                w = () if val in (1, 3) else ((self.m, 1),)
        else:
            m = self.m
            cm, prev_cm = G.value_at(cop, m), self.last_cop_m
            rm = G.value_at(w, m)
            if cm != prev_cm:
                rm = (rm + cm - prev_cm) % 4
            elif G.cyc_dist(cm, rm) != 2:
                rm = (cm + 2) % 4
            w = ((m, rm),) if rm else ()
        if not w:
            self.stage = 3
            self.zero_visits += 1
        self._check(cop, w)
        self.last_cop_m = G.value_at(cop, self.m)
        return w

    def memory(self):
        return {"stage": self.stage, "m": self.m}


class GeeSixCop(Strategy):
    """Climbs a fresh path coordinate M to 6, jumps onto the robber's lower coordinates, then chases.

    Jumping is legal because every vertex sharing the 6 at M and agreeing
    above M is a neighbour.
    """

    name = "gee"
    families = ("gee",)

    def reset(self, arena, rng):
        super().reset(arena, rng)
        self.phase = "climb"
        self.M = 0
        self.chase_left = 0
        self.chase_turns = int(self.params.get("chase", 12))

    def place(self, other):
        if "start" in self.params:
            return self.arena.parse(str(self.params["start"]))
        return G.ZERO

    def _greedy(self, cop, robber):
        a = self.arena
        best, best_h = cop, a.hint(cop, robber)
        for m in a.closed_moves(cop, (robber,)):
            h = a.hint(m, robber)
            if h < best_h:
                best, best_h = m, h
        return best

    def move(self, cop, robber):
        if G.gee_adjacent(cop, robber):
            return robber
        if self.phase == "climb":
            if not self.M:
                self.M = _next_even_above(max(G.support_max(cop), G.support_max(robber)))
            val = G.value_at(cop, self.M)
            if val < G.TOP:
                nxt = G.change(cop, self.M, val + 1)
                return nxt if G.gee_adjacent(cop, nxt) else self._greedy(cop, robber)
            target = tuple(sorted([(p, x) for p, x in robber if p < self.M] + [(p, x) for p, x in cop if p >= self.M]))
            self.phase = "descend"
            if target != cop and G.gee_adjacent(cop, target):
                return target
        if self.phase == "descend":
            val = G.value_at(cop, self.M)
            if val > 0:
                nxt = G.change(cop, self.M, val - 1)
                if G.gee_adjacent(cop, nxt):
                    return nxt
            self.phase = "chase"
            self.chase_left = self.chase_turns
        if self.phase == "chase":
            self.chase_left -= 1
            if self.chase_left <= 0:
                self.phase = "climb"
                self.M = 0
            return self._greedy(cop, robber)
        return cop

    def memory(self):
        return {"phase": self.phase, "M": self.M}
