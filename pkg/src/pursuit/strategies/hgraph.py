"""Strategies on the layered hive graph: the three-stage robber and a hive-climbing cop."""

from __future__ import annotations

from ..families import hgraph as H
from ..graph import BudgetExceeded, distance
from .base import InvariantViolation, Strategy


def cycle_vertex_at(m: int, pos: int):
    """Vertex ``pos`` (0 = origin) of the 4-cycle added at level m, in layer 0 of G_m."""
    return H.origin(m) if pos == 0 else ("C", m, pos, (0,))


def cycle_position(p, m: int) -> int | None:
    """Where an H_m element sits on the level-m cycle (0 = origin), None if off it."""
    if p[0] == "C" and p[1] == m and not p[3]:
        return p[2]
    if H.is_origin(p) and H.level(p) == m - 1:
        return 0
    return None


def _robber_position(v, m: int) -> int | None:
    if v[0] == "C" and v[1] == m and v[3] == (0,):
        return v[2]
    if H.is_origin(v) and H.level(v) == m:
        return 0
    return None


class HRobber(Strategy):
    """Stage 1 sits on the level-m cycle opposite the cop's projection.

    Stage 2 starts when the cop stands on a hive-type vertex of order at least m:
    the robber runs to the spine and down to the origin. Stage 3 climbs the spine
    to level k'+1 (k' = largest hive order the cop showed) and steps out to the
    far side of the new cycle, dropping back to Stage 2 if the cop reaches order
    k'+1 or more on the way.
    """

    side = "robber"
    name = "hgraph"
    families = ("hgraph",)

    def reset(self, arena, rng):
        super().reset(arena, rng)
        self.stage = 1
        self.m = 1
        self.kprime = 0
        self.route: list = []
        self.pass_start = 0
        self.pass_m = 0
        self.turn = 0
        self.origin_visits = 0
        self.entries: list[dict] = []  # one record per Stage-2 entry
        self.passes: list[tuple[int, int, int]] = []  # (turns, m, k') per completed stages 2+3
        self.bfs_budget = int(self.params.get("budget", 50_000))

    # -- checks

    def _safe(self, cop, robber) -> None:
        if robber == cop or H.adjacent(cop, robber):
            raise InvariantViolation(f"robber {H.h_key(robber)} within reach of cop {H.h_key(cop)}")

    def _stage1_check(self, cop, robber) -> None:
        pos = _robber_position(robber, self.m)
        if pos is None:
            raise InvariantViolation(f"stage 1 robber off the level-{self.m} cycle: {H.h_key(robber)}")
        p = H.project_H(cop, self.m)
        d = H.dist_H(self.m, p, pos)
        if d is not None and d < 2:
            raise InvariantViolation(f"stage 1 projection distance {d} < 2 at m={self.m}")

    # -- stages

    def _stage1_target(self, cop) -> int | None:
        pos = cycle_position(H.project_H(cop, self.m), self.m)
        return None if pos is None else (pos + 2) % 4

    def place(self, cop):
        order = H.hive_order(cop) or 0
        self.m = order + 1
        target = self._stage1_target(cop)
        robber = cycle_vertex_at(self.m, 2 if target is None else target)
        self._safe(cop, robber)
        self._stage1_check(cop, robber)
        return robber

    def _enter_stage2(self, cop, robber, order: int) -> None:
        self.stage = 2
        self.kprime = order
        self.pass_start = self.turn
        self.pass_m = self.m
        record = {"turn": self.turn, "order": order, "potential": H.potential(cop)}
        need = H.height(order) + 1
        try:
            d = distance(self.arena.graph, cop, H.on_spine, need, budget=self.bfs_budget, lower_bound=H.potential)
            record["spine_distance_ok"] = d is None
            if d is not None:
                raise InvariantViolation(f"cop {H.h_key(cop)} is {d} < {need} from the spine at a hive of order {order}")
        except BudgetExceeded:
            record["spine_distance_ok"] = None
        if record["potential"] < need:
            raise InvariantViolation("hive-type cop below the spine-distance bound")
        self.entries.append(record)
        self.route = self._route_down(robber)

    def _route_down(self, robber) -> list:
        out = []
        v = robber
        if v[0] == "C":
            lvl = H.level(v)
            if v[2] == 2:
                v = cycle_vertex_at(lvl, 1)
                out.append(v)
            v = H.origin(lvl)
            out.append(v)
        for lvl in range(H.level(v) - 1, -1, -1):
            out.append(H.origin(lvl))
        return out

    def _route_up(self) -> list:
        top = self.kprime + 1
        return [H.origin(l) for l in range(1, top + 1)] + [cycle_vertex_at(top, 1), cycle_vertex_at(top, 2)]

    def move(self, cop, robber):
        self.turn += 1
        order = H.hive_order(cop)
        nxt = robber
        if self.stage == 1:
            if order is not None and order >= self.m:
                self._enter_stage2(cop, robber, order)
            else:
                target = self._stage1_target(cop)
                if target is not None:
                    nxt = cycle_vertex_at(self.m, target)
        elif self.stage == 2:
            if order is not None:
                self.kprime = max(self.kprime, order)
        elif self.stage == 3:
            if order is not None and order >= self.kprime + 1:
                # abort: the cop reached a high enough hive; run back down
                self.m = self.kprime + 1
                self._enter_stage2(cop, robber, order)
        if self.stage in (2, 3):
            if self.route:
                nxt = self.route.pop(0)
            if self.stage == 2 and H.is_origin(nxt) and H.level(nxt) == 0:
                self.stage = 3
                self.origin_visits += 1
                self.route = self._route_up()
            elif self.stage == 3 and not self.route:
                self.m = self.kprime + 1
                self.stage = 1
                turns = self.turn - self.pass_start + 1
                self.passes.append((turns, self.pass_m, self.kprime))
                if turns > self.pass_m + 2 + self.kprime + 3 or turns > H.height(self.kprime):
                    raise InvariantViolation(f"stages 2 and 3 took {turns} turns (m={self.pass_m}, k'={self.kprime})")
        if not self.arena.legal(robber, nxt):
            raise InvariantViolation(f"planned robber step {H.h_key(robber)} -> {H.h_key(nxt)} is not an edge")
        self._safe(cop, nxt)
        if self.stage == 1:
            self._stage1_check(cop, nxt)
        return nxt

    def memory(self):
        return {"stage": self.stage, "m": self.m, "k": self.kprime}


class HClimberCop(Strategy):
    """Walks to the hive vertex v_k at the robber's level (forcing the robber's second stage), then chases greedily."""

    name = "hgraph"
    families = ("hgraph",)

    def reset(self, arena, rng):
        super().reset(arena, rng)
        self.phase = "climb"
        self.k = 0
        self.chase_left = 0
        self.chase_turns = int(self.params.get("chase", 6))
        self.offset = int(self.params.get("offset", 0))

    def place(self, other):
        if "start" in self.params:
            return self.arena.parse(str(self.params["start"]))
        return H.origin(0)

    def _greedy(self, cop, robber):
        a = self.arena
        best, best_h = cop, a.hint(cop, robber)
        for m in a.closed_moves(cop, (robber,)):
            h = a.hint(m, robber)
            if h < best_h:
                best, best_h = m, h
        return best

    def step_towards_hive(self, x, k: int):
        n = H.level(x)
        kind, kk, c, layers = x
        if n < k:
            return H.embed(x)
        if n > k:
            if kind == "V" and kk == n:
                return ("O", 0, 0, (0,) * (n - 1) + (H.height(n),))
            if kind == "C" and kk == n:
                if c == 2:
                    return ("C", kk, 1, layers)
                return ("O", 0, 0, (0,) * (n - 1) + layers)
            if layers[-1] > 1:
                return (kind, kk, c, layers[:-1] + (layers[-1] - 1,))
            return (kind, kk, c, layers[:-1])
        if x == H.hive_vertex(k):
            return x
        if layers[-1] < H.height(k):
            return (kind, kk, c, layers[:-1] + (layers[-1] + 1,))
        return H.hive_vertex(k)

    def move(self, cop, robber):
        a = self.arena
        if a.legal(cop, robber):
            return robber
        if self.phase == "climb":
            if not self.k:
                self.k = max(H.level(robber), 1) + self.offset
            nxt = self.step_towards_hive(cop, self.k)
            if nxt == cop:
                self.phase = "chase"
                self.chase_left = self.chase_turns
            elif a.legal(cop, nxt):
                return nxt
            else:
                return self._greedy(cop, robber)
        self.chase_left -= 1
        if self.chase_left <= 0:
            self.phase = "climb"
            self.k = 0
        return self._greedy(cop, robber)

    def memory(self):
        return {"phase": self.phase, "k": self.k}
