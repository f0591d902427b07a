"""Constructive Breaker strategies for H-games on a graph board.

Every strategy here answers Maker's latest move and falls back to the
smallest unclaimed element when it has nothing specific to do. Extra
Breaker moves never hurt Breaker, so the same objects work whether Breaker
moves first or second.
"""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

from .density import (
    ForestDecomposition,
    arboricity_ratio,
    ceil_frac,
    forest_decomposition,
    max_density,
    orient_bounded_outdegree,
    two_density,
    is_strictly_2_balanced,
)
from .errors import CapabilityError, Refused
from .game import GameState, Player, build_h_game
from .graph import Graph
from .solver import DEFAULT_CAP, SolverStrategy


def _maker_reply_target(state: GameState) -> int | None:
    """Maker's move that Breaker is answering now, if the previous move was Maker's."""
    if state.history and state.history[-1][0] is Player.MAKER:
        return state.history[-1][1]
    return None


def _first_unclaimed(state: GameState, candidates) -> int | None:
    best = None
    for x in candidates:
        if x in state.unclaimed and (best is None or x < best):
            best = x
    return best


# ---------------------------------------------------------------------------
# Predicates


def breaker_wins_by_arboricity(g: Graph, h: Graph) -> bool:
    """ceil(ar(G)/2) < ar(H)."""
    if g.e == 0:
        return True
    ar_g, _ = arboricity_ratio(g)
    ar_h, _ = arboricity_ratio(h)
    return ceil_frac(ar_g / 2) < ar_h


def breaker_wins_by_orientation(g: Graph, h: Graph) -> bool:
    """ceil(m(G)/2) < m(H)."""
    if g.e == 0:
        return True
    m_g, _ = max_density(g)
    m_h, _ = max_density(h)
    return ceil_frac(m_g / 2) < m_h


# ---------------------------------------------------------------------------
# Pairing


@dataclass(frozen=True)
class PairingPlan:
    """Disjoint element pairs; unpaired Maker moves are answered with the smallest unclaimed element."""

    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        seen: set[int] = set()
        for a, b in self.pairs:
            if a == b or a in seen or b in seen:
                raise ValueError(f"pairs are not disjoint at {(a, b)}")
            seen.update((a, b))

    def partner(self) -> dict[int, int]:
        out = {}
        for a, b in self.pairs:
            out[a], out[b] = b, a
        return out


class PairingBreaker:
    name = "pairing"

    def __init__(self, plan: PairingPlan):
        self.plan = plan
        self._partner = plan.partner()

    def next_move(self, state: GameState, system=None) -> int:
        x = _maker_reply_target(state)
        y = self._partner.get(x)
        if y is not None and y in state.unclaimed:
            return y
        return state.min_unclaimed()


class OrientationPairingBreaker:
    """Answer a Maker edge leaving v with another unclaimed edge leaving v.

    Maker's out-degree at every vertex stays at most ceil(d/2) where d is
    the out-degree bound of the fixed orientation.
    """

    name = "orientation-pairing"

    def __init__(self, g: Graph):
        self.graph = g
        self.orientation = orient_bounded_outdegree(g)
        self.out_edges = self.orientation.out_edges(g.n)

    def next_move(self, state: GameState, system=None) -> int:
        x = _maker_reply_target(state)
        if x is not None:
            tail = self.orientation.arcs[x][0]
            y = _first_unclaimed(state, self.out_edges[tail])
            if y is not None:
                return y
        return state.min_unclaimed()

    def maker_outdegrees(self, maker_edges) -> list[int]:
        out = [0] * self.graph.n
        for x in maker_edges:
            out[self.orientation.arcs[x][0]] += 1
        return out


def orientation_pairing_breaker(g: Graph, h: Graph) -> OrientationPairingBreaker:
    if not breaker_wins_by_orientation(g, h):
        raise Refused("orientation criterion ceil(m(G)/2) < m(H) does not hold")
    return OrientationPairingBreaker(g)


class _UnionFind:
    def __init__(self):
        self.parent: dict[int, int] = {}

    def find(self, x: int) -> int:
        p = self.parent.setdefault(x, x)
        while p != x:
            gp = self.parent.setdefault(p, p)
            self.parent[x] = gp
            x, p = p, gp
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


class ForestPairingBreaker:
    """Keeps Maker's edges acyclic inside every pair of forests.

    Invariant per pair: after contracting Maker's edges of the pair, the
    unclaimed edges of each forest still form a forest. A Maker edge from
    one forest can only close a cycle in the partner forest, along the
    unique partner path between its endpoints; Breaker claims the
    smallest-id edge of that path. No unclaimed edge is ever a loop, so
    Maker never closes a cycle within a pair.
    """

    name = "forest-pairing"

    def __init__(self, g: Graph, forests: ForestDecomposition):
        self.graph = g
        parts = [set(f) for f in forests.forests]
        if len(parts) % 2:
            parts.append(set())
        self.forests = parts
        self.pair_of: dict[int, tuple[int, int]] = {}
        for i, f in enumerate(parts):
            partner = i + 1 if i % 2 == 0 else i - 1
            for x in f:
                self.pair_of[x] = (i, partner)

    def pairs(self) -> list[tuple[frozenset[int], frozenset[int]]]:
        f = self.forests
        return [(frozenset(f[i]), frozenset(f[i + 1])) for i in range(0, len(f), 2)]

    def next_move(self, state: GameState, system=None) -> int:
        x = _maker_reply_target(state)
        if x is not None and x in self.pair_of:
            own, partner = self.pair_of[x]
            pair_edges = self.forests[own] | self.forests[partner]
            uf = _UnionFind()
            for y in state.maker:
                if y != x and y in pair_edges:
                    uf.union(*self.graph.edges[y])
            u, v = self.graph.edges[x]
            path = self._partner_path(state, uf, self.forests[partner], uf.find(u), uf.find(v))
            if path:
                return min(path)
        return state.min_unclaimed()

    def _partner_path(self, state, uf: _UnionFind, forest, s: int, t: int) -> list[int] | None:
        if s == t:
            return None
        adj: dict[int, list[tuple[int, int]]] = {}
        for y in forest:
            if y in state.unclaimed:
                a, b = (uf.find(w) for w in self.graph.edges[y])
                adj.setdefault(a, []).append((b, y))
                adj.setdefault(b, []).append((a, y))
        prev: dict[int, tuple[int, int] | None] = {s: None}
        queue = deque([s])
        while queue:
            a = queue.popleft()
            if a == t:
                break
            for b, y in adj.get(a, ()):
                if b not in prev:
                    prev[b] = (a, y)
                    queue.append(b)
        if t not in prev:
            return None
        path = []
        cur = t
        while prev[cur] is not None:
            a, y = prev[cur]
            path.append(y)
            cur = a
        return path


def forest_pairing_breaker(g: Graph, forests: ForestDecomposition | None = None) -> ForestPairingBreaker:
    return ForestPairingBreaker(g, forests if forests is not None else forest_decomposition(g))


# ---------------------------------------------------------------------------
# Low-degree recursion


def peel_low_degree(g: Graph, bound: int) -> tuple[list[int], dict[int, int]]:
    """Repeatedly remove the smallest vertex of current degree <= bound.

    Returns the peel order and, for each edge touching a peeled vertex, the
    endpoint peeled first (its owner).
    """
    deg = g.degrees()
    alive = [True] * g.n
    adj: list[list[tuple[int, int]]] = [[] for _ in range(g.n)]
    for eid, (a, b) in enumerate(g.edges):
        adj[a].append((b, eid))
        adj[b].append((a, eid))
    heap = [v for v in range(g.n) if deg[v] <= bound]
    heapq.heapify(heap)
    order: list[int] = []
    owner: dict[int, int] = {}
    while heap:
        v = heapq.heappop(heap)
        if not alive[v] or deg[v] > bound:
            continue
        alive[v] = False
        order.append(v)
        for w, eid in adj[v]:
            if alive[w]:
                owner[eid] = v
                deg[w] -= 1
                if deg[w] <= bound:
                    heapq.heappush(heap, w)
    return order, owner


class LowDegreeRecursionBreaker:
    """Mirror Maker at peeled low-degree vertices; solve the leftover board exactly."""

    name = "low-degree-recursion"

    def __init__(self, g: Graph, h: Graph, cap: int = DEFAULT_CAP):
        self.graph = g
        self.min_degree = h.min_degree()
        self.bound = 2 * (self.min_degree - 1)
        self.order, self.owner = peel_low_degree(g, self.bound)
        self.owned: dict[int, list[int]] = {}
        for eid, v in self.owner.items():
            self.owned.setdefault(v, []).append(eid)
        base_edges = [eid for eid in range(g.e) if eid not in self.owner]
        self.base_edges = base_edges
        self.base: SolverStrategy | None = None
        if base_edges:
            base_system = build_h_game(g, h).restrict(base_edges)
            if base_system.winning_sets:
                try:
                    strat = SolverStrategy(base_system, Player.BREAKER, cap)
                except CapabilityError as exc:
                    raise Refused(f"leftover board after peeling is too large: {exc}") from exc
                if strat.solver.solve(Player.MAKER).winner is Player.MAKER:
                    raise Refused("leftover board after peeling is a Maker win")
                self.base = strat
        self._base_set = set(base_edges)

    def next_move(self, state: GameState, system=None) -> int:
        x = _maker_reply_target(state)
        if x is not None:
            v = self.owner.get(x)
            if v is not None:
                y = _first_unclaimed(state, self.owned[v])
                if y is not None:
                    return y
            elif self.base is not None and x in self._base_set:
                y = self.base.next_move(state)
                if y in state.unclaimed:
                    return y
        return state.min_unclaimed()


def low_degree_recursion_breaker(g: Graph, h: Graph, cap: int = DEFAULT_CAP) -> LowDegreeRecursionBreaker:
    if h.min_degree() < 1:
        raise Refused("pattern has an isolated vertex; low-degree peeling needs min degree >= 1")
    return LowDegreeRecursionBreaker(g, h, cap)


# ---------------------------------------------------------------------------
# Dispatcher


@dataclass
class DispatchAudit:
    branch: str
    k: int
    x: Fraction
    checks: dict[str, bool] = field(default_factory=dict)
    fallback: str | None = None


class DeterministicBreaker:
    """Case analysis for m(G) <= m2(H) with H strictly 2-balanced on >= 4 vertices."""

    name = "deterministic"

    def __init__(self, g: Graph, h: Graph, cap: int = DEFAULT_CAP):
        self.graph, self.pattern, self.cap = g, h, cap
        hc, _ = h.relabel_compact()
        if hc.n < 4:
            raise Refused(f"pattern has {hc.n} non-isolated vertices; at least 4 required")
        if not is_strictly_2_balanced(hc):
            raise Refused("pattern is not strictly 2-balanced")
        m2, _ = two_density(hc)
        m_g = max_density(g)[0] if g.e else Fraction(0)
        if m_g > m2:
            raise Refused(f"m(G) = {m_g} exceeds m2(H) = {m2}")
        k = m2.numerator // m2.denominator
        x = m2 - k
        self.audit = DispatchAudit(branch="", k=k, x=x)
        self.log: list[str] = []
        self.strategy = self._dispatch(hc, k, x)

    def _dispatch(self, hc: Graph, k: int, x: Fraction):
        g, a = self.graph, self.audit
        v_h, e_h = hc.n, hc.e
        if x < Fraction(1, 2):
            a.branch = "low-degree-recursion"
            strat = LowDegreeRecursionBreaker(g, hc, self.cap)
            a.checks["leftover board empty"] = not strat.base_edges
            return self._checked(strat, a.checks["leftover board empty"] or strat.base is None)
        if k >= 3:
            a.branch = "orientation-k>=3"
            ok = breaker_wins_by_orientation(g, hc)
            a.checks["ceil(m(G)/2) < m(H)"] = ok
            return self._checked(OrientationPairingBreaker(g) if ok else None, ok)
        if 4 * e_h < v_h * v_h:
            a.branch = "orientation-sparse"
            ok = breaker_wins_by_orientation(g, hc)
            a.checks["ceil(m(G)/2) < m(H)"] = ok
            return self._checked(OrientationPairingBreaker(g) if ok else None, ok)
        if v_h >= 5:
            a.branch = "forest-pairing"
            ok = breaker_wins_by_arboricity(g, hc)
            a.checks["ceil(ar(G)/2) < ar(H)"] = ok
            return self._checked(ForestPairingBreaker(g, forest_decomposition(g)) if ok and g.e else None, ok)
        if e_h == 4:  # C4
            a.branch = "forest-pairing-c4"
            ok = breaker_wins_by_arboricity(g, hc)
            a.checks["ceil(ar(G)/2) < ar(H)"] = ok
            return self._checked(ForestPairingBreaker(g, forest_decomposition(g)) if ok and g.e else None, ok)
        a.branch = "solver-k4"
        return self._solver()

    def _checked(self, strat, ok: bool):
        if ok and strat is not None:
            return strat
        if ok:  # empty board
            return None
        self.audit.fallback = "solver"
        self.log.append(f"branch {self.audit.branch} precondition failed; using exact solver")
        return self._solver()

    def _solver(self):
        system = build_h_game(self.graph, self.pattern)
        if not system.winning_sets:
            return None
        try:
            return SolverStrategy(system, Player.BREAKER, self.cap)
        except CapabilityError as exc:
            raise Refused(f"no constructive branch applies and the board is too large: {exc}") from exc

    @property
    def notes(self) -> list[str]:
        return [f"branch={self.audit.branch}"] + self.log

    def next_move(self, state: GameState, system=None) -> int:
        if self.strategy is None:
            return state.min_unclaimed()
        return self.strategy.next_move(state, system)


def deterministic_breaker(g: Graph, h: Graph, cap: int = DEFAULT_CAP) -> DeterministicBreaker:
    return DeterministicBreaker(g, h, cap)


__all__ = [
    "PairingPlan",
    "PairingBreaker",
    "OrientationPairingBreaker",
    "ForestPairingBreaker",
    "LowDegreeRecursionBreaker",
    "DeterministicBreaker",
    "DispatchAudit",
    "breaker_wins_by_arboricity",
    "breaker_wins_by_orientation",
    "orientation_pairing_breaker",
    "forest_pairing_breaker",
    "low_degree_recursion_breaker",
    "deterministic_breaker",
    "peel_low_degree",
]
