"""Maker-side strategies.

* :func:`hp_construct` builds H_P: H plus a disjoint triangle joined to
  one vertex of H by a path of three edges.
* :func:`triangle_maker_on_k5minus` wins the triangle game on a K5-minus-edge
  copy within four Maker moves.
* :class:`HPPhaseMaker` grows triangle -> N1 -> N2 -> N3 and then builds H
  inside G[N3], which closes a copy of H_P.
* :func:`auxiliary_container_breaker` plays Maker's side of an H-game as
  Breaker of an auxiliary hypergraph given by an explicit container family.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import CapabilityError, Refused
from .game import GameState, Player, WinningSetSystem, potential_move
from .graph import Graph, enumerate_copies, expansion_check, k5_minus
from .solver import DEFAULT_CAP, Solver, SolverStrategy


def hp_construct(h: Graph, attach_vertex: int) -> Graph:
    if not 0 <= attach_vertex < h.n:
        raise ValueError(f"attach vertex {attach_vertex} is not a vertex of H (0..{h.n - 1})")
    t0, t1, t2, p1, p2 = range(h.n, h.n + 5)
    extra = [(t0, t1), (t0, t2), (t1, t2), (t0, p1), (p1, p2), (p2, attach_vertex)]
    return Graph(h.n + 5, list(h.edges) + extra)


def _has_triangle(g: Graph, edge_ids) -> tuple[int, int, int] | None:
    adj: dict[int, set[int]] = {}
    for x in edge_ids:
        u, v = g.edges[x]
        adj.setdefault(u, set()).add(v)
        adj.setdefault(v, set()).add(u)
    for u in sorted(adj):
        for v in sorted(adj[u]):
            if v > u:
                common = adj[u] & adj[v]
                if common:
                    return (u, v, min(common))
    return None


_K3 = Graph(3, [(0, 1), (0, 2), (1, 2)])


def first_k5minus_copy(g: Graph):
    copies = enumerate_copies(g, k5_minus())
    if not copies:
        raise Refused("board contains no copy of K5 minus an edge")
    return copies[0]


class K5MinusTriangleMaker:
    """Triangle on a fixed K5-minus-edge copy, as fast as the exact solver allows.

    At each turn Maker takes a move achieving the smallest number of own
    moves that still forces a triangle against every Breaker reply; ties
    go to moves that leave a one-edge threat, then to the solver's order.
    """

    name = "k5minus-triangle"

    def __init__(self, g: Graph, copy_edges: Sequence[int] | None = None, budget: int = 4):
        self.graph = g
        if copy_edges is None:
            copy_edges = first_k5minus_copy(g).edge_ids
        self.copy_edges = tuple(sorted(copy_edges))
        sub = g.edge_subgraph(self.copy_edges)
        tri = [tuple(self.copy_edges[i] for i in c.edge_ids) for c in enumerate_copies(sub, _K3)]
        self.system = WinningSetSystem(self.copy_edges, tri)
        self.solver = Solver(self.system)
        self.budget = budget
        self.notes: list[str] = []

    def moves_used(self, state: GameState) -> int:
        return sum(1 for x in self.copy_edges if x in state.maker)

    def triangle(self, state: GameState) -> tuple[int, int, int] | None:
        return _has_triangle(self.graph, [x for x in self.copy_edges if x in state.maker])

    def next_move(self, state: GameState, system=None) -> int:
        left = max(self.budget - self.moves_used(state), 0)
        res = self.solver.residuals(state.maker, state.breaker)
        if res:
            t, moves = self.solver.fastest_maker_moves(state, max(left, 1))
            if moves:
                threats = [x for x in moves if self._threatens(state, x)]
                return (threats or moves)[0]
            # no forced win left inside the copy: keep the best chance going
            best = potential_move(state, self.system)
            if best in state.unclaimed:
                return best
        return state.min_unclaimed()

    def _threatens(self, state: GameState, x: int) -> bool:
        owned = state.maker | {x}
        for s in self.system.winning_sets:
            if x in s and state.breaker.isdisjoint(s):
                if sum(1 for y in s if y not in owned) == 1:
                    return True
        return False


def triangle_maker_on_k5minus(g: Graph, copy_edges: Sequence[int] | None = None) -> K5MinusTriangleMaker:
    return K5MinusTriangleMaker(g, copy_edges)


# ---------------------------------------------------------------------------
# Phase strategy


@dataclass
class PhaseState:
    phase: int = 1
    triangle: tuple[int, int, int] | None = None
    v1: int | None = None
    n1: list[int] = field(default_factory=list)
    n2: list[int] = field(default_factory=list)
    n3: list[int] = field(default_factory=list)
    moves: dict[int, int] = field(default_factory=lambda: {i: 0 for i in range(1, 6)})
    failed: list[int] = field(default_factory=list)
    parent: dict[int, int] = field(default_factory=dict)  # chain vertex -> previous chain vertex


def default_budgets(n: int, p: float) -> tuple[int, int, int]:
    """Target sizes of N1, N2, N3: 8/(np^2), 1/p and n/6, rounded up."""
    if p <= 0:
        return (0, 0, 0)
    return (math.ceil(8 / (n * p * p)), math.ceil(1 / p), math.ceil(n / 6))


class HPPhaseMaker:
    name = "hp-phase"

    def __init__(
        self,
        g: Graph,
        h: Graph,
        budgets: tuple[int, int, int] | None = None,
        p: float | None = None,
        cap: int = DEFAULT_CAP,
        precheck: bool = False,
        seed: int = 0,
    ):
        self.graph, self.pattern, self.cap = g, h, cap
        self.notes: list[str] = []
        if p is None:
            p = g.e / math.comb(g.n, 2) if g.n > 1 else 0.0
        self.p = p
        b = budgets or default_budgets(g.n, p)
        limit = max(g.n - 3, 0)
        self.budgets = tuple(min(x, limit) for x in b)
        if precheck and p > 0:
            rep = expansion_check(g, 0.5, g.n * p, seed=seed)
            if not rep.passed:
                self.notes.append(f"expansion precheck failed (worst ratio {rep.worst_ratio:.3f})")
        self.opening = K5MinusTriangleMaker(g)
        self.state = PhaseState()
        self._inc = [dict() for _ in range(g.n)]
        for eid, (u, v) in enumerate(g.edges):
            self._inc[u][v] = eid
            self._inc[v][u] = eid
        self._phase5: object | None = None
        self._phase5_system: WinningSetSystem | None = None
        self._used: set[int] = set()

    # -- helpers ------------------------------------------------------------
    def _grow(self, state: GameState, sources: Sequence[int], exclude: set[int]) -> tuple[int, int, int] | None:
        """Unclaimed edge from a source to a fresh vertex (smallest source, then smallest target)."""
        for s in sorted(sources):
            for w in sorted(self._inc[s]):
                if w in exclude:
                    continue
                eid = self._inc[s][w]
                if eid in state.unclaimed:
                    return eid, s, w
        return None

    def _free_degree(self, state: GameState, v: int, avoid) -> int:
        return sum(1 for w, e in self._inc[v].items() if w not in avoid and e in state.unclaimed)

    def _advance(self, state: GameState) -> None:
        ps = self.state
        if ps.phase == 1:
            tri = self.opening.triangle(state)
            if tri is not None:
                ps.triangle = tri
                ps.v1 = max(tri, key=lambda v: (self._free_degree(state, v, tri), -v))
                ps.phase = 2
            elif self.opening.moves_used(state) >= 4 or not self.opening.solver.residuals(state.maker, state.breaker):
                self._fail(1, "no triangle on the K5-minus copy")
                ps.phase = 6
        if ps.phase == 2 and len(ps.n1) >= self.budgets[0]:
            ps.phase = 3
        if ps.phase == 3 and len(ps.n2) >= self.budgets[1]:
            ps.phase = 4
        if ps.phase == 4 and len(ps.n3) >= self.budgets[2]:
            ps.phase = 5

    def _fail(self, phase: int, why: str) -> None:
        self.state.failed.append(phase)
        self.notes.append(f"phase {phase} failed: {why}")

    def _phase5_strategy(self, state: GameState):
        if self._phase5_system is None:
            vs = self.state.n3
            ids = self.graph.induced_edge_ids(vs)
            sub = self.graph.edge_subgraph(ids)
            copies = [tuple(ids[i] for i in c.edge_ids) for c in enumerate_copies(sub, self.pattern)]
            self._phase5_system = WinningSetSystem(ids, copies)
            if not copies:
                self._fail(5, f"G[N3] on {len(vs)} vertices contains no copy of H")
            else:
                try:
                    self._phase5 = SolverStrategy(self._phase5_system, Player.MAKER, self.cap)
                    self.notes.append(f"phase 5: exact solver on {len(ids)} edges")
                except CapabilityError:
                    self._phase5 = None
                    self.notes.append(f"phase 5: greedy completion on {len(ids)} edges, {len(copies)} copies")
        return self._phase5

    # -- strategy -----------------------------------------------------------
    def next_move(self, state: GameState, system=None) -> int:
        self._advance(state)
        ps = self.state
        move = None
        if ps.phase == 1:
            move = self.opening.next_move(state)
        elif ps.phase in (2, 3, 4):
            move = self._chain_move(state)
            if move is None:
                self._advance(state)
                if ps.phase == 5:
                    move = self._phase5_move(state)
        elif ps.phase == 5:
            move = self._phase5_move(state)
        if move is None or move not in state.unclaimed:
            move = state.min_unclaimed()
        ps.moves[min(ps.phase, 5)] = ps.moves.get(min(ps.phase, 5), 0) + 1
        return move

    def _chain_move(self, state: GameState) -> int | None:
        ps = self.state
        k = set(ps.triangle)
        while ps.phase in (2, 3, 4):
            if ps.phase == 2:
                sources, target, exclude = [ps.v1], ps.n1, k | set(ps.n1)
            elif ps.phase == 3:
                sources, target, exclude = ps.n1, ps.n2, k | set(ps.n1) | set(ps.n2)
            else:
                sources, target, exclude = ps.n2, ps.n3, k | set(ps.n1) | set(ps.n2) | set(ps.n3)
            found = self._grow(state, sources, exclude)
            if found is not None:
                eid, s, w = found
                target.append(w)
                ps.parent[w] = s
                return eid
            self._fail(ps.phase, f"reached {len(target)} of {self.budgets[ps.phase - 2]} vertices")
            ps.phase += 1
        return None

    def _phase5_move(self, state: GameState) -> int | None:
        strat = self._phase5_strategy(state)
        if strat is not None:
            return strat.next_move(state)
        system = self._phase5_system
        if system is None or not system.winning_sets:
            return None
        x = potential_move(state, system)
        return x if x in state.unclaimed else None

    def maker_path(self, w: int) -> list[int]:
        """Chain from an N3 vertex back to v1."""
        out = [w]
        while out[-1] in self.state.parent:
            out.append(self.state.parent[out[-1]])
        return out


def hp_phase_maker(g: Graph, h: Graph, budgets=None, p: float | None = None, **kw) -> HPPhaseMaker:
    return HPPhaseMaker(g, h, budgets, p, **kw)


# ---------------------------------------------------------------------------
# Auxiliary container game


@dataclass(frozen=True)
class ContainerFamily:
    """Fingerprints T_i (tuples of edge sets) and containers C_i over a ground board."""

    ground: frozenset[int]
    fingerprints: tuple[tuple[frozenset[int], ...], ...]
    containers: tuple[frozenset[int], ...]

    def __post_init__(self):
        if len(self.fingerprints) != len(self.containers):
            raise ValueError("one fingerprint tuple per container is required")
        for i, (t, c) in enumerate(zip(self.fingerprints, self.containers)):
            if not c <= self.ground:
                raise ValueError(f"container {i} leaves the ground board")
            for part in t:
                if not part <= c:
                    raise ValueError(f"fingerprint {i} is not inside its container")

    @classmethod
    def build(cls, ground, fingerprints, containers) -> ContainerFamily:
        return cls(
            frozenset(ground),
            tuple(tuple(frozenset(s) for s in t) for t in fingerprints),
            tuple(frozenset(c) for c in containers),
        )

    def validate_delta(self, delta: Fraction | float) -> bool:
        limit = (1 - Fraction(delta)) * len(self.ground)
        return all(len(c) <= limit for c in self.containers)

    def covers(self, edge_set) -> bool:
        """Some i with T_i inside ``edge_set`` inside C_i."""
        e = frozenset(edge_set)
        return any(
            all(part <= e for part in t) and e <= c for t, c in zip(self.fingerprints, self.containers)
        )

    def __len__(self) -> int:
        return len(self.containers)


def auxiliary_sets(board, fam: ContainerFamily, removed=()) -> list[frozenset[int]]:
    """(ground minus C_i) restricted to the live board, for every i whose fingerprint survives."""
    live = frozenset(board) - frozenset(removed)
    return [
        (fam.ground - c) & live
        for t, c in zip(fam.fingerprints, fam.containers)
        if all(part <= live for part in t)
    ]


class _SwappedView:
    """A GameState seen from the other side: Maker's elements appear as Breaker's."""

    def __init__(self, state: GameState):
        self._s = state
        self.maker = state.breaker
        self.breaker = state.maker
        self.unclaimed = state.unclaimed

    def min_unclaimed(self):
        return self._s.min_unclaimed()


class AuxiliaryContainerMaker:
    name = "container-aux"

    def __init__(self, aux: WinningSetSystem, potential: Fraction):
        self.aux = aux
        self.potential = potential

    def next_move(self, state: GameState, system=None) -> int:
        return potential_move(_SwappedView(state), self.aux)


def auxiliary_container_breaker(
    system: WinningSetSystem, fam: ContainerFamily, removed=()
) -> AuxiliaryContainerMaker:
    """Maker's H-game strategy: Breaker's potential strategy on the auxiliary hypergraph.

    Refused unless the auxiliary potential is below 1 (Maker moves first
    in the H-game, so he is the first mover of the auxiliary game).
    """
    sets = auxiliary_sets(system.board, fam, removed)
    value = sum((Fraction(1, 2 ** len(s)) for s in sets), Fraction(0))
    if value >= 1:
        raise Refused(f"auxiliary potential {value} is not below 1")
    live = set(system.board) - set(removed)
    return AuxiliaryContainerMaker(WinningSetSystem(live, sets), value)
