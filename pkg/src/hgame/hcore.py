"""H-core preprocessing, minimal H-closed components and the composite Breaker.

Edges are classified by how many copies of H contain them: free (none),
open (exactly one) or closed (two or more). A copy with at least two open
edges is unproblematic: Breaker can neutralise it with a single pair of
its open edges. Preprocessing strips such copies (recording the pairs) and
then drops free edges; what remains is the H-core, where every edge lies
in a copy and every copy is problematic.
"""

from __future__ import annotations

import heapq
import random
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterable, Sequence

from .errors import CapabilityError, Refused
from .game import GameState, Player, WinningSetSystem
from .graph import Graph, HCopy, enumerate_copies
from .solver import DEFAULT_CAP, SolverStrategy


class EdgeClass(str, Enum):
    FREE = "free"
    OPEN = "open"
    CLOSED = "closed"


def _class_of(count: int) -> EdgeClass:
    if count == 0:
        return EdgeClass.FREE
    return EdgeClass.OPEN if count == 1 else EdgeClass.CLOSED


@dataclass(frozen=True)
class Classification:
    classes: tuple[EdgeClass, ...]  # by edge id
    copies: tuple[HCopy, ...]
    problematic: tuple[bool, ...]  # by copy index

    def of(self, cls: EdgeClass) -> list[int]:
        return [i for i, c in enumerate(self.classes) if c is cls]


def classify_edges(g: Graph, h: Graph) -> Classification:
    copies = enumerate_copies(g, h)
    count = [0] * g.e
    for c in copies:
        for x in c.edge_ids:
            count[x] += 1
    problematic = tuple(sum(count[x] == 1 for x in c.edge_ids) <= 1 for c in copies)
    return Classification(tuple(_class_of(k) for k in count), tuple(copies), problematic)


# ---------------------------------------------------------------------------
# Preprocessing


@dataclass(frozen=True)
class RemovalStep:
    copy: tuple[int, ...]
    pair: tuple[int, int]
    removed: tuple[int, ...]


@dataclass(frozen=True)
class HCoreResult:
    core_edges: frozenset[int]
    pairs: tuple[tuple[int, int], ...]
    removed_free: tuple[int, ...]
    iterations: tuple[RemovalStep, ...]
    core_copies: tuple[tuple[int, ...], ...]

    @property
    def k(self) -> int:
        return len(self.pairs)

    def removed_edges(self) -> set[int]:
        out = set(self.removed_free)
        for step in self.iterations:
            out.update(step.removed)
        return out

    def summary(self) -> dict:
        return {
            "core_edges": len(self.core_edges),
            "k": self.k,
            "removed_free": len(self.removed_free),
            "core_copies": len(self.core_copies),
        }


def preprocess(
    g: Graph, h: Graph, order_seed: int = 0, copies: Sequence[HCopy] | None = None
) -> HCoreResult:
    """Strip unproblematic copies one at a time, then drop free edges.

    Among the currently unproblematic copies the one of smallest
    seed-dependent rank goes first. Deleting the open edges of a copy
    destroys only that copy, so copy-membership counts are updated
    incrementally, and a copy that becomes unproblematic stays so until
    removed.
    """
    copies = list(enumerate_copies(g, h) if copies is None else copies)
    sets = [c.edge_ids for c in copies]
    count = [0] * g.e
    containing: list[list[int]] = [[] for _ in range(g.e)]
    for i, s in enumerate(sets):
        for x in s:
            count[x] += 1
            containing[x].append(i)
    rank = list(range(len(sets)))
    random.Random(order_seed).shuffle(rank)

    open_count = [sum(count[x] == 1 for x in s) for s in sets]
    alive = [True] * len(sets)
    present = [True] * g.e
    heap = [(rank[i], i) for i in range(len(sets)) if open_count[i] >= 2]
    heapq.heapify(heap)
    steps: list[RemovalStep] = []
    while heap:
        _, i = heapq.heappop(heap)
        if not alive[i]:
            continue
        alive[i] = False
        opened = [x for x in sets[i] if count[x] == 1]
        for x in sets[i]:
            count[x] -= 1
            if count[x] == 0:
                present[x] = False
            elif count[x] == 1:
                # x is now open in the one live copy still containing it
                for j in containing[x]:
                    if alive[j]:
                        open_count[j] += 1
                        if open_count[j] == 2:
                            heapq.heappush(heap, (rank[j], j))
        steps.append(RemovalStep(sets[i], (opened[0], opened[1]), tuple(opened)))

    free = tuple(x for x in range(g.e) if present[x] and count[x] == 0)
    core = frozenset(x for x in range(g.e) if present[x] and count[x] > 0)
    return HCoreResult(
        core_edges=core,
        pairs=tuple(s.pair for s in steps),
        removed_free=free,
        iterations=tuple(steps),
        core_copies=tuple(sets[i] for i in range(len(sets)) if alive[i]),
    )


# ---------------------------------------------------------------------------
# Minimal H-closed components


@dataclass(frozen=True)
class HClosedComponent:
    edge_ids: frozenset[int]
    copies: tuple[tuple[int, ...], ...]

    def system(self) -> WinningSetSystem:
        return WinningSetSystem(self.edge_ids, self.copies)


def components_of_copies(copies: Iterable[Sequence[int]]) -> list[HClosedComponent]:
    """Group copies that are linked by chains of shared edges."""
    copies = [tuple(c) for c in copies]
    parent: dict[int, int] = {}

    def find(x: int) -> int:
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for c in copies:
        for x in c[1:]:
            a, b = find(c[0]), find(x)
            if a != b:
                parent[max(a, b)] = min(a, b)
    groups: dict[int, list[tuple[int, ...]]] = {}
    for c in copies:
        groups.setdefault(find(c[0]), []).append(c)
    out = [
        HClosedComponent(frozenset(x for c in cs for x in c), tuple(sorted(cs)))
        for cs in groups.values()
    ]
    return sorted(out, key=lambda comp: min(comp.edge_ids))


def minimal_h_closed_components(core: Graph, h: Graph) -> list[HClosedComponent]:
    """Partition an H-core into minimal H-closed pieces (edge ids refer to ``core``)."""
    copies = [c.edge_ids for c in enumerate_copies(core, h)] if core.e else []
    covered = {x for c in copies for x in c}
    for x in range(core.e):
        if x not in covered:
            raise Refused(f"not an H-core: edge {x} {core.edges[x]} lies in no copy")
    return components_of_copies(copies)


# ---------------------------------------------------------------------------
# Composite strategy


BaseFactory = Callable[[WinningSetSystem], object]


def solver_base(cap: int = DEFAULT_CAP) -> BaseFactory:
    def make(system: WinningSetSystem):
        return SolverStrategy(system, Player.BREAKER, cap)

    return make


class CompositeBreaker:
    """Core move: answer inside its component; pair move: take the partner; else smallest unclaimed."""

    name = "composite"

    def __init__(
        self,
        g: Graph,
        h: Graph,
        base: BaseFactory | None = None,
        cap: int = DEFAULT_CAP,
        order_seed: int = 0,
        result: HCoreResult | None = None,
    ):
        self.graph = g
        self.result = result if result is not None else preprocess(g, h, order_seed)
        self.components = components_of_copies(self.result.core_copies)
        make = base or solver_base(cap)
        self.strategies = []
        self.component_of: dict[int, int] = {}
        for idx, comp in enumerate(self.components):
            try:
                self.strategies.append(make(comp.system()))
            except CapabilityError as exc:
                raise Refused(
                    f"component {idx} has {len(comp.edge_ids)} edges, beyond the solver cap: {exc}"
                ) from exc
            for x in comp.edge_ids:
                self.component_of[x] = idx
        self.partner: dict[int, int] = {}
        for a, b in self.result.pairs:
            self.partner[a], self.partner[b] = b, a

    def next_move(self, state: GameState, system=None) -> int:
        if state.history and state.history[-1][0] is Player.MAKER:
            x = state.history[-1][1]
            idx = self.component_of.get(x)
            if idx is not None:
                y = self.strategies[idx].next_move(state, None)
                if y in state.unclaimed:
                    return y
            else:
                y = self.partner.get(x)
                if y is not None and y in state.unclaimed:
                    return y
        return state.min_unclaimed()


def composite_breaker(
    g: Graph,
    h: Graph,
    base: BaseFactory | None = None,
    cap: int = DEFAULT_CAP,
    order_seed: int = 0,
) -> CompositeBreaker:
    return CompositeBreaker(g, h, base, cap, order_seed)


# ---------------------------------------------------------------------------
# Growth process


@dataclass(frozen=True)
class GrowthStep:
    index: int
    copy: tuple[int, ...]
    kind: str  # "regular" or "degenerate"
    reg: int
    deg: int
    fully_open: int
    delta: int
    via_edge: int | None


@dataclass
class GrowthTrace:
    start: tuple[int, ...]
    steps: list[GrowthStep] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.steps)


def grow_h_closed(gprime: Graph, h: Graph, omega: Sequence[int] | None = None) -> GrowthTrace:
    """Rebuild a minimal H-closed graph copy by copy, tracking fully-open copies.

    ``omega`` lists edge ids from smallest to largest (default: by id).
    Whenever the procedure leaves a choice, the lexicographically smallest
    copy is taken.
    """
    all_copies = [c.edge_ids for c in enumerate_copies(gprime, h)]
    if not all_copies:
        raise Refused("graph contains no copy of the pattern")
    target = {x for c in all_copies for x in c}
    if len(target) != gprime.e:
        raise Refused("some edge lies in no copy; not part of an H-core")
    rank = {x: i for i, x in enumerate(omega if omega is not None else range(gprime.e))}
    count_full = [0] * gprime.e
    for c in all_copies:
        for x in c:
            count_full[x] += 1

    def verts(c: Sequence[int]) -> set[int]:
        return {w for x in c for w in gprime.edges[x]}

    chosen = [all_copies[0]]
    built = set(all_copies[0])
    built_v = verts(all_copies[0])
    new_vertices: list[set[int]] = [set(built_v)]
    regular_flags = [False]  # H_0 is never fully open
    touched = [False]
    trace = GrowthTrace(start=all_copies[0])
    reg = dg = 0
    was_fully = [False]
    while len(built) < len(target):
        k = len(chosen)
        inside = [c for c in all_copies if built.issuperset(c)]
        cnt: dict[int, int] = {}
        for c in inside:
            for x in c:
                cnt[x] = cnt.get(x, 0) + 1

        def unproblematic(c) -> bool:
            return sum(cnt[x] == 1 for x in c) >= 2

        anchor = next((c for c in chosen if built.issuperset(c) and unproblematic(c)), None)
        if anchor is None:
            anchor = next((c for c in inside if unproblematic(c)), None)
            if anchor is not None:
                trace.notes.append(f"step {k}: unproblematic copy {anchor} is not one of H_0..H_{k-1}")
        via = None
        nxt = None
        if anchor is not None:
            cands = [x for x in anchor if cnt[x] == 1 and count_full[x] >= 2]
            if not cands:
                raise Refused(f"step {k}: no open-in-built, closed-in-target edge in {anchor}")
            via = min(cands, key=rank.__getitem__)
            nxt = next((c for c in all_copies if via in c and not built.issuperset(c)), None)
        else:
            nxt = next(
                (c for c in all_copies if not built.issuperset(c) and built.intersection(c)), None
            )
        if nxt is None:
            raise Refused(f"step {k}: the process cannot continue; input is not minimal H-closed")

        cv = verts(nxt)
        shared_v = cv & built_v
        kind = "regular" if len(shared_v) == 2 else "degenerate"
        if kind == "regular":
            reg += 1
        else:
            dg += 1
        # vertices of nxt touch the new vertices of earlier copies
        for i in range(len(chosen)):
            if not touched[i] and new_vertices[i] & cv:
                touched[i] = True
        chosen.append(nxt)
        new_vertices.append(cv - built_v)
        regular_flags.append(kind == "regular")
        touched.append(False)
        built.update(nxt)
        built_v |= cv
        fully = [regular_flags[i] and not touched[i] for i in range(len(chosen))]
        fo = sum(fully)
        # copies fully open at time k-1 that are not any more (H_k itself excluded)
        delta = sum(1 for i in range(k) if was_fully[i] and not fully[i])
        trace.steps.append(GrowthStep(k, nxt, kind, reg, dg, fo, delta, via))
        was_fully = fully
    return trace


def check_growth_trace(trace: GrowthTrace, h: Graph) -> list[str]:
    """Return the violated inequalities (empty when the trace is consistent)."""
    v_h, e_h = h.relabel_compact()[0].n, h.e
    problems = []
    for s in trace.steps:
        if s.kind == "regular" and s.delta > 1:
            problems.append(f"step {s.index}: regular step with delta {s.delta}")
        if s.kind == "degenerate" and s.delta > v_h - 1:
            problems.append(f"step {s.index}: degenerate step with delta {s.delta}")
        if e_h > 2 and s.fully_open * (e_h - 2) < s.reg * (e_h - 3) - s.deg * v_h * (e_h - 2):
            problems.append(f"step {s.index}: fully-open count {s.fully_open} below the counting bound")
    if e_h >= 4:
        steps = trace.steps
        for a, s in enumerate(steps):
            if s.kind != "regular" or s.delta != 1:
                continue
            for b in range(a + 1, min(a + e_h - 2, len(steps))):
                if steps[b].kind != "regular":
                    break
                if steps[b].delta != 0:
                    problems.append(
                        f"step {steps[b].index}: delta {steps[b].delta} within a regular run after step {s.index}"
                    )
    return problems
