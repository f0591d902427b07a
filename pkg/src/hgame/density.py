"""Exact density invariants, forest decompositions and bounded-outdegree orientations.

All densities are :class:`fractions.Fraction`. Maxima over subgraphs are taken
over vertex subsets with their induced edges: for a fixed vertex set the
induced subgraph has the most edges, so it attains every maximum used here.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

import networkx as nx
import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import breadth_first_order, maximum_flow

from .errors import CapabilityError, Refused
from .graph import Graph

EXACT_CAP = 16


@dataclass(frozen=True)
class DensityReport:
    n: int
    e: int
    d2: Fraction | None
    m2: Fraction | None
    m: Fraction
    ar: Fraction
    is_2_balanced: bool | None
    is_strictly_2_balanced: bool | None
    witnesses: dict[str, tuple[int, ...]] = field(default_factory=dict)

    def to_json(self) -> dict:
        def q(x: Fraction | None):
            return None if x is None else str(x)

        return {
            "n": self.n,
            "e": self.e,
            "d2": q(self.d2),
            "m2": q(self.m2),
            "m": q(self.m),
            "ar": q(self.ar),
            "is_2_balanced": self.is_2_balanced,
            "is_strictly_2_balanced": self.is_strictly_2_balanced,
            "witnesses": {k: list(v) for k, v in self.witnesses.items()},
        }


def d2(g: Graph) -> Fraction:
    if g.n < 3:
        raise ValueError("d2 needs at least 3 vertices")
    return Fraction(g.e - 1, g.n - 2)


# ---------------------------------------------------------------------------
# Exhaustive search over vertex subsets


def _subset_edge_counts(g: Graph) -> list[int]:
    """``counts[S]`` = number of edges induced by the vertex bitmask ``S``."""
    if g.n > 24:
        raise CapabilityError(f"{g.n} vertices is too many for subset enumeration")
    masks = [0] * g.n
    for u, v in g.edges:
        masks[u] |= 1 << v
        masks[v] |= 1 << u
    counts = [0] * (1 << g.n)
    for s in range(1, 1 << g.n):
        low = (s & -s).bit_length() - 1
        rest = s & (s - 1)
        counts[s] = counts[rest] + (masks[low] & rest).bit_count()
    return counts


def _bits(s: int) -> tuple[int, ...]:
    out = []
    while s:
        low = s & -s
        out.append(low.bit_length() - 1)
        s ^= low
    return tuple(out)


def _exhaustive_max(
    g: Graph, minus_e: int, minus_v: int, min_size: int, counts: list[int] | None = None
) -> tuple[Fraction, tuple[int, ...]] | None:
    """max over |S| >= min_size of (e(S) - minus_e) / (|S| - minus_v), lexicographically first witness."""
    if counts is None:
        counts = _subset_edge_counts(g)
    best_num, best_den, best_set = None, 1, ()
    for s in range(1, 1 << g.n):
        size = s.bit_count()
        if size < min_size:
            continue
        num, den = counts[s] - minus_e, size - minus_v
        if best_num is None:
            better, tie = True, False
        else:
            lhs, rhs = num * best_den, best_num * den
            better, tie = lhs > rhs, lhs == rhs
        if better or (tie and _bits(s) < best_set):
            best_num, best_den, best_set = num, den, _bits(s)
    if best_num is None:
        return None
    return Fraction(best_num, best_den), best_set


# ---------------------------------------------------------------------------
# Flow backend (max-closure / min-cut, Dinkelbach iteration on the ratio)


def _max_closure(g: Graph, num: int, den: int, forced: frozenset[int] = frozenset()):
    """Maximize ``den * e(S) - num * |S|`` over vertex sets S containing ``forced``.

    Returns (value, S). Density network: source -> edge node (cap den),
    edge node -> both endpoints (uncapacitated), vertex -> sink (cap num).
    The source side of a minimum cut is an optimal closure.
    """
    n, e = g.n, g.e
    src, snk = n + e, n + e + 1
    inf = den * e + num * n + 1
    tails, heads, caps = [], [], []
    for i, (u, v) in enumerate(g.edges):
        node = n + i
        tails += [src, node, node]
        heads += [node, u, v]
        caps += [den, inf, inf]
    for x in range(n):
        tails.append(x)
        heads.append(snk)
        caps.append(num if x not in forced else 0)
    for x in forced:
        tails.append(src)
        heads.append(x)
        caps.append(inf)
    size = n + e + 2
    cap = csr_matrix((np.array(caps, dtype=np.int64), (tails, heads)), shape=(size, size))
    cap.sum_duplicates()
    cap = cap.astype(np.int32) if inf < 2**31 else cap
    flow = maximum_flow(cap, src, snk).flow
    residual = (cap - flow).tocsr()
    residual.data[residual.data < 0] = 0
    residual.eliminate_zeros()
    reach = breadth_first_order(residual, src, directed=True, return_predecessors=False)
    chosen = frozenset(int(x) for x in reach if x < n)
    value = den * _induced_count(g, chosen) - num * len(chosen)
    return value, chosen


def _induced_count(g: Graph, vs: frozenset[int]) -> int:
    return sum(1 for u, v in g.edges if u in vs and v in vs)


def _flow_max_m(g: Graph) -> tuple[Fraction, tuple[int, ...]]:
    """max e(S)/|S| on a graph with at least one edge."""
    best_set = frozenset(range(g.n))
    best = Fraction(g.e, g.n)
    while True:
        value, chosen = _max_closure(g, best.numerator, best.denominator)
        if value <= 0 or not chosen:
            return best, tuple(sorted(best_set))
        best_set = chosen
        best = Fraction(_induced_count(g, chosen), len(chosen))


def _flow_max_ar(g: Graph) -> tuple[Fraction, tuple[int, ...]]:
    """max e(S)/(|S|-1) on a connected graph that contains a cycle.

    With ratio > 1 a vertex of degree <= 1 can always be dropped, so the
    search runs on the 2-core. Improvement tests force one vertex at a time.
    """
    core = g.core_vertices(2)
    sub_ids = g.induced_edge_ids(core)
    sub = g.edge_subgraph(sub_ids)
    best_set = frozenset(core)
    best = Fraction(_induced_count(sub, best_set), len(best_set) - 1)
    while True:
        improved = False
        # unforced pass first: a positive closure is already an improvement
        value, chosen = _max_closure(sub, best.numerator, best.denominator)
        if value + best.numerator > 0 and len(chosen) >= 2:
            best_set, improved = chosen, True
        else:
            # a vertex that admits no improving set through it is dropped for later tests
            work = sub
            for x in sorted(core):
                value, chosen = _max_closure(work, best.numerator, best.denominator, frozenset([x]))
                if value + best.numerator > 0 and len(chosen) >= 2:
                    best_set, improved = chosen, True
                    break
                work = work.edge_subgraph(i for i, (u, v) in enumerate(work.edges) if x not in (u, v))
        if not improved:
            return best, tuple(sorted(best_set))
        best = Fraction(_induced_count(sub, best_set), len(best_set) - 1)


# ---------------------------------------------------------------------------
# Public invariants


def _per_component(g: Graph, kind: str, exact_cap: int, flow: bool):
    """Max of m or ar over connected components (a maximizer may be taken connected)."""
    best, witness = Fraction(0), ()
    comps = g.components()
    label = [0] * g.n
    for ci, comp in enumerate(comps):
        for v in comp:
            label[v] = ci
    buckets: list[list[tuple[int, int]]] = [[] for _ in comps]
    for u, v in g.edges:
        buckets[label[u]].append((u, v))
    for comp, comp_edges in zip(comps, buckets):
        if len(comp) < 2:
            continue
        pos = {v: i for i, v in enumerate(comp)}
        local = Graph(len(comp), [(pos[u], pos[v]) for u, v in comp_edges])
        if local.n <= exact_cap:
            if kind == "m":
                val, wit = _exhaustive_max(local, 0, 0, 1)
            else:
                val, wit = _exhaustive_max(local, 0, 1, 2)
        elif not flow:
            raise CapabilityError(f"component with {local.n} vertices exceeds exact cap {exact_cap}")
        elif kind == "m":
            val, wit = _flow_max_m(local)
        elif local.e < local.n:  # a tree
            val, wit = Fraction(1), local.edges[0]
        else:
            val, wit = _flow_max_ar(local)
        wit = tuple(sorted(comp[i] for i in wit))
        if val > best or (val == best and (not witness or wit < witness)):
            best, witness = val, wit
    return best, witness


def max_density(g: Graph, exact_cap: int = EXACT_CAP, flow: bool = True) -> tuple[Fraction, tuple[int, ...]]:
    """m(G) = max e(G')/v(G') with a witness vertex set."""
    return _per_component(g, "m", exact_cap, flow)


def arboricity_ratio(g: Graph, exact_cap: int = EXACT_CAP, flow: bool = True) -> tuple[Fraction, tuple[int, ...]]:
    """ar(G) = max e(G')/(v(G')-1) over subgraphs with at least 2 vertices (0 if edgeless)."""
    return _per_component(g, "ar", exact_cap, flow)


def two_density(g: Graph, exact_cap: int = EXACT_CAP) -> tuple[Fraction, tuple[int, ...]]:
    """m2(G) = max d2(J) over subgraphs J with at least 3 vertices."""
    if g.n < 3:
        raise ValueError("m2 needs at least 3 vertices")
    if g.e == 0:
        return Fraction(-1, g.n - 2), tuple(range(g.n))
    compact, old = g.relabel_compact()
    if compact.n < 3:
        # one edge: pad with one isolated vertex
        spare = min(v for v in range(g.n) if v not in old)
        compact, old = Graph(compact.n + 1, compact.edges), old + [spare]
    if compact.n > exact_cap:
        raise CapabilityError(
            f"m2 needs exhaustive search; {compact.n} non-isolated vertices exceed cap {exact_cap}"
        )
    val, wit = _exhaustive_max(compact, 1, 2, 3)
    return val, tuple(sorted(old[i] for i in wit))


def is_strictly_2_balanced(h: Graph, exact_cap: int = EXACT_CAP) -> bool:
    """d2(H) = m2(H) and every proper subgraph with >= 3 vertices has smaller d2."""
    if h.n < 3:
        raise Refused("strict 2-balance needs at least 3 vertices")
    if h.n > exact_cap:
        raise CapabilityError(f"{h.n} vertices exceed exact cap {exact_cap}")
    counts = _subset_edge_counts(h)
    whole = Fraction(h.e - 1, h.n - 2)
    full = (1 << h.n) - 1
    for s in range(1, full):
        k = s.bit_count()
        if k >= 3 and Fraction(counts[s] - 1, k - 2) >= whole:
            return False
    return True


def density_report(
    g: Graph, exact_cap: int = EXACT_CAP, flow: bool = True, include_m2: bool = True
) -> DensityReport:
    m, wm = max_density(g, exact_cap, flow)
    ar, war = arboricity_ratio(g, exact_cap, flow)
    witnesses = {"m": wm, "ar": war}
    dd = m2 = None
    bal = strict = None
    if g.n >= 3:
        dd = d2(g)
        if include_m2:
            m2, w2 = two_density(g, exact_cap)
            witnesses["m2"] = w2
            bal = m2 == dd
            if not bal:
                strict = False
            elif g.n <= exact_cap:
                strict = is_strictly_2_balanced(g, exact_cap)
    return DensityReport(g.n, g.e, dd, m2, m, ar, bal, strict, witnesses)


def ceil_frac(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


# ---------------------------------------------------------------------------
# Forest decomposition (matroid partition with shortest augmenting paths)


@dataclass(frozen=True)
class ForestDecomposition:
    forests: tuple[frozenset[int], ...]

    def __len__(self) -> int:
        return len(self.forests)

    def forest_of(self) -> dict[int, int]:
        return {e: i for i, f in enumerate(self.forests) for e in f}


def _forest_path(fadj: dict[int, dict[int, int]], u: int, v: int) -> list[int] | None:
    """Edge ids on the forest path u..v, or None when u, v lie in different trees."""
    if u == v:
        return []
    prev: dict[int, tuple[int, int]] = {u: (-1, -1)}
    queue = deque([u])
    while queue:
        x = queue.popleft()
        for y, eid in fadj.get(x, {}).items():
            if y in prev:
                continue
            prev[y] = (x, eid)
            if y == v:
                path = []
                while y != u:
                    y, eid = prev[y]
                    path.append(eid)
                return path
            queue.append(y)
    return None


def forest_decomposition(g: Graph) -> ForestDecomposition:
    """Partition E(G) into the minimum number of forests.

    Edges are inserted one at a time; an edge that cannot be placed by an
    exchange path through the current forests certifies that more forests
    are needed, so the final count is the arboricity ceil(ar(G)).
    """
    if g.e == 0:
        raise ValueError("graph has no edges")
    fadj: list[dict[int, dict[int, int]]] = []
    where: dict[int, int] = {}

    def attach(eid: int, i: int) -> None:
        u, v = g.edges[eid]
        fadj[i].setdefault(u, {})[v] = eid
        fadj[i].setdefault(v, {})[u] = eid
        where[eid] = i

    def detach(eid: int) -> None:
        u, v = g.edges[eid]
        i = where.pop(eid)
        del fadj[i][u][v]
        del fadj[i][v][u]

    def insert(e0: int) -> bool:
        parent: dict[int, tuple[int, int] | None] = {e0: None}
        queue = deque([e0])
        while queue:
            x = queue.popleft()
            u, v = g.edges[x]
            for i in range(len(fadj)):
                if where.get(x) == i:
                    continue
                path = _forest_path(fadj[i], u, v)
                if path is None:
                    cur, target = x, i
                    while True:
                        if cur in where:
                            detach(cur)
                        attach(cur, target)
                        link = parent[cur]
                        if link is None:
                            return True
                        cur, target = link
                for f in path:
                    if f not in parent:
                        parent[f] = (x, i)
                        queue.append(f)
        return False

    for eid in range(g.e):
        if not insert(eid):
            fadj.append({})
            attach(eid, len(fadj) - 1)
    forests = [frozenset() for _ in fadj]
    for eid, i in where.items():
        forests[i] = forests[i] | {eid}
    return ForestDecomposition(tuple(forests))


# ---------------------------------------------------------------------------
# Orientation with bounded outdegree (Hall / bipartite matching)


@dataclass(frozen=True)
class Orientation:
    arcs: tuple[tuple[int, int], ...]  # arcs[eid] = (tail, head)

    def outdegrees(self, n: int) -> list[int]:
        out = [0] * n
        for tail, _ in self.arcs:
            out[tail] += 1
        return out

    def out_edges(self, n: int) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(n)]
        for eid, (tail, _) in enumerate(self.arcs):
            out[tail].append(eid)
        return out


def orient_bounded_outdegree(g: Graph, bound: int | None = None) -> Orientation:
    """Orient every edge so that each outdegree is at most ``ceil(m(G))``.

    Bipartite graph: one side is the edges of G, the other ``k`` copies of
    each vertex; an edge is adjacent to the copies of its endpoints. A
    matching saturating the edge side picks a tail for every edge.
    """
    if g.e == 0:
        raise ValueError("graph has no edges")
    k = bound if bound is not None else ceil_frac(max_density(g)[0])
    b = nx.Graph()
    left = [("e", i) for i in range(g.e)]
    b.add_nodes_from(left)
    for i, (u, v) in enumerate(g.edges):
        for c in range(k):
            b.add_edge(("e", i), ("v", u, c))
            b.add_edge(("e", i), ("v", v, c))
    matching = nx.bipartite.hopcroft_karp_matching(b, top_nodes=left)
    arcs = []
    for i, (u, v) in enumerate(g.edges):
        mate = matching.get(("e", i))
        if mate is None:
            raise AssertionError(f"matching misses edge {i}; Hall's condition violated")
        tail = mate[1]
        arcs.append((tail, v if tail == u else u))
    return Orientation(tuple(arcs))


def is_forest(g: Graph, edge_ids) -> bool:
    parent = list(range(g.n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for eid in edge_ids:
        u, v = g.edges[eid]
        ru, rv = find(u), find(v)
        if ru == rv:
            return False
        parent[ru] = rv
    return True


__all__ = [
    "DensityReport",
    "ForestDecomposition",
    "Orientation",
    "arboricity_ratio",
    "ceil_frac",
    "d2",
    "density_report",
    "forest_decomposition",
    "is_forest",
    "is_strictly_2_balanced",
    "max_density",
    "orient_bounded_outdegree",
    "two_density",
]
