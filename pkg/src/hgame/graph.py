"""Graphs, G(n, p) sampling, pattern-copy enumeration and random-graph audits."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from .errors import CapabilityError

Edge = tuple[int, int]


def _norm(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


class Graph:
    """Immutable simple undirected graph on vertices ``0..n-1``.

    Edge ids are positions in ``edges``; they are stable for the lifetime of
    the object and form a bijection onto ``range(e)``.
    """

    __slots__ = ("n", "edges", "_index", "adj", "_hash")

    def __init__(self, n: int, edges: Iterable[Sequence[int]] = ()):
        if n < 0:
            raise ValueError("vertex count must be nonnegative")
        normed: list[Edge] = []
        index: dict[Edge, int] = {}
        adj: list[set[int]] = [set() for _ in range(n)]
        for raw in edges:
            u, v = int(raw[0]), int(raw[1])
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge {u}-{v} has an endpoint outside 0..{n - 1}")
            e = _norm(u, v)
            if e in index:
                raise ValueError(f"parallel edge {e[0]}-{e[1]}")
            index[e] = len(normed)
            normed.append(e)
            adj[u].add(v)
            adj[v].add(u)
        self.n = n
        self.edges: tuple[Edge, ...] = tuple(normed)
        self._index = index
        self.adj: tuple[frozenset[int], ...] = tuple(frozenset(a) for a in adj)
        self._hash: int | None = None

    # -- basic queries -------------------------------------------------
    @property
    def e(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def degrees(self) -> list[int]:
        return [len(a) for a in self.adj]

    def min_degree(self) -> int:
        return min(self.degrees(), default=0)

    def has_edge(self, u: int, v: int) -> bool:
        return _norm(u, v) in self._index

    def edge_id(self, u: int, v: int) -> int:
        return self._index[_norm(u, v)]

    def incident(self, v: int) -> list[int]:
        return sorted(self._index[_norm(v, w)] for w in self.adj[v])

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.edges == other.edges

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n, self.edges))
        return self._hash

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, e={self.e})"

    # -- derived graphs --------------------------------------------------
    def edge_subgraph(self, edge_ids: Iterable[int]) -> Graph:
        """Same vertex set, only the given edges, in the given order."""
        return Graph(self.n, [self.edges[i] for i in edge_ids])

    def induced_edge_ids(self, vertices: Iterable[int]) -> list[int]:
        vs = set(vertices)
        return [i for i, (u, v) in enumerate(self.edges) if u in vs and v in vs]

    def relabel_compact(self) -> tuple[Graph, list[int]]:
        """Drop isolated vertices; returns the compact graph and new->old vertex map."""
        used = sorted({x for e in self.edges for x in e})
        pos = {v: i for i, v in enumerate(used)}
        return Graph(len(used), [(pos[u], pos[v]) for u, v in self.edges]), used

    def components(self) -> list[list[int]]:
        seen = [False] * self.n
        out = []
        for s in range(self.n):
            if seen[s]:
                continue
            seen[s] = True
            comp, stack = [], [s]
            while stack:
                x = stack.pop()
                comp.append(x)
                for y in self.adj[x]:
                    if not seen[y]:
                        seen[y] = True
                        stack.append(y)
            out.append(sorted(comp))
        return out

    def is_connected(self) -> bool:
        return self.n <= 1 or len(self.components()) == 1

    def core_vertices(self, k: int) -> set[int]:
        """Vertices of the k-core."""
        deg = self.degrees()
        alive = set(range(self.n))
        stack = [v for v in alive if deg[v] < k]
        while stack:
            v = stack.pop()
            if v not in alive:
                continue
            alive.discard(v)
            for w in self.adj[v]:
                if w in alive:
                    deg[w] -= 1
                    if deg[w] < k:
                        stack.append(w)
        return alive

    # -- serialization ---------------------------------------------------
    def to_json(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_json(cls, data: Mapping) -> Graph:
        return cls(int(data["n"]), [tuple(e) for e in data["edges"]])


# ---------------------------------------------------------------------------
# Named graphs


def complete_graph(n: int) -> Graph:
    return Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def star_graph(leaves: int) -> Graph:
    return Graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def k5_minus() -> Graph:
    """K5 with the edge {3, 4} removed."""
    return Graph(5, [e for e in complete_graph(5).edges if e != (3, 4)])


def disjoint_union(*graphs: Graph) -> Graph:
    edges, offset = [], 0
    for g in graphs:
        edges += [(u + offset, v + offset) for u, v in g.edges]
        offset += g.n
    return Graph(offset, edges)


NAMED_PATTERNS = {
    "K3": lambda: complete_graph(3),
    "K4": lambda: complete_graph(4),
    "K5": lambda: complete_graph(5),
    "K5-": k5_minus,
    "C4": lambda: cycle_graph(4),
    "C5": lambda: cycle_graph(5),
    "C6": lambda: cycle_graph(6),
    "P3": lambda: path_graph(3),
}


# ---------------------------------------------------------------------------
# Text formats


def parse_edge_list(text: str, n: int | None = None) -> Graph:
    """Parse ``u v`` lines (0-based); blank lines and ``#`` comments are ignored.

    The vertex count defaults to one more than the largest index seen.
    """
    edges = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected 'u v', got {line!r}")
        edges.append((int(parts[0]), int(parts[1])))
    if n is None:
        n = 1 + max((max(e) for e in edges), default=-1)
    return Graph(n, edges)


def format_edge_list(g: Graph) -> str:
    return "".join(f"{u} {v}\n" for u, v in g.edges)


def read_graph(source: str | Path) -> Graph:
    """Load a graph from an edge-list file, a JSON file, or a named pattern (``K4``, ``C4``, ...)."""
    path = Path(source)
    if not path.exists() and str(source) in NAMED_PATTERNS:
        return NAMED_PATTERNS[str(source)]()
    text = path.read_text()
    if path.suffix == ".json":
        return Graph.from_json(json.loads(text))
    return parse_edge_list(text)


# ---------------------------------------------------------------------------
# Sampling


@dataclass(frozen=True)
class SampleSpec:
    n: int
    p: float
    seed: int = 0

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("n must be nonnegative")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"p={self.p} outside [0, 1]")


def gnp_sample(spec: SampleSpec) -> Graph:
    """Sample G(n, p); edges come out in lexicographic order.

    Uses geometric skipping over the C(n, 2) pair indices, which is the same
    Bernoulli process as testing every pair but costs O(e) draws.
    """
    n, p = spec.n, spec.p
    total = n * (n - 1) // 2
    if total == 0 or p == 0.0:
        return Graph(n)
    if p == 1.0:
        return complete_graph(n)
    rng = np.random.default_rng(spec.seed & 0xFFFFFFFFFFFFFFFF)
    chunk = max(16, int(total * p * 1.1) + 16)
    picks = []
    pos = -1
    while True:
        gaps = rng.geometric(p, size=chunk)
        idx = pos + np.cumsum(gaps)
        keep = idx[idx < total]
        picks.append(keep)
        if len(keep) < chunk:
            break
        pos = int(idx[-1])
    flat = np.concatenate(picks).astype(np.int64)
    # row r starts at offset r*n - r*(r+1)/2
    rows = np.arange(n, dtype=np.int64)
    offsets = rows * n - rows * (rows + 1) // 2
    u = np.searchsorted(offsets, flat, side="right") - 1
    v = flat - offsets[u] + u + 1
    return Graph(n, zip(u.tolist(), v.tolist()))


# ---------------------------------------------------------------------------
# Neighborhoods and pattern copies


def neighborhood(g: Graph, a: Iterable[int]) -> set[int]:
    """Vertices outside ``a`` adjacent to some vertex of ``a``."""
    aset = set(a)
    for x in aset:
        if not 0 <= x < g.n:
            raise ValueError(f"vertex {x} out of range")
    out: set[int] = set()
    for x in aset:
        out |= g.adj[x]
    return out - aset


@dataclass(frozen=True, order=True)
class HCopy:
    edge_ids: tuple[int, ...]
    vertices: tuple[int, ...] = field(compare=False)


def _search_order(h: Graph, start: Sequence[int] = ()) -> list[int]:
    """Vertex order for backtracking: each vertex as connected to earlier ones as possible."""
    order = list(start)
    placed = set(order)
    live = [v for v in range(h.n) if h.adj[v]]
    while len(placed) < len(live):
        best = max(
            (v for v in live if v not in placed),
            key=lambda v: (len(h.adj[v] & placed), h.degree(v), -v),
        )
        order.append(best)
        placed.add(best)
    return order


def _embeddings(
    adj: Sequence[Iterable[int]] | Mapping[int, Iterable[int]],
    h: Graph,
    order: Sequence[int],
    fixed: dict[int, int],
    candidates: Sequence[int],
) -> Iterator[dict[int, int]]:
    """Yield injective maps of H's non-isolated vertices that send H-edges to host edges."""
    back = [[b for b in h.adj[x] if b in set(order[:i])] for i, x in enumerate(order)]
    need = [h.degree(x) for x in order]
    phi = dict(fixed)
    used = set(phi.values())
    start = len(fixed)

    def deg(w: int) -> int:
        return len(adj[w])

    def rec(i: int) -> Iterator[dict[int, int]]:
        if i == len(order):
            yield dict(phi)
            return
        x = order[i]
        if back[i]:
            anchors = sorted((phi[b] for b in back[i]), key=deg)
            pool = set(adj[anchors[0]])
            for a in anchors[1:]:
                pool &= set(adj[a])
            pool = sorted(pool)
        else:
            pool = candidates
        for w in pool:
            if w in used or deg(w) < need[i]:
                continue
            phi[x] = w
            used.add(w)
            yield from rec(i + 1)
            used.discard(w)
            del phi[x]

    for x in order[:start]:
        if len(adj[phi[x]]) < h.degree(x):
            return
    yield from rec(start)


def enumerate_copies(g: Graph, h: Graph) -> list[HCopy]:
    """All subgraphs of ``g`` isomorphic to ``h``, one per distinct edge set, sorted by edge ids.

    Isolated vertices of ``h`` do not change the edge set of a copy; they
    only require ``g`` to have at least ``h.n`` vertices.
    """
    if h.e == 0:
        raise ValueError("pattern must have at least one edge")
    if g.n < h.n or g.e < h.e:
        return []
    order = _search_order(h)
    seen: dict[frozenset[int], HCopy] = {}
    for phi in _embeddings(g.adj, h, order, {}, range(g.n)):
        ids = frozenset(g.edge_id(phi[a], phi[b]) for a, b in h.edges)
        if ids not in seen:
            seen[ids] = HCopy(tuple(sorted(ids)), tuple(sorted(phi.values())))
    return sorted(seen.values())


def find_copy_through(
    adj: Mapping[int, Iterable[int]] | Sequence[Iterable[int]], h: Graph, u: int, v: int
) -> dict[int, int] | None:
    """Find one embedding of ``h`` into the host adjacency that uses the edge ``uv``.

    Returns the vertex map (pattern vertex -> host vertex) or ``None``.
    """
    pool = sorted(adj.keys()) if isinstance(adj, Mapping) else range(len(adj))
    for a, b in h.edges:
        order = _search_order(h, (a, b))
        for x, y in ((u, v), (v, u)):
            for phi in _embeddings(adj, h, order, {a: x, b: y}, pool):
                return phi
    return None


# ---------------------------------------------------------------------------
# Audits


@dataclass
class ExpansionReport:
    passed: bool
    worst_ratio: float
    witness: tuple[int, ...]
    singletons_checked: int
    samples_checked: int
    max_size: int


def expansion_check(
    g: Graph,
    eps: float,
    np_value: float,
    samples: int = 200,
    seed: int = 0,
    max_size: int | None = None,
) -> ExpansionReport:
    """Check ``|N(X)| >= (1 - eps)|X| np`` for sets of size up to ``1/p``.

    Every singleton is checked; larger sets are drawn uniformly at random
    (``samples`` of them). ``worst_ratio`` is ``min |N(X)| / (|X| np)``.
    """
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    if np_value <= 0:
        raise ValueError("np_value must be positive")
    if max_size is None:
        max_size = max(1, math.floor(g.n / np_value))
    max_size = min(max_size, g.n)
    worst, witness = math.inf, ()
    passed = True

    def visit(xs: Sequence[int]) -> None:
        nonlocal worst, witness, passed
        ratio = len(neighborhood(g, xs)) / (len(xs) * np_value)
        if ratio < worst:
            worst, witness = ratio, tuple(sorted(xs))
        if ratio < 1 - eps:
            passed = False

    for v in range(g.n):
        visit((v,))
    rng = np.random.default_rng(seed)
    checked = 0
    if max_size >= 2:
        for _ in range(samples):
            k = int(rng.integers(2, max_size + 1))
            visit(rng.choice(g.n, size=k, replace=False).tolist())
            checked += 1
    return ExpansionReport(passed, worst, witness, g.n, checked, max_size)


def connected_subsets(g: Graph, max_size: int) -> Iterator[tuple[list[int], int]]:
    """Yield every connected vertex subset of size <= max_size with its induced edge count.

    ESU-style enumeration: each subset is produced once, rooted at its
    smallest vertex.
    """
    adj = g.adj

    def extend(sub: list[int], subset: set[int], ext: set[int], root: int, edges: int):
        yield sub, edges
        if len(sub) == max_size:
            return
        ext = set(ext)
        while ext:
            w = ext.pop()
            excl = set()
            for x in sub:
                excl |= adj[x]
            new_ext = ext | {y for y in adj[w] if y > root and y not in subset and y not in excl}
            gained = len(adj[w] & subset)
            subset.add(w)
            sub.append(w)
            yield from extend(sub, subset, new_ext, root, edges + gained)
            sub.pop()
            subset.discard(w)

    for root in range(g.n):
        yield from extend([root], {root}, {y for y in adj[root] if y > root}, root, 0)


@dataclass
class DensityAudit:
    passed: bool
    alpha: Fraction
    max_density: Fraction
    witness: tuple[int, ...]
    subsets_checked: int


def density_audit(g: Graph, alpha: float | Fraction, L: int, cap: int = 12) -> DensityAudit:
    """Check that every subgraph on at most ``L`` vertices has ``e/v <= alpha``.

    Exact, by enumerating connected vertex subsets (a disconnected subgraph is
    never denser than its densest component).
    """
    if L < 2:
        raise ValueError("L must be at least 2")
    if L > cap:
        raise CapabilityError(f"L={L} exceeds the exhaustive-search cap {cap}")
    alpha = Fraction(alpha)
    best, witness, count = Fraction(0), (), 0
    for sub, edges in connected_subsets(g, L):
        count += 1
        d = Fraction(edges, len(sub))
        key = tuple(sorted(sub))
        if d > best or (d == best and (not witness or key < witness)):
            best, witness = d, key
    return DensityAudit(best <= alpha, alpha, best, witness, count)
