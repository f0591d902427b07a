"""Independent brute-force reference implementations used as test oracles.

Nothing here imports the package's algorithms; only plain tuples and sets.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache


def induced_counts(n, edges):
    """Map every vertex subset (as a frozenset) to its induced edge count."""
    out = {}
    for r in range(n + 1):
        for s in itertools.combinations(range(n), r):
            ss = set(s)
            out[frozenset(s)] = sum(1 for u, v in edges if u in ss and v in ss)
    return out


def brute_m(n, edges):
    best = Fraction(0)
    for s, e in induced_counts(n, edges).items():
        if s:
            best = max(best, Fraction(e, len(s)))
    return best


def brute_ar(n, edges):
    best = Fraction(0)
    for s, e in induced_counts(n, edges).items():
        if len(s) >= 2:
            best = max(best, Fraction(e, len(s) - 1))
    return best


def brute_m2(n, edges):
    """Max of (e-1)/(v-2) over all subgraphs on >= 3 vertices, edge subsets included."""
    best = None
    verts = range(n)
    for r in range(3, n + 1):
        for s in itertools.combinations(verts, r):
            ss = set(s)
            inside = [(u, v) for u, v in edges if u in ss and v in ss]
            # fewer edges only lowers the ratio, so the induced count is the max
            val = Fraction(len(inside) - 1, r - 2)
            best = val if best is None else max(best, val)
    return best


def brute_strictly_2_balanced(n, edges):
    """Every proper subgraph (vertex or edge deleted) on >= 3 vertices has smaller d2."""
    if n < 3:
        return False
    full = Fraction(len(edges) - 1, n - 2)
    for r in range(3, n + 1):
        for s in itertools.combinations(range(n), r):
            ss = set(s)
            inside = [(u, v) for u, v in edges if u in ss and v in ss]
            for k in range(len(inside) + 1):
                if r == n and k == len(inside):
                    continue
                if Fraction(k - 1, r - 2) >= full:
                    return False
    return True


def brute_forest_count(n, edges):
    """Minimum number of forests partitioning the edges, by exhaustive colouring."""
    m = len(edges)
    if m == 0:
        return 0

    def acyclic(es):
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                x = parent[x]
            return x

        for u, v in es:
            a, b = find(u), find(v)
            if a == b:
                return False
            parent[a] = b
        return True

    for k in range(1, m + 1):
        for colouring in itertools.product(range(k), repeat=m):
            if all(acyclic([edges[i] for i in range(m) if colouring[i] == c]) for c in range(k)):
                return k
    return m


def naive_maker_wins(board, sets, maker_first=True):
    """Plain minimax over (maker set, breaker set); no pruning beyond the win check."""
    board = tuple(board)
    sets = [frozenset(s) for s in sets]

    @lru_cache(maxsize=None)
    def rec(maker, breaker, maker_turn):
        if any(s <= maker for s in sets):
            return True
        free = [x for x in board if x not in maker and x not in breaker]
        if not free:
            return False
        if maker_turn:
            return any(rec(maker | {x}, breaker, False) for x in free)
        return all(rec(maker, breaker | {x}, True) for x in free)

    return rec(frozenset(), frozenset(), maker_first)


def brute_copies(n, edges, h_n, h_edges):
    """Edge sets of all subgraphs of G isomorphic to H, via all injective vertex maps."""
    eid = {frozenset(e): i for i, e in enumerate(edges)}
    found = set()
    for image in itertools.permutations(range(n), h_n):
        ids = []
        for u, v in h_edges:
            key = frozenset((image[u], image[v]))
            if key not in eid:
                break
            ids.append(eid[key])
        else:
            found.add(frozenset(ids))
    return found


def naive_h_core(n, edges, h_n, h_edges):
    """Recompute every copy from scratch after each deletion; returns the surviving edges."""
    alive = set(edges)
    while True:
        cur = sorted(alive)
        copies = [{cur[i] for i in c} for c in brute_copies(n, cur, h_n, h_edges)]
        count = {e: sum(e in c for c in copies) for e in cur}
        target = next((c for c in copies if sum(count[e] == 1 for e in c) >= 2), None)
        if target is None:
            return {e for e in cur if count[e] > 0}
        alive -= {e for e in target if count[e] == 1}
