import json
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_graph
from hgame.errors import CapabilityError
from hgame.graph import (
    Graph,
    SampleSpec,
    complete_graph,
    connected_subsets,
    cycle_graph,
    density_audit,
    disjoint_union,
    enumerate_copies,
    expansion_check,
    find_copy_through,
    format_edge_list,
    gnp_sample,
    k5_minus,
    neighborhood,
    parse_edge_list,
    path_graph,
    read_graph,
    star_graph,
)
from oracles import brute_copies, induced_counts


@st.composite
def small_graphs(draw, max_n=7):
    n = draw(st.integers(0, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph(n, [e for e, keep in zip(pairs, mask) if keep])


def test_graph_rejects_loops_parallel_and_out_of_range():
    with pytest.raises(ValueError):
        Graph(3, [(1, 1)])
    with pytest.raises(ValueError):
        Graph(3, [(0, 1), (1, 0)])
    with pytest.raises(ValueError):
        Graph(3, [(0, 3)])


def test_edge_ids_are_positions():
    g = Graph(4, [(2, 1), (0, 3)])
    assert g.edges == ((1, 2), (0, 3))
    assert g.edge_id(2, 1) == 0 and g.edge_id(3, 0) == 1
    assert g.incident(1) == [0]


def test_named_families():
    assert complete_graph(5).e == 10
    assert cycle_graph(6).e == 6
    assert path_graph(4).e == 3
    assert star_graph(3).degrees() == [3, 1, 1, 1]
    k = k5_minus()
    assert (k.n, k.e) == (5, 9)
    u = disjoint_union(complete_graph(3), path_graph(2))
    assert (u.n, u.e) == (5, 4) and len(u.components()) == 2


def test_relabel_compact_drops_isolated_vertices():
    g = Graph(6, [(1, 4), (4, 5)])
    c, old = g.relabel_compact()
    assert c.n == 3 and c.e == 2
    assert sorted(old) == [1, 4, 5]


def test_edge_list_roundtrip(tmp_path):
    g = Graph(5, [(0, 1), (1, 2), (3, 4)])
    text = "# comment\n" + format_edge_list(g) + "\n"
    assert parse_edge_list(text) == g
    f = tmp_path / "g.txt"
    f.write_text(text)
    assert read_graph(f) == g
    j = tmp_path / "g.json"
    j.write_text(json.dumps(g.to_json()))
    assert read_graph(j) == g
    assert read_graph("K5-") == k5_minus()
    with pytest.raises(ValueError):
        parse_edge_list("0 1 2\n")


def test_gnp_sample_is_seeded_and_lexicographic():
    a = gnp_sample(SampleSpec(60, 0.2, seed=3))
    b = gnp_sample(SampleSpec(60, 0.2, seed=3))
    assert a == b
    assert list(a.edges) == sorted(a.edges)
    assert gnp_sample(SampleSpec(10, 0.0)).e == 0
    assert gnp_sample(SampleSpec(6, 1.0)).e == 15
    with pytest.raises(ValueError):
        SampleSpec(5, 1.5)


def test_gnp_edge_count_is_binomial():
    n, p = 400, 0.05
    total = n * (n - 1) // 2
    counts = [gnp_sample(SampleSpec(n, p, seed=s)).e for s in range(20)]
    mean = sum(counts) / len(counts)
    sd = math.sqrt(total * p * (1 - p) / len(counts))
    assert abs(mean - total * p) < 5 * sd


def test_neighborhood():
    g = path_graph(5)
    assert neighborhood(g, [2]) == {1, 3}
    assert neighborhood(g, [1, 2]) == {0, 3}
    with pytest.raises(ValueError):
        neighborhood(g, [9])


@settings(max_examples=60, deadline=None)
@given(small_graphs(max_n=6), st.sampled_from(["K3", "C4", "P3", "K4"]))
def test_enumerate_copies_matches_brute_force(g, name):
    h = read_graph(name)
    got = {frozenset(c.edge_ids) for c in enumerate_copies(g, h)}
    assert got == brute_copies(g.n, list(g.edges), h.n, list(h.edges))


def test_copy_counts_on_known_graphs():
    assert len(enumerate_copies(complete_graph(4), cycle_graph(4))) == 3
    assert len(enumerate_copies(complete_graph(5), complete_graph(3))) == 10
    assert len(enumerate_copies(k5_minus(), complete_graph(3))) == 7


def test_find_copy_through_uses_the_edge():
    g = k5_minus()
    h = complete_graph(3)
    for u, v in g.edges:
        phi = find_copy_through(g.adj, h, u, v)
        assert phi is not None
        image = {frozenset((phi[a], phi[b])) for a, b in h.edges}
        assert frozenset((u, v)) in image
        assert all(g.has_edge(*tuple(e)) for e in image)
    assert find_copy_through(path_graph(3).adj, h, 0, 1) is None


@settings(max_examples=40, deadline=None)
@given(small_graphs(max_n=7), st.integers(2, 7))
def test_connected_subsets_matches_brute_force(g, L):
    got = {frozenset(s): e for s, e in connected_subsets(g, L)}
    expected = {}
    for s, e in induced_counts(g.n, list(g.edges)).items():
        if 1 <= len(s) <= L and _connected(g, s):
            expected[s] = e
    assert got == expected


def _connected(g, s):
    s = set(s)
    start = next(iter(s))
    seen, stack = {start}, [start]
    while stack:
        x = stack.pop()
        for y in g.adj[x] & s:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return seen == s


def test_density_audit():
    g = disjoint_union(complete_graph(4), cycle_graph(5))
    rep = density_audit(g, Fraction(3, 2), 4)
    assert rep.passed and rep.max_density == Fraction(3, 2)
    assert rep.witness == (0, 1, 2, 3)
    assert not density_audit(g, 1, 4).passed
    with pytest.raises(CapabilityError):
        density_audit(g, 1, 20)


def test_expansion_check():
    g = complete_graph(10)
    rep = expansion_check(g, 0.5, 9.0, samples=20)
    assert rep.singletons_checked == 10
    assert rep.worst_ratio == pytest.approx(1.0)
    assert rep.passed
    sparse = Graph(10, [(0, 1)])
    assert not expansion_check(sparse, 0.5, 5.0, samples=5).passed
    with pytest.raises(ValueError):
        expansion_check(g, 1.5, 2.0)


def test_random_graph_helper_is_simple(rng):
    g = random_graph(rng, 9, 0.5)
    assert len(set(g.edges)) == g.e
