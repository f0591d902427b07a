import math
import random
from fractions import Fraction

import pytest

from hgame.errors import Refused
from hgame.game import GameState, LazyHGame, Player, RandomStrategy, WinningSetSystem, build_h_game, play
from hgame.graph import (
    Graph,
    SampleSpec,
    complete_graph,
    cycle_graph,
    enumerate_copies,
    gnp_sample,
    k5_minus,
    path_graph,
)
from hgame.maker import (
    ContainerFamily,
    HPPhaseMaker,
    auxiliary_container_breaker,
    auxiliary_sets,
    default_budgets,
    first_k5minus_copy,
    hp_construct,
    triangle_maker_on_k5minus,
)
from hgame.registry import maximal_h_free_family
from hgame.solver import SolverStrategy


def worst_case_triangle_moves(g):
    """Max Maker moves the triangle strategy needs, over every Breaker reply sequence."""
    maker = triangle_maker_on_k5minus(g)
    copy = set(maker.copy_edges)

    def rec(state):
        x = maker.next_move(state)
        st = state.copy()
        st.claim(Player.MAKER, x)
        if maker.triangle(st) is not None:
            return maker.moves_used(st)
        if maker.moves_used(st) > 4:
            return math.inf
        replies = sorted(st.unclaimed & copy) or [st.min_unclaimed()]
        worst = 0
        for y in replies:
            nxt = st.copy()
            nxt.claim(Player.BREAKER, y)
            worst = max(worst, rec(nxt))
        return worst

    return rec(GameState(range(g.e)))


def test_triangle_in_four_moves_against_every_breaker():
    assert worst_case_triangle_moves(k5_minus()) <= 4


def test_triangle_maker_on_a_larger_board():
    g = complete_graph(6)
    copy = first_k5minus_copy(g)
    maker = triangle_maker_on_k5minus(g, copy.edge_ids)
    res = play(build_h_game(g, complete_graph(3)), maker, SolverStrategy(build_h_game(g, complete_graph(3)), Player.BREAKER))
    assert res.winner is Player.MAKER


def test_no_k5_minus_is_refused():
    with pytest.raises(Refused):
        first_k5minus_copy(complete_graph(4))


def test_hp_construct_shape():
    hp = hp_construct(cycle_graph(4), 2)
    assert (hp.n, hp.e) == (9, 10)
    assert len(enumerate_copies(hp, complete_graph(3))) == 1
    assert hp.degree(2) == 3
    with pytest.raises(ValueError):
        hp_construct(cycle_graph(4), 7)


def test_default_budgets():
    assert default_budgets(1000, 0.1) == (1, 10, 167)
    assert default_budgets(10, 0.0) == (0, 0, 0)


def test_phase_maker_builds_hp_on_dense_random_graph():
    n = 150
    p = 4 * n ** (-5 / 9)
    g = gnp_sample(SampleSpec(n, p, seed=1))
    h = cycle_graph(4)
    hp = hp_construct(h, 0)
    maker = HPPhaseMaker(g, h, p=p, precheck=True)
    res = play(LazyHGame(g, hp), maker, RandomStrategy(3))
    assert res.illegal is None
    assert res.winner is Player.MAKER
    assert maker.state.triangle is not None
    assert maker.state.phase == 5
    for w in maker.state.n3[:5]:
        assert len(maker.maker_path(w)) == 4


def test_phase_maker_reports_failures_on_a_sparse_board():
    with pytest.raises(Refused):
        HPPhaseMaker(cycle_graph(12), cycle_graph(4))
    # K5 minus an edge with a short tail: the chain phases run out of vertices
    g = Graph(7, list(k5_minus().edges) + [(4, 5), (5, 6)])
    maker = HPPhaseMaker(g, cycle_graph(4), budgets=(2, 2, 2))
    res = play(LazyHGame(g, hp_construct(cycle_graph(4), 0)), maker, RandomStrategy(0))
    assert res.winner is Player.BREAKER and res.illegal is None
    assert maker.state.failed and any("failed" in note for note in maker.notes)


def test_container_family_validation():
    with pytest.raises(ValueError):
        ContainerFamily.build(range(3), [()], [[0, 5]])
    with pytest.raises(ValueError):
        ContainerFamily.build(range(3), [([2],)], [[0, 1]])
    fam = ContainerFamily.build(range(4), [([0],), ()], [[0, 1], [2]])
    assert fam.covers([0, 1]) and not fam.covers([1])
    assert fam.validate_delta(Fraction(1, 2)) and not fam.validate_delta(Fraction(3, 4))
    assert auxiliary_sets(range(4), fam, removed=[0]) == [frozenset({1, 3})]


def test_maximal_h_free_family_is_the_matchings_for_p3():
    g = cycle_graph(6)
    fam = maximal_h_free_family(g, path_graph(3))
    # C6 has 2 perfect matchings and 3 maximal matchings of size 2
    assert sorted(len(c) for c in fam.containers) == [2, 2, 2, 3, 3]
    for c in fam.containers:
        assert not enumerate_copies(g.edge_subgraph(sorted(c)), path_graph(3))


@pytest.mark.parametrize("n", [10, 12])
def test_container_strategy_wins_toy_games(n):
    g, h = cycle_graph(n), path_graph(3)
    system = build_h_game(g, h)
    fam = maximal_h_free_family(g, h)
    maker = auxiliary_container_breaker(system, fam)
    assert maker.potential < 1
    for seed in range(5):
        breaker = SolverStrategy(system, Player.BREAKER, seed=seed)
        assert play(system, maker, breaker).winner is Player.MAKER
        assert play(system, maker, RandomStrategy(seed)).winner is Player.MAKER


def test_container_strategy_refuses_large_potential():
    # triangle-free subgraphs of K4: three 4-cycles and four stars, potential 3/4 + 4/8
    g, h = complete_graph(4), complete_graph(3)
    with pytest.raises(Refused):
        auxiliary_container_breaker(build_h_game(g, h), maximal_h_free_family(g, h))


def test_tail_never_raises_two_density_above_the_triangle():
    import networkx as nx

    from hgame.density import two_density

    checked = 0
    for nxg in nx.graph_atlas_g()[1:]:
        if nxg.number_of_nodes() < 3 or not nx.is_connected(nxg):
            continue
        h = Graph(nxg.number_of_nodes(), list(nxg.edges()))
        for v in (0, h.n - 1):
            hp = hp_construct(h, v)
            assert two_density(hp)[0] == max(two_density(h)[0], 2)
            checked += 1
        if h.n > 5:
            break
    assert checked > 50


class _PhaseRecorder:
    def __init__(self, inner):
        self.inner, self.phases = inner, []
        self.notes = inner.notes

    def next_move(self, state, system=None):
        x = self.inner.next_move(state, system)
        self.phases.append(self.inner.state.phase)
        return x


def test_phases_never_go_backwards():
    n = 120
    p = 4 * n ** (-5 / 9)
    g = gnp_sample(SampleSpec(n, p, seed=2))
    h = cycle_graph(4)
    rec = _PhaseRecorder(HPPhaseMaker(g, h, p=p))
    play(LazyHGame(g, hp_construct(h, 0)), rec, RandomStrategy(7))
    assert rec.phases == sorted(rec.phases)
    ps = rec.inner.state
    for layer, budget in zip((ps.n1, ps.n2, ps.n3), rec.inner.budgets):
        assert len(layer) <= budget
    assert not set(ps.n1) & set(ps.n2) and not set(ps.n2) & set(ps.n3)
