import random
from fractions import Fraction

import pytest

from conftest import random_graph
from hgame.breaker import (
    DeterministicBreaker,
    OrientationPairingBreaker,
    PairingBreaker,
    PairingPlan,
    breaker_wins_by_arboricity,
    breaker_wins_by_orientation,
    deterministic_breaker,
    forest_pairing_breaker,
    low_degree_recursion_breaker,
    orientation_pairing_breaker,
    peel_low_degree,
)
from hgame.density import ceil_frac, is_forest, max_density, two_density
from hgame.errors import Refused
from hgame.game import GreedyMaker, Player, RandomStrategy, WinningSetSystem, build_h_game, play
from hgame.graph import Graph, complete_graph, cycle_graph, path_graph
from hgame.solver import SolverStrategy, solve


def _exhaust(g, maker, breaker):
    """Play on the whole edge set with no winning sets, so the board fills up."""
    return play(WinningSetSystem(range(g.e), []), maker, breaker)


def test_pairing_plan_validation_and_replies():
    with pytest.raises(ValueError):
        PairingPlan(((0, 1), (1, 2)))
    plan = PairingPlan(((0, 3), (1, 2)))
    s = WinningSetSystem(range(4), [[0, 3], [1, 2]])
    for seed in range(10):
        assert play(s, RandomStrategy(seed), PairingBreaker(plan)).winner is Player.BREAKER


def test_predicates_on_known_pairs():
    assert breaker_wins_by_arboricity(Graph(0), cycle_graph(4))
    assert breaker_wins_by_orientation(Graph(0), cycle_graph(4))
    # K4 has ar = 2, so ceil(2/2) = 1 < ar(C4) = 4/3
    assert breaker_wins_by_arboricity(complete_graph(4), cycle_graph(4))
    assert not breaker_wins_by_arboricity(complete_graph(6), cycle_graph(4))
    assert not breaker_wins_by_orientation(complete_graph(4), cycle_graph(4))


def test_forest_pairing_keeps_maker_acyclic_per_pair():
    rng = random.Random(3)
    for trial in range(40):
        g = random_graph(rng, rng.randint(4, 12), rng.uniform(0.3, 0.9))
        if g.e == 0:
            continue
        fb = forest_pairing_breaker(g)
        maker = RandomStrategy(trial) if trial % 2 else GreedyMaker()
        system = WinningSetSystem(range(g.e), [])
        res = play(system, maker, fb)
        mk = res.maker_elements()
        for a, b in fb.pairs():
            assert is_forest(g, [x for x in mk if x in a | b])
        assert len(fb.pairs()) == ceil_frac(Fraction(len(fb.forests), 2))


def test_orientation_pairing_halves_outdegree():
    rng = random.Random(5)
    for trial in range(40):
        g = random_graph(rng, rng.randint(3, 12), rng.uniform(0.2, 0.9))
        if g.e == 0:
            continue
        ob = OrientationPairingBreaker(g)
        d = max(ob.orientation.outdegrees(g.n))
        res = _exhaust(g, RandomStrategy(trial), ob)
        assert max(ob.maker_outdegrees(res.maker_elements())) <= ceil_frac(Fraction(d, 2))


def test_orientation_breaker_refuses_without_predicate():
    with pytest.raises(Refused):
        orientation_pairing_breaker(complete_graph(6), cycle_graph(4))
    ob = orientation_pairing_breaker(cycle_graph(6), complete_graph(4))
    s = build_h_game(cycle_graph(6), complete_graph(4))
    assert play(s, RandomStrategy(0), ob).winner is Player.BREAKER


def test_peel_low_degree():
    g = Graph(5, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4)])
    order, owner = peel_low_degree(g, 1)
    assert order == [4, 3]
    assert owner == {4: 4, 3: 3}
    order, owner = peel_low_degree(g, 2)
    assert sorted(order) == list(range(5))
    assert set(owner) == set(range(g.e))


def test_low_degree_recursion_breaks_c5_boards():
    rng = random.Random(9)
    h = cycle_graph(5)
    played = 0
    for trial in range(30):
        g = random_graph(rng, rng.randint(5, 8), 0.45)
        if g.e == 0 or g.e > 16:
            continue
        try:
            b = low_degree_recursion_breaker(g, h)
        except Refused:
            continue
        s = build_h_game(g, h)
        if not s.winning_sets:
            continue
        played += 1
        assert play(s, SolverStrategy(s, Player.MAKER), b).winner is Player.BREAKER
    assert played >= 5


def test_low_degree_refuses_isolated_pattern_vertex():
    with pytest.raises(Refused):
        low_degree_recursion_breaker(cycle_graph(5), Graph(4, [(0, 1), (1, 2)]))


@pytest.mark.parametrize(
    "h,branch",
    [
        (cycle_graph(4), "forest-pairing-c4"),
        (complete_graph(4), "solver-k4"),
        (cycle_graph(5), "low-degree-recursion"),
        (complete_graph(5), "low-degree-recursion"),
        (complete_graph(6), "orientation-k>=3"),
    ],
)
def test_dispatch_branch_by_pattern(h, branch):
    b = deterministic_breaker(cycle_graph(6), h)
    assert b.audit.branch == branch
    assert b.notes[0] == f"branch={branch}"


def test_dispatch_refusals():
    with pytest.raises(Refused):
        DeterministicBreaker(cycle_graph(5), complete_graph(3))
    with pytest.raises(Refused):
        DeterministicBreaker(cycle_graph(5), path_graph(5))
    with pytest.raises(Refused):
        DeterministicBreaker(complete_graph(6), cycle_graph(4))


@pytest.mark.parametrize("h", [cycle_graph(4), complete_graph(4), cycle_graph(5)])
def test_deterministic_breaker_beats_optimal_maker(h):
    rng = random.Random(hash(h.edges) & 0xFFFF)
    m2 = two_density(h)[0]
    played = 0
    for trial in range(60):
        g = random_graph(rng, rng.randint(4, 9), rng.uniform(0.25, 0.6))
        if g.e == 0 or g.e > 18 or max_density(g)[0] > m2:
            continue
        s = build_h_game(g, h).prune_dead()
        if not s.winning_sets or len(s.board) > 18:
            continue
        try:
            b = DeterministicBreaker(g, h)
        except Refused:
            continue
        maker = SolverStrategy(s, Player.MAKER, seed=trial)
        played += 1
        assert play(build_h_game(g, h), maker, b).winner is Player.BREAKER, b.notes
    assert played >= 5


def test_predicates_never_contradict_the_solver():
    rng = random.Random(21)
    for _ in range(80):
        g = random_graph(rng, rng.randint(4, 8), rng.uniform(0.3, 0.7))
        for h in (cycle_graph(4), complete_graph(4)):
            s = build_h_game(g, h).prune_dead()
            if len(s.board) > 18:
                continue
            if breaker_wins_by_arboricity(g, h) or breaker_wins_by_orientation(g, h):
                assert solve(s).winner is Player.BREAKER
