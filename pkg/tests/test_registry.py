import pytest

from hgame.errors import CapabilityError, Refused
from hgame.game import LazyHGame, Player, build_h_game, play
from hgame.graph import complete_graph, cycle_graph, k5_minus
from hgame.registry import BREAKER_STRATEGIES, MAKER_STRATEGIES, make_strategy, maximal_h_free_family


@pytest.mark.parametrize("maker", [m for m in MAKER_STRATEGIES if m not in ("hp-phase", "container-aux")])
@pytest.mark.parametrize("breaker", BREAKER_STRATEGIES)
def test_every_pairing_plays_legally_or_refuses(maker, breaker):
    g, h = k5_minus(), complete_graph(3)
    try:
        m = make_strategy(maker, Player.MAKER, g, h, seed=1)
        b = make_strategy(breaker, Player.BREAKER, g, h, seed=2)
    except Refused:
        return
    res = play(build_h_game(g, h), m, b)
    assert res.illegal is None


def test_unknown_name_is_refused():
    with pytest.raises(Refused):
        make_strategy("bogus", Player.MAKER, k5_minus(), complete_graph(3))
    # a Breaker-only name on the Maker side
    with pytest.raises(Refused):
        make_strategy("composite", Player.MAKER, k5_minus(), complete_graph(3))


def test_family_cap():
    with pytest.raises(CapabilityError):
        maximal_h_free_family(complete_graph(7), cycle_graph(4))


def test_hp_phase_from_registry():
    g = complete_graph(9)
    m = make_strategy("hp-phase", Player.MAKER, g, cycle_graph(4), p=1.0)
    res = play(LazyHGame(g, cycle_graph(4)), m, make_strategy("random", Player.BREAKER, g, cycle_graph(4), seed=0))
    assert res.illegal is None
