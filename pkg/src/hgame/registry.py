"""Strategy names used by the command line and the experiment runner."""

from __future__ import annotations

from .breaker import deterministic_breaker, forest_pairing_breaker, orientation_pairing_breaker
from .errors import CapabilityError, Refused
from .game import ESBreaker, FirstUnclaimed, GreedyMaker, Player, RandomStrategy, build_h_game
from .graph import Graph, enumerate_copies
from .hcore import composite_breaker
from .maker import (
    ContainerFamily,
    auxiliary_container_breaker,
    hp_phase_maker,
    triangle_maker_on_k5minus,
)
from .solver import DEFAULT_CAP, SolverStrategy

MAKER_STRATEGIES = ("random", "first", "greedy", "es", "solver", "hp-phase", "k5minus-triangle", "container-aux")
BREAKER_STRATEGIES = (
    "random",
    "first",
    "es",
    "solver",
    "orientation-pairing",
    "forest-pairing",
    "deterministic",
    "composite",
)

FAMILY_EDGE_CAP = 16


def maximal_h_free_family(g: Graph, h: Graph, cap: int = FAMILY_EDGE_CAP) -> ContainerFamily:
    """Containers = all maximal H-free edge sets of ``g``, with empty fingerprints.

    Every H-free subgraph lies in one of them, so the family satisfies the
    container property on this board by construction.
    """
    if g.e > cap:
        raise CapabilityError(f"{g.e} edges exceed the container-enumeration cap of {cap}")
    masks = [sum(1 << x for x in c.edge_ids) for c in enumerate_copies(g, h)] if g.e else []
    full = (1 << g.e) - 1

    def free(s: int) -> bool:
        return not any(m & s == m for m in masks)

    maximal = []
    for s in range(full + 1):
        if free(s) and all(s >> x & 1 or not free(s | 1 << x) for x in range(g.e)):
            maximal.append(s)
    containers = [[x for x in range(g.e) if s >> x & 1] for s in maximal]
    return ContainerFamily.build(range(g.e), [() for _ in containers], containers)


def make_strategy(
    name: str,
    side: Player,
    g: Graph,
    h: Graph,
    seed: int | None = None,
    system=None,
    cap: int = DEFAULT_CAP,
    p: float | None = None,
):
    """Build a fresh strategy instance; ``system`` is materialized on demand."""

    def sys_():
        return system if system is not None else build_h_game(g, h)

    if name == "random":
        return RandomStrategy(seed)
    if name == "first":
        return FirstUnclaimed()
    if name in ("greedy", "es"):
        return GreedyMaker() if side is Player.MAKER else ESBreaker()
    if name == "solver":
        return SolverStrategy(sys_(), side, cap, seed)
    if side is Player.MAKER:
        if name == "hp-phase":
            return hp_phase_maker(g, h, p=p, cap=cap, seed=seed or 0)
        if name == "k5minus-triangle":
            return triangle_maker_on_k5minus(g)
        if name == "container-aux":
            return auxiliary_container_breaker(sys_(), maximal_h_free_family(g, h))
    else:
        if name == "orientation-pairing":
            return orientation_pairing_breaker(g, h)
        if name == "forest-pairing":
            return forest_pairing_breaker(g)
        if name == "deterministic":
            return deterministic_breaker(g, h, cap)
        if name == "composite":
            return composite_breaker(g, h, cap=cap, order_seed=seed or 0)
    known = MAKER_STRATEGIES if side is Player.MAKER else BREAKER_STRATEGIES
    raise Refused(f"unknown {side.value} strategy {name!r}; choose from {', '.join(known)}")


def needs_system(name: str) -> bool:
    return name in ("greedy", "es", "solver", "container-aux")


__all__ = ["make_strategy", "maximal_h_free_family", "MAKER_STRATEGIES", "BREAKER_STRATEGIES", "needs_system"]
