"""Exact Maker-Breaker game values by memoized backward induction.

A position is reduced to the *residuals* of the live winning sets: the
unclaimed elements of every set that holds no Breaker element. Claimed and
dead elements vanish from the key, and a residual that contains another is
dropped (Maker completing the larger one would have completed the smaller
one first). Extra moves never hurt either side, so only elements of some
residual are searched.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable

from .errors import CapabilityError
from .game import GameState, Player, WinningSetSystem

DEFAULT_CAP = 20

Residuals = frozenset  # frozenset[int] of bitmasks


@dataclass(frozen=True)
class SolveOutcome:
    winner: Player
    best_move: int | None
    node_count: int

    def to_json(self) -> dict:
        return {"winner": self.winner.value, "best_move": self.best_move, "node_count": self.node_count}


def _normalize(masks: Iterable[int]) -> Residuals | None:
    """Drop supersets; ``None`` when some residual is empty (Maker has completed a set)."""
    kept: list[int] = []
    for r in sorted(set(masks), key=int.bit_count):
        if r == 0:
            return None
        if not any(k & r == k for k in kept):
            kept.append(r)
    return frozenset(kept)


def _order(res: Residuals) -> list[int]:
    """Live bits, heaviest potential first, ties by bit index."""
    top = max(r.bit_count() for r in res)
    weight: dict[int, int] = {}
    for r in res:
        w = 1 << (top - r.bit_count())
        s = r
        while s:
            low = s & -s
            weight[low] = weight.get(low, 0) + w
            s ^= low
    return sorted(weight, key=lambda b: (-weight[b], b))


class Solver:
    """Memoized solver for one system. Not thread-safe; owns its memo table."""

    def __init__(self, system: WinningSetSystem, cap: int = DEFAULT_CAP):
        self.system = system
        self.cap = cap
        live = sorted(system.live_elements())
        self.bit_of = {x: 1 << i for i, x in enumerate(live)}
        self.elem_of = {1 << i: x for i, x in enumerate(live)}
        self._sets = [(s, sum(self.bit_of[x] for x in s)) for s in system.winning_sets]
        self._memo: dict[tuple[Residuals, bool], bool] = {}
        self._memo_within: dict[tuple[Residuals, bool, int], bool] = {}
        self.nodes = 0

    # -- positions -------------------------------------------------------
    def residuals(self, maker: set[int], breaker: set[int]) -> Residuals | None:
        masks = []
        for elems, mask in self._sets:
            if breaker.isdisjoint(elems):
                masks.append(mask & ~self._mask(maker & set(elems)))
        return _normalize(masks)

    def _mask(self, elems: Iterable[int]) -> int:
        m = 0
        for x in elems:
            m |= self.bit_of.get(x, 0)
        return m

    def _check_cap(self, res: Residuals) -> None:
        live = 0
        for r in res:
            live |= r
        if live.bit_count() > self.cap:
            raise CapabilityError(
                f"{live.bit_count()} live elements exceed the solver cap of {self.cap}"
            )

    # -- search ------------------------------------------------------------
    def maker_wins(self, res: Residuals, maker_to_move: bool) -> bool:
        key = (res, maker_to_move)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        self.nodes += 1
        if not res:
            out = False
        elif maker_to_move:
            out = False
            if any(r.bit_count() == 1 for r in res):
                out = True
            else:
                for b in _order(res):
                    nxt = _normalize(r & ~b for r in res)
                    if nxt is None or self.maker_wins(nxt, False):
                        out = True
                        break
        else:
            singles = {r for r in res if r.bit_count() == 1}
            if len(singles) >= 2:
                out = True
            else:
                moves = list(singles) if singles else _order(res)
                out = True
                for b in moves:
                    if not self.maker_wins(frozenset(r for r in res if not r & b), True):
                        out = False
                        break
        self._memo[key] = out
        return out

    def maker_wins_within(self, res: Residuals, maker_to_move: bool, budget: int) -> bool:
        """Maker completes a set using at most ``budget`` more Maker moves."""
        key = (res, maker_to_move, budget)
        hit = self._memo_within.get(key)
        if hit is not None:
            return hit
        self.nodes += 1
        if not res or budget <= 0:
            out = False
        elif maker_to_move:
            out = any(r.bit_count() == 1 for r in res)
            if not out and budget > 1:
                for b in _order(res):
                    nxt = _normalize(r & ~b for r in res)
                    if nxt is None or self.maker_wins_within(nxt, False, budget - 1):
                        out = True
                        break
        else:
            singles = {r for r in res if r.bit_count() == 1}
            if len(singles) >= 2:
                out = True
            else:
                moves = list(singles) if singles else _order(res)
                out = True
                for b in moves:
                    if not self.maker_wins_within(frozenset(r for r in res if not r & b), True, budget):
                        out = False
                        break
        self._memo_within[key] = out
        return out

    # -- public API ----------------------------------------------------------
    def solve(self, first: Player = Player.MAKER, state: GameState | None = None) -> SolveOutcome:
        if state is None:
            maker, breaker, to_move = set(), set(), first
        else:
            maker, breaker, to_move = state.maker, state.breaker, state.to_move
        start = self.nodes
        res = self.residuals(maker, breaker)
        if res is None:
            return SolveOutcome(Player.MAKER, None, 0)
        self._check_cap(res)
        maker_turn = to_move is Player.MAKER
        win = self.maker_wins(res, maker_turn)
        winner = Player.MAKER if win else Player.BREAKER
        best = self._best(res, maker_turn)
        return SolveOutcome(winner, best, self.nodes - start)

    def _outcomes(self, res: Residuals, maker_turn: bool) -> list[tuple[int, bool]]:
        """(element, maker wins afterwards) for every live move."""
        out = []
        for b in _order(res):
            if maker_turn:
                nxt = _normalize(r & ~b for r in res)
                mw = nxt is None or self.maker_wins(nxt, False)
            else:
                mw = self.maker_wins(frozenset(r for r in res if not r & b), True)
            out.append((self.elem_of[b], mw))
        return out

    def _best(self, res: Residuals, maker_turn: bool) -> int | None:
        if not res:
            return None
        for x, mw in self._outcomes(res, maker_turn):
            if mw == maker_turn:
                return x
        return self.elem_of[_order(res)[0]]

    def good_moves(self, state: GameState, side: Player) -> list[int]:
        """Live moves that keep a win for ``side`` (empty if ``side`` is lost or nothing is live)."""
        res = self.residuals(state.maker, state.breaker)
        if not res:
            return []
        self._check_cap(res)
        want = side is Player.MAKER
        return [x for x, mw in self._outcomes(res, side is Player.MAKER) if mw == want]

    def fastest_maker_moves(self, state: GameState, budget: int) -> tuple[int, list[int]]:
        """Smallest t <= budget such that Maker wins within t moves, and the moves achieving it."""
        res = self.residuals(state.maker, state.breaker)
        if res is None or not res:
            return 0, []
        self._check_cap(res)
        for t in range(1, budget + 1):
            if self.maker_wins_within(res, True, t):
                moves = []
                for b in _order(res):
                    nxt = _normalize(r & ~b for r in res)
                    if nxt is None or self.maker_wins_within(nxt, False, t - 1):
                        moves.append(self.elem_of[b])
                return t, moves
        return budget + 1, []


def solve(system: WinningSetSystem, first: Player = Player.MAKER, cap: int = DEFAULT_CAP) -> SolveOutcome:
    return Solver(system, cap).solve(first)


class SolverStrategy:
    """Plays a value-preserving move for ``side`` on its own system.

    Works as a sub-board strategy: only the system's winning sets are
    considered, and when nothing of the system is live it falls back to the
    smallest unclaimed element of the whole board.
    """

    def __init__(
        self,
        system: WinningSetSystem,
        side: Player,
        cap: int = DEFAULT_CAP,
        seed: int | None = None,
        solver: Solver | None = None,
    ):
        self.system = system
        self.side = side
        self.solver = solver or Solver(system, cap)
        self.rng = random.Random(seed) if seed is not None else None
        self.name = f"solver-{side.value}"
        self.solver._check_cap(self.solver.residuals(set(), set()) or frozenset())

    def next_move(self, state: GameState, system=None) -> int:
        res = self.solver.residuals(state.maker, state.breaker)
        if res:
            outcomes = self.solver._outcomes(res, self.side is Player.MAKER)
            want = self.side is Player.MAKER
            good = [x for x, mw in outcomes if mw == want]
            if good:
                return self.rng.choice(good) if self.rng else good[0]
            pool = [x for x, _ in outcomes]
            return self.rng.choice(pool) if self.rng else pool[0]
        own = [x for x in self.system.board if x in state.unclaimed]
        if own:
            return own[0]
        return state.min_unclaimed()


def optimal_strategy(
    system: WinningSetSystem, side: Player, cap: int = DEFAULT_CAP, seed: int | None = None
) -> SolverStrategy:
    return SolverStrategy(system, side, cap, seed)
