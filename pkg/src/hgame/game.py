"""Maker-Breaker games on explicit hypergraphs and on graphs with a pattern.

A game is described by a :class:`WinningSetSystem` (board elements plus
winning sets) or, for boards too large to list every copy, by a
:class:`LazyHGame` that detects Maker's copies by local search.
"""

from __future__ import annotations

import heapq
import random
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable, Protocol, Sequence

from .graph import Graph, enumerate_copies, find_copy_through


class Player(str, Enum):
    MAKER = "maker"
    BREAKER = "breaker"

    @property
    def other(self) -> Player:
        return Player.BREAKER if self is Player.MAKER else Player.MAKER


# ---------------------------------------------------------------------------
# Systems


class WinningSetSystem:
    """Board elements and winning sets; sets are deduplicated and stored sorted."""

    def __init__(self, board: Iterable[int], winning_sets: Iterable[Iterable[int]]):
        self.board: tuple[int, ...] = tuple(sorted(set(board)))
        on_board = set(self.board)
        sets = set()
        for s in winning_sets:
            t = tuple(sorted(set(s)))
            if not t:
                raise ValueError("empty winning set")
            missing = [x for x in t if x not in on_board]
            if missing:
                raise ValueError(f"winning-set elements {missing} are not on the board")
            sets.add(t)
        self.winning_sets: tuple[tuple[int, ...], ...] = tuple(sorted(sets))
        self._index: dict[int, list[int]] | None = None

    def __repr__(self) -> str:
        return f"WinningSetSystem(board={len(self.board)}, sets={len(self.winning_sets)})"

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, WinningSetSystem)
            and self.board == other.board
            and self.winning_sets == other.winning_sets
        )

    def __hash__(self) -> int:
        return hash((self.board, self.winning_sets))

    @property
    def index(self) -> dict[int, list[int]]:
        """element -> indices of the winning sets containing it."""
        if self._index is None:
            idx: dict[int, list[int]] = {x: [] for x in self.board}
            for i, s in enumerate(self.winning_sets):
                for x in s:
                    idx[x].append(i)
            self._index = idx
        return self._index

    def live_elements(self) -> set[int]:
        return {x for s in self.winning_sets for x in s}

    def restrict(self, elements: Iterable[int]) -> WinningSetSystem:
        """Sub-game on ``elements``: only winning sets lying entirely inside survive."""
        keep = set(elements) & set(self.board)
        return WinningSetSystem(keep, [s for s in self.winning_sets if keep.issuperset(s)])

    def prune_dead(self) -> WinningSetSystem:
        return WinningSetSystem(self.live_elements(), self.winning_sets)

    def relabel(self, mapping: dict[int, int]) -> WinningSetSystem:
        return WinningSetSystem(
            (mapping[x] for x in self.board),
            ([mapping[x] for x in s] for s in self.winning_sets),
        )

    def tracker(self) -> _SetTracker:
        return _SetTracker(self)

    def to_json(self) -> dict:
        return {"board": list(self.board), "winning_sets": [list(s) for s in self.winning_sets]}


class _SetTracker:
    def __init__(self, system: WinningSetSystem):
        self.system = system
        self.count = [0] * len(system.winning_sets)

    def claim(self, x: int) -> tuple[tuple[int, ...], int] | None:
        sets = self.system.winning_sets
        for i in self.system.index.get(x, ()):
            self.count[i] += 1
            if self.count[i] == len(sets[i]):
                return sets[i], i
        return None


class LazyHGame:
    """The H-game on E(G) without listing copies; Maker's copies found by rooted search."""

    def __init__(self, g: Graph, h: Graph):
        self.graph = g
        self.pattern = h
        self.board: tuple[int, ...] = tuple(range(g.e))
        self._system: WinningSetSystem | None = None

    def materialize(self) -> WinningSetSystem:
        if self._system is None:
            self._system = build_h_game(self.graph, self.pattern)
        return self._system

    def tracker(self) -> _GraphTracker:
        return _GraphTracker(self.graph, self.pattern)


class _GraphTracker:
    def __init__(self, g: Graph, h: Graph):
        self.g, self.h = g, h
        self.adj = _DefaultAdj()

    def claim(self, x: int):
        u, v = self.g.edges[x]
        self.adj.setdefault(u, set()).add(v)
        self.adj.setdefault(v, set()).add(u)
        phi = find_copy_through(self.adj, self.h, u, v)
        if phi is None:
            return None
        ids = tuple(sorted(self.g.edge_id(phi[a], phi[b]) for a, b in self.h.edges))
        return ids, None


class _DefaultAdj(dict):
    def __missing__(self, key):
        return ()


def build_h_game(g: Graph, h: Graph) -> WinningSetSystem:
    """Board E(G) (edge ids); one winning set per copy of H in G."""
    return WinningSetSystem(range(g.e), (c.edge_ids for c in enumerate_copies(g, h)))


# ---------------------------------------------------------------------------
# State


class GameState:
    """Partition of the board into Maker / Breaker / unclaimed, plus the move history.

    Strategies receive the live state object and must treat it as read-only.
    """

    def __init__(self, board: Iterable[int], to_move: Player = Player.MAKER):
        self.board = tuple(board)
        self.maker: set[int] = set()
        self.breaker: set[int] = set()
        self.unclaimed: set[int] = set(self.board)
        self.to_move = to_move
        self.history: list[tuple[Player, int]] = []
        self._pool = list(self.board)
        self._pos = {x: i for i, x in enumerate(self._pool)}
        self._heap = list(self.board)
        heapq.heapify(self._heap)

    def claim(self, player: Player, x: int) -> None:
        if x not in self.unclaimed:
            raise ValueError(f"element {x} is not unclaimed")
        self.unclaimed.discard(x)
        (self.maker if player is Player.MAKER else self.breaker).add(x)
        self.history.append((player, x))
        i = self._pos.pop(x)
        last = self._pool.pop()
        if last != x:
            self._pool[i] = last
            self._pos[last] = i
        self.to_move = player.other

    def min_unclaimed(self) -> int | None:
        while self._heap and self._heap[0] not in self.unclaimed:
            heapq.heappop(self._heap)
        return self._heap[0] if self._heap else None

    def random_unclaimed(self, rng: random.Random) -> int | None:
        if not self._pool:
            return None
        return self._pool[rng.randrange(len(self._pool))]

    def last_move(self, player: Player | None = None) -> int | None:
        for who, x in reversed(self.history):
            if player is None or who is player:
                return x
        return None

    def owned(self, player: Player) -> set[int]:
        return self.maker if player is Player.MAKER else self.breaker

    def copy(self) -> GameState:
        other = GameState(self.board, self.to_move)
        for who, x in self.history:
            other.claim(who, x)
        other.to_move = self.to_move
        return other

    @classmethod
    def from_sets(
        cls, board: Iterable[int], maker: Iterable[int], breaker: Iterable[int], to_move: Player
    ) -> GameState:
        st = cls(board, to_move)
        for x in maker:
            st.claim(Player.MAKER, x)
        for x in breaker:
            st.claim(Player.BREAKER, x)
        st.to_move = to_move
        return st


# ---------------------------------------------------------------------------
# Strategies


class Strategy(Protocol):
    name: str

    def next_move(self, state: GameState, system) -> int: ...


class RandomStrategy:
    name = "random"

    def __init__(self, seed: int | None = None):
        self.rng = random.Random(seed)

    def next_move(self, state: GameState, system) -> int:
        return state.random_unclaimed(self.rng)


class FirstUnclaimed:
    name = "first"

    def next_move(self, state: GameState, system) -> int:
        return state.min_unclaimed()


class Scripted:
    """Plays a fixed sequence; used for replays and hand-written test scenarios."""

    name = "scripted"

    def __init__(self, moves: Sequence[int]):
        self.moves = list(moves)
        self.i = 0

    def next_move(self, state: GameState, system) -> int:
        if self.i < len(self.moves):
            self.i += 1
            return self.moves[self.i - 1]
        return state.min_unclaimed()


# ---------------------------------------------------------------------------
# Erdos-Selfridge potential


def erdos_selfridge_value(system: WinningSetSystem, state: GameState | None = None) -> Fraction:
    """Sum of 2^-|A| over winning sets; with a state, over live sets using their unclaimed parts."""
    if state is None:
        return sum((Fraction(1, 2 ** len(s)) for s in system.winning_sets), Fraction(0))
    total = Fraction(0)
    for s in system.winning_sets:
        if state.breaker.isdisjoint(s):
            total += Fraction(1, 2 ** sum(1 for x in s if x not in state.maker))
    return total


def _element_weights(state: GameState, system: WinningSetSystem) -> dict[int, int]:
    live = []
    for s in system.winning_sets:
        if state.breaker.isdisjoint(s):
            rest = [x for x in s if x not in state.maker]
            live.append(rest)
    if not live:
        return {}
    top = max(len(r) for r in live)
    weights: dict[int, int] = {}
    for rest in live:
        w = 1 << (top - len(rest))
        for x in rest:
            weights[x] = weights.get(x, 0) + w
    return weights


def potential_move(state: GameState, system: WinningSetSystem) -> int:
    """Unclaimed element of maximal potential sum_{live A containing x} 2^-|A minus Maker|.

    Ties go to the smallest id; with no live set, the smallest unclaimed id.
    """
    if not state.unclaimed:
        raise ValueError("no unclaimed element")
    weights = _element_weights(state, system)
    best, best_w = None, -1
    for x, w in weights.items():
        if x in state.unclaimed and (w > best_w or (w == best_w and x < best)):
            best, best_w = x, w
    return best if best is not None else state.min_unclaimed()


def es_breaker_move(state: GameState, system: WinningSetSystem) -> int:
    return potential_move(state, system)


def es_breaker_wins(system: WinningSetSystem, first: Player) -> bool:
    """Erdos-Selfridge sufficient condition for a Breaker win.

    Breaker first: potential < 1. Maker first: every Maker opening leaves
    Breaker facing a potential < 1.
    """
    if first is Player.BREAKER:
        return erdos_selfridge_value(system) < 1
    if not system.winning_sets:
        return True
    for x in system.live_elements():
        st = GameState.from_sets(system.board, [x], [], Player.BREAKER)
        if any(s == (x,) for s in system.winning_sets) or erdos_selfridge_value(system, st) >= 1:
            return False
    return True


class ESBreaker:
    name = "es"

    def next_move(self, state: GameState, system) -> int:
        return es_breaker_move(state, system)


class GreedyMaker:
    """Maker counterpart of the potential strategy: claim the element of largest live weight."""

    name = "greedy"

    def next_move(self, state: GameState, system) -> int:
        return potential_move(state, system)


# ---------------------------------------------------------------------------
# Play


@dataclass
class GameResult:
    winner: Player
    transcript: list[tuple[Player, int]]
    first: Player
    completed_set: tuple[int, ...] | None = None
    completed_index: int | None = None
    illegal: tuple[Player, object] | None = None
    notes: list[str] = field(default_factory=list)

    def maker_elements(self) -> set[int]:
        return {x for who, x in self.transcript if who is Player.MAKER}

    def breaker_elements(self) -> set[int]:
        return {x for who, x in self.transcript if who is Player.BREAKER}

    def to_json(self) -> dict:
        return {
            "winner": self.winner.value,
            "first": self.first.value,
            "moves": len(self.transcript),
            "transcript": [[who.value, x] for who, x in self.transcript],
            "completed_set": None if self.completed_set is None else list(self.completed_set),
            "illegal": None if self.illegal is None else [self.illegal[0].value, self.illegal[1]],
            "notes": self.notes,
        }


def play(system, maker, breaker, first: Player = Player.MAKER) -> GameResult:
    """Alternate moves until Maker completes a winning set or the board is exhausted.

    A strategy that returns a claimed or off-board element forfeits.
    """
    state = GameState(system.board, first)
    tracker = system.tracker()
    players = {Player.MAKER: maker, Player.BREAKER: breaker}
    while state.unclaimed:
        who = state.to_move
        x = players[who].next_move(state, system)
        if x not in state.unclaimed:
            result = GameResult(who.other, list(state.history), first, illegal=(who, x))
            result.notes.append(f"{who.value} forfeits: illegal move {x!r}")
            return _collect_notes(result, maker, breaker)
        state.claim(who, x)
        if who is Player.MAKER:
            done = tracker.claim(x)
            if done is not None:
                result = GameResult(Player.MAKER, list(state.history), first, done[0], done[1])
                return _collect_notes(result, maker, breaker)
    return _collect_notes(GameResult(Player.BREAKER, list(state.history), first), maker, breaker)


def _collect_notes(result: GameResult, *strategies) -> GameResult:
    for s in strategies:
        for note in getattr(s, "notes", ()):
            result.notes.append(f"{getattr(s, 'name', type(s).__name__)}: {note}")
    return result


def replay(system, transcript: Sequence[tuple[Player, int]], first: Player) -> GameResult:
    maker_moves = [x for who, x in transcript if who is Player.MAKER]
    breaker_moves = [x for who, x in transcript if who is Player.BREAKER]
    return play(system, Scripted(maker_moves), Scripted(breaker_moves), first)
