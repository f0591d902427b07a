"""Threshold exponents and Monte-Carlo experiments on G(n, p).

Two kinds of runs:

* certificate runs: each trial samples G(n, p), reduces it to its H-core and
  solves every minimal H-closed component exactly. A trial is a certified
  Breaker win only when every component is a Breaker win with Maker moving
  first inside it; one Maker-win component certifies a Maker win.
* heuristic sweeps: full games between named strategies. The win rate
  depends on the strategies and says nothing about the game value.
"""

from __future__ import annotations

import csv
import io
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .density import _subset_edge_counts, is_strictly_2_balanced, two_density
from .errors import CapabilityError, Refused
from .game import LazyHGame, Player, RandomStrategy, build_h_game, play
from .graph import Graph, SampleSpec, gnp_sample
from .hcore import CompositeBreaker, components_of_copies, preprocess
from .registry import make_strategy, needs_system
from .solver import DEFAULT_CAP, Solver

SCHEMA = "hgame.curve/1"


# ---------------------------------------------------------------------------
# Exponents


def threshold_exponent(h: Graph) -> Fraction:
    """1/m2(H)."""
    m2, _ = two_density(h)
    if m2 <= 0:
        raise Refused(f"m2(H) = {m2} is not positive")
    return 1 / m2


def balanced_witness(h: Graph) -> tuple[int, ...] | None:
    """A vertex set S with H[S] strictly 2-balanced, d2(H[S]) = m2(H), not a tree or a triangle.

    Only induced subgraphs need checking: dropping edges on a fixed vertex
    set lowers d2, so any maximizer is induced.
    """
    hc, old = h.relabel_compact()
    if hc.n < 3:
        return None
    m2, _ = two_density(hc)
    counts = _subset_edge_counts(hc)
    for s in range(1, 1 << hc.n):
        k = s.bit_count()
        if k < 3 or Fraction(counts[s] - 1, k - 2) != m2:
            continue
        vs = [i for i in range(hc.n) if s >> i & 1]
        sub = Graph(k, [(vs.index(u), vs.index(v)) for u, v in hc.edges if s >> u & 1 and s >> v & 1])
        if sub.e == k - 1 and sub.is_connected():
            continue  # tree
        if k == 3 and sub.e == 3:
            continue  # triangle
        if is_strictly_2_balanced(sub):
            return tuple(old[i] for i in vs)
    return None


def hp_threshold_exponent(h: Graph) -> Fraction:
    """min(5/9, 1/m2(H)); refused when H has no balanced witness."""
    if balanced_witness(h) is None:
        raise Refused(
            "H has no strictly 2-balanced subgraph of maximum 2-density that is neither a tree nor a triangle"
        )
    return min(Fraction(5, 9), threshold_exponent(h))


# ---------------------------------------------------------------------------
# Configuration and results


@dataclass
class ExperimentConfig:
    pattern: Graph
    n_list: Sequence[int]
    c_list: Sequence[float] = (0.1,)
    exponent: Fraction | None = None  # default 1/m2(H)
    p_list: Sequence[float] | None = None  # explicit p values override c_list
    trials: int = 10
    seed: int = 0
    cap: int = DEFAULT_CAP
    maker: str = "random"
    breaker: str = "es"
    first: Player = Player.MAKER
    audit_playouts: int = 0
    jobs: int = 1
    timing: bool = True
    pattern_name: str = "H"

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if not self.n_list:
            raise ValueError("n_list is empty")

    def cells(self) -> list[tuple[int, float, float | None]]:
        """(n, p, c) per cell; c is None for explicit p values."""
        out = []
        if self.p_list is not None:
            for n in self.n_list:
                for p in self.p_list:
                    out.append((n, float(p), None))
        else:
            t = float(self.exponent if self.exponent is not None else threshold_exponent(self.pattern))
            for n in self.n_list:
                for c in self.c_list:
                    out.append((n, float(c) * n ** (-t), float(c)))
        for n, p, _ in out:
            if not 0 <= p <= 1:
                raise ValueError(f"p = {p} outside [0, 1] for n = {n}")
        return out


@dataclass
class CellResult:
    n: int
    p: float
    c: float | None
    trials: int
    breaker_wins: int = 0
    maker_wins: int = 0
    uncertified: int = 0
    max_component: int = 0
    wall_time: float = 0.0
    histogram: dict[int, int] = field(default_factory=dict)
    log: list[str] = field(default_factory=list)

    def to_row(self) -> dict:
        return {
            "n": self.n,
            "p": repr(self.p),
            "c": "" if self.c is None else repr(self.c),
            "trials": self.trials,
            "breaker_wins": self.breaker_wins,
            "maker_wins": self.maker_wins,
            "uncertified": self.uncertified,
            "max_component": self.max_component,
            "wall_time": f"{self.wall_time:.3f}",
        }


@dataclass
class ThresholdCurve:
    kind: str  # "certified" or "heuristic"
    pattern: str
    cells: list[CellResult]
    config: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA,
            "kind": self.kind,
            "pattern": self.pattern,
            "config": self.config,
            "cells": [
                {**asdict(c), "histogram": {str(k): v for k, v in sorted(c.histogram.items())}}
                for c in self.cells
            ],
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        fields = ["schema", "kind", "pattern", *CellResult(0, 0.0, None, 0).to_row().keys()]
        w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
        w.writeheader()
        for c in self.cells:
            w.writerow({"schema": SCHEMA, "kind": self.kind, "pattern": self.pattern, **c.to_row()})
        return buf.getvalue()

    def dumps(self, fmt: str) -> str:
        return self.to_csv() if fmt == "csv" else json.dumps(self.to_json(), indent=2) + "\n"


def trial_seed(seed: int, cell: int, trial: int) -> int:
    return int(np.random.SeedSequence([seed, cell, trial]).generate_state(1, np.uint64)[0])


def _config_summary(cfg: ExperimentConfig) -> dict:
    return {
        "n_list": list(cfg.n_list),
        "c_list": None if cfg.p_list is not None else [float(c) for c in cfg.c_list],
        "p_list": None if cfg.p_list is None else [float(p) for p in cfg.p_list],
        "exponent": None if cfg.exponent is None else str(cfg.exponent),
        "trials": cfg.trials,
        "seed": cfg.seed,
        "cap": cfg.cap,
        "pattern_edges": [list(e) for e in cfg.pattern.edges],
    }


# ---------------------------------------------------------------------------
# Certificate trials


@dataclass
class CertificateTrial:
    outcome: str  # "breaker", "maker" or "uncertified"
    components: list[int]
    log: list[str]


def certify_graph(g: Graph, h: Graph, cap: int = DEFAULT_CAP, order_seed: int = 0) -> CertificateTrial:
    res = preprocess(g, h, order_seed)
    comps = components_of_copies(res.core_copies)
    sizes = [len(c.edge_ids) for c in comps]
    log: list[str] = []
    maker = oversized = False
    for idx, comp in enumerate(comps):
        try:
            out = Solver(comp.system(), cap).solve(Player.MAKER)
        except CapabilityError:
            oversized = True
            log.append(f"component {idx} with {len(comp.edge_ids)} edges exceeds solver cap {cap}")
            continue
        if out.winner is Player.MAKER:
            maker = True
            log.append(f"component {idx} with {len(comp.edge_ids)} edges is a Maker win")
    outcome = "maker" if maker else "uncertified" if oversized else "breaker"
    return CertificateTrial(outcome, sizes, log)


def _certificate_task(args) -> tuple[CertificateTrial, list[str]]:
    n, p, s, edges, cap, audits = args
    h = Graph(1 + max(max(e) for e in edges), edges)
    g = gnp_sample(SampleSpec(n, p, s))
    trial = certify_graph(g, h, cap)
    notes: list[str] = []
    if audits and trial.outcome == "breaker":
        notes.extend(audit_composite(g, h, audits, s, cap))
    return trial, notes


def audit_composite(g: Graph, h: Graph, playouts: int, seed: int, cap: int = DEFAULT_CAP) -> list[str]:
    """Play the composite Breaker against random Makers; report any Maker copy."""
    problems = []
    game = LazyHGame(g, h)
    core = preprocess(g, h)
    for i in range(playouts):
        breaker = CompositeBreaker(g, h, cap=cap, result=core)
        r = play(game, RandomStrategy(seed + i), breaker, Player.MAKER)
        if r.winner is Player.MAKER:
            problems.append(f"audit playout {i}: Maker completed {r.completed_set}")
    return problems


def _run(tasks, fn, jobs: int):
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(fn, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    return [fn(t) for t in tasks]


def breaker_certificate_experiment(cfg: ExperimentConfig) -> ThresholdCurve:
    cells = cfg.cells()
    edges = [tuple(e) for e in cfg.pattern.edges]
    cells_out = []
    for ci, (n, p, c) in enumerate(cells):
        t0 = time.perf_counter()
        tasks = [(n, p, trial_seed(cfg.seed, ci, t), edges, cfg.cap, cfg.audit_playouts) for t in range(cfg.trials)]
        results = _run(tasks, _certificate_task, cfg.jobs)
        cell = CellResult(n, p, c, cfg.trials)
        for t, (trial, notes) in enumerate(results):
            if trial.outcome == "breaker":
                cell.breaker_wins += 1
            elif trial.outcome == "maker":
                cell.maker_wins += 1
            else:
                cell.uncertified += 1
            for size in trial.components:
                cell.histogram[size] = cell.histogram.get(size, 0) + 1
                cell.max_component = max(cell.max_component, size)
            cell.log.extend(f"trial {t}: {line}" for line in trial.log + notes)
        cell.wall_time = time.perf_counter() - t0 if cfg.timing else 0.0
        cells_out.append(cell)
    return ThresholdCurve("certified", cfg.pattern_name, cells_out, _config_summary(cfg))


# ---------------------------------------------------------------------------
# Heuristic full games


def _game_task(args) -> tuple[str, list[str]]:
    n, p, s, edges, maker, breaker, first, cap = args
    h = Graph(1 + max(max(e) for e in edges), edges)
    g = gnp_sample(SampleSpec(n, p, s))
    system = build_h_game(g, h) if needs_system(maker) or needs_system(breaker) else None
    try:
        m = make_strategy(maker, Player.MAKER, g, h, seed=s, system=system, cap=cap, p=p)
        b = make_strategy(breaker, Player.BREAKER, g, h, seed=s + 1, system=system, cap=cap, p=p)
    except (Refused, CapabilityError) as exc:
        return "uncertified", [f"strategy refused: {exc}"]
    game = system if system is not None else LazyHGame(g, h)
    r = play(game, m, b, Player(first))
    return r.winner.value, list(r.notes)


def full_game_experiment(cfg: ExperimentConfig) -> ThresholdCurve:
    cells = cfg.cells()
    edges = [tuple(e) for e in cfg.pattern.edges]
    cells_out = []
    for ci, (n, p, c) in enumerate(cells):
        t0 = time.perf_counter()
        tasks = [
            (n, p, trial_seed(cfg.seed, ci, t), edges, cfg.maker, cfg.breaker, cfg.first.value, cfg.cap)
            for t in range(cfg.trials)
        ]
        cell = CellResult(n, p, c, cfg.trials)
        for t, (winner, notes) in enumerate(_run(tasks, _game_task, cfg.jobs)):
            if winner == "maker":
                cell.maker_wins += 1
            elif winner == "breaker":
                cell.breaker_wins += 1
            else:
                cell.uncertified += 1
            cell.log.extend(f"trial {t}: {line}" for line in notes)
        cell.wall_time = time.perf_counter() - t0 if cfg.timing else 0.0
        cells_out.append(cell)
    summary = {**_config_summary(cfg), "maker": cfg.maker, "breaker": cfg.breaker, "first": cfg.first.value}
    return ThresholdCurve("heuristic", cfg.pattern_name, cells_out, summary)
