"""Command-line entry point: ``hgame <command> ...``.

Exit codes: 0 on success, 2 when a computation refuses (size cap or a
failed precondition), 1 on bad input files.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from collections import Counter
from fractions import Fraction

from .density import EXACT_CAP, density_report
from .errors import CapabilityError, Refused
from .experiments import (
    ExperimentConfig,
    breaker_certificate_experiment,
    full_game_experiment,
    hp_threshold_exponent,
    threshold_exponent,
)
from .game import LazyHGame, Player, build_h_game, play
from .graph import read_graph
from .hcore import components_of_copies, preprocess
from .registry import BREAKER_STRATEGIES, MAKER_STRATEGIES, make_strategy, needs_system
from .solver import DEFAULT_CAP, Solver


def _emit(args, payload: dict | str) -> None:
    if isinstance(payload, str):
        text = payload
    elif args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["key", "value"])
        for k, v in payload.items():
            w.writerow([k, json.dumps(v) if isinstance(v, (dict, list)) else v])
        text = buf.getvalue()
    else:
        text = json.dumps(payload, indent=2) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_density(args) -> None:
    g = read_graph(args.graph)
    compact, _ = g.relabel_compact()
    include_m2 = compact.n <= EXACT_CAP
    rep = density_report(g, include_m2=include_m2).to_json()
    if not include_m2 and g.n >= 3:
        rep["notes"] = [f"m2 skipped: {compact.n} non-isolated vertices exceed the exact cap {EXACT_CAP}"]
    _emit(args, rep)


def cmd_solve(args) -> None:
    g, h = read_graph(args.graph), read_graph(args.pattern)
    out = Solver(build_h_game(g, h), args.cap).solve(Player(args.first))
    _emit(args, out.to_json())


def cmd_play(args) -> None:
    g, h = read_graph(args.graph), read_graph(args.pattern)
    system = build_h_game(g, h) if needs_system(args.maker) or needs_system(args.breaker) else None
    seed = args.seed
    maker = make_strategy(args.maker, Player.MAKER, g, h, seed=seed, system=system, cap=args.cap)
    breaker = make_strategy(args.breaker, Player.BREAKER, g, h, seed=seed + 1, system=system, cap=args.cap)
    game = system if system is not None else LazyHGame(g, h)
    result = play(game, maker, breaker, Player(args.first))
    _emit(args, {"maker": args.maker, "breaker": args.breaker, **result.to_json()})


def cmd_hcore(args) -> None:
    g, h = read_graph(args.graph), read_graph(args.pattern)
    res = preprocess(g, h, args.seed)
    comps = components_of_copies(res.core_copies)
    hist = Counter(len(c.edge_ids) for c in comps)
    _emit(
        args,
        {
            **res.summary(),
            "components": len(comps),
            "component_sizes": {str(k): v for k, v in sorted(hist.items())},
            "pairs": [list(p) for p in res.pairs],
            "core": sorted(res.core_edges),
        },
    )


def _experiment_config(args) -> ExperimentConfig:
    h = read_graph(args.pattern)
    return ExperimentConfig(
        pattern=h,
        n_list=args.n,
        c_list=args.c or [0.1],
        exponent=Fraction(args.exponent) if args.exponent else None,
        p_list=args.p,
        trials=args.trials,
        seed=args.seed,
        cap=args.cap,
        maker=getattr(args, "maker", "random"),
        breaker=getattr(args, "breaker", "es"),
        first=Player(getattr(args, "first", "maker")),
        audit_playouts=getattr(args, "audit", 0),
        jobs=args.jobs,
        timing=not args.no_timing,
        pattern_name=str(args.pattern),
    )


def cmd_certify(args) -> None:
    curve = breaker_certificate_experiment(_experiment_config(args))
    _emit(args, curve.dumps(args.format))
    for cell in curve.cells:
        for line in cell.log:
            print(f"n={cell.n} p={cell.p:.6g}: {line}", file=sys.stderr)


def cmd_sweep(args) -> None:
    curve = full_game_experiment(_experiment_config(args))
    _emit(args, curve.dumps(args.format))


def cmd_threshold(args) -> None:
    h = read_graph(args.pattern)
    value = hp_threshold_exponent(h) if args.hp else threshold_exponent(h)
    _emit(args, {"pattern": str(args.pattern), "hp": args.hp, "exponent": str(value), "float": float(value)})


def build_parser() -> argparse.ArgumentParser:
    def add_common(p: argparse.ArgumentParser, default) -> None:
        p.add_argument("--seed", type=int, default=default(0), help="random seed")
        p.add_argument("--jobs", type=int, default=default(1), help="worker processes for experiments")
        p.add_argument("--out", default=default(None), help="write output to this file")
        p.add_argument("--format", choices=("csv", "json"), default=default("json"))
        p.add_argument("--cap", type=int, default=default(DEFAULT_CAP), help="solver cap on live elements")

    parser = argparse.ArgumentParser(prog="hgame", description="Maker-Breaker H-games on graphs")
    add_common(parser, lambda v: v)
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name: str, fn, help: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help)
        add_common(p, lambda v: argparse.SUPPRESS)
        p.set_defaults(func=fn)
        return p

    p = command("density", cmd_density, "density invariants of a graph as JSON")
    p.add_argument("graph", help="edge-list file, .json graph or a named pattern (K3, C4, K5-, ...)")

    p = command("solve", cmd_solve, "exact game value")
    p.add_argument("graph")
    p.add_argument("pattern")
    p.add_argument("--first", choices=("maker", "breaker"), default="maker")

    p = command("play", cmd_play, "play one game between named strategies")
    p.add_argument("graph")
    p.add_argument("pattern")
    p.add_argument("--maker", default="random", choices=MAKER_STRATEGIES)
    p.add_argument("--breaker", default="es", choices=BREAKER_STRATEGIES)
    p.add_argument("--first", choices=("maker", "breaker"), default="maker")

    p = command("hcore", cmd_hcore, "H-core preprocessing summary")
    p.add_argument("graph")
    p.add_argument("pattern")

    for name, fn, help in (
        ("certify", cmd_certify, "certified Breaker-win rates on G(n,p)"),
        ("sweep", cmd_sweep, "heuristic full-game win rates on G(n,p)"),
    ):
        p = command(name, fn, help)
        p.add_argument("pattern")
        p.add_argument("--n", type=int, nargs="+", required=True)
        p.add_argument("--c", type=float, nargs="+", help="multipliers of n^-exponent (default 0.1)")
        p.add_argument("--p", type=float, nargs="+", help="explicit edge probabilities")
        p.add_argument("--exponent", help="scaling exponent as a fraction (default 1/m2(H))")
        p.add_argument("--trials", type=int, default=10)
        p.add_argument("--no-timing", action="store_true", help="report wall time as 0 for byte-stable output")
        if name == "certify":
            p.add_argument("--audit", type=int, default=0, help="composite playouts per certified trial")
        else:
            p.add_argument("--maker", default="random", choices=MAKER_STRATEGIES)
            p.add_argument("--breaker", default="es", choices=BREAKER_STRATEGIES)
            p.add_argument("--first", choices=("maker", "breaker"), default="maker")

    p = command("threshold", cmd_threshold, "threshold exponent 1/m2(H), or min(5/9, 1/m2(H)) with --hp")
    p.add_argument("pattern")
    p.add_argument("--hp", action="store_true")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except (CapabilityError, Refused) as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
