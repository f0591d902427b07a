"""Maker-Breaker H-games: densities, exact solving, strategies and G(n,p) experiments."""

from .density import (
    DensityReport,
    ForestDecomposition,
    Orientation,
    arboricity_ratio,
    density_report,
    forest_decomposition,
    is_strictly_2_balanced,
    max_density,
    orient_bounded_outdegree,
    two_density,
)
from .errors import CapabilityError, Refused
from .game import (
    GameResult,
    GameState,
    LazyHGame,
    Player,
    WinningSetSystem,
    build_h_game,
    erdos_selfridge_value,
    es_breaker_move,
    play,
    replay,
)
from .graph import (
    Graph,
    HCopy,
    SampleSpec,
    density_audit,
    enumerate_copies,
    expansion_check,
    gnp_sample,
    neighborhood,
    read_graph,
)
from .solver import SolveOutcome, Solver, optimal_strategy, solve

__version__ = "0.1.0"

__all__ = [
    "CapabilityError",
    "DensityReport",
    "ForestDecomposition",
    "GameResult",
    "GameState",
    "Graph",
    "HCopy",
    "LazyHGame",
    "Orientation",
    "Player",
    "Refused",
    "SampleSpec",
    "SolveOutcome",
    "Solver",
    "WinningSetSystem",
    "arboricity_ratio",
    "build_h_game",
    "density_audit",
    "density_report",
    "enumerate_copies",
    "erdos_selfridge_value",
    "es_breaker_move",
    "expansion_check",
    "forest_decomposition",
    "gnp_sample",
    "is_strictly_2_balanced",
    "max_density",
    "neighborhood",
    "optimal_strategy",
    "orient_bounded_outdegree",
    "play",
    "read_graph",
    "replay",
    "solve",
    "two_density",
]
