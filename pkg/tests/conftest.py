import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from hgame.graph import Graph  # noqa: E402


def random_graph(rng: random.Random, n: int, p: float) -> Graph:
    return Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p])


@pytest.fixture
def rng():
    return random.Random(12345)


def random_hypergraph(rng: random.Random, max_elems: int = 10, max_sets: int = 6, min_size: int = 1, max_size: int = 4):
    from hgame.game import WinningSetSystem

    n = rng.randint(max(1, min_size), max_elems)
    k = rng.randint(0, max_sets)
    sets = [rng.sample(range(n), rng.randint(min_size, min(max_size, n))) for _ in range(k)]
    return WinningSetSystem(range(n), sets)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
