import itertools
import random

import pytest

from certilab.graph_core import Graph, random_connected_graph

ACCEPTANCE_LINES: list[str] = []


def brute_force_colorable(graph: Graph, k: int) -> bool:
    """Try every assignment of k colors; independent of the backtracking solver."""
    edges = graph.edges()
    return any(
        all(c[u] != c[v] for u, v in edges) for c in itertools.product(range(k), repeat=graph.n)
    )


def small_random_graphs(count: int, max_n: int, seed: int) -> list[Graph]:
    rng = random.Random(seed)
    return [random_connected_graph(rng.randint(1, max_n), rng) for _ in range(count)]


@pytest.fixture
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def split_labeling(structure, ihat: int) -> list[int]:
    """Labeling of N_k giving ``ihat`` to every a_t, to b_3 and to all of C_2,
    and ``1 - ihat`` to everything else."""
    other = 1 - ihat
    bits = [other] * (3 * (structure.k + 1))
    for v in (*structure.a, structure.b[2], *structure.cliques[1]):
        bits[v] = ihat
    return bits


def edge_list_score(graph: Graph, bits, v: int) -> int:
    """Score computed from the edge list alone."""
    closed = {v} | {b for a, b in graph.edges() if a == v} | {a for a, b in graph.edges() if b == v}
    return sum(bits[u] for u in closed)
