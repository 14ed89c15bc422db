"""Graphs used by the certification experiments, plus brute-force coloring oracles.

All graphs are simple, undirected and connected. Vertices are ``0..n-1``.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

DEFAULT_BUDGET = 2_000_000


class GraphError(ValueError):
    """Raised for invalid graph parameters or malformed graph data."""


class SearchBudgetExceeded(RuntimeError):
    """The backtracking search visited more nodes than its budget allows."""


@dataclass(frozen=True)
class Graph:
    n: int
    adjacency: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise GraphError("a graph needs at least one vertex")
        if len(self.adjacency) != self.n:
            raise GraphError("adjacency must list one neighbor set per vertex")
        for v, nbrs in enumerate(self.adjacency):
            if list(nbrs) != sorted(set(nbrs)):
                raise GraphError(f"neighbors of {v} must be sorted and distinct")
            for u in nbrs:
                if not 0 <= u < self.n:
                    raise GraphError(f"edge {v}-{u} leaves the vertex range")
                if u == v:
                    raise GraphError(f"self-loop at {v}")
                if v not in self.adjacency[u]:
                    raise GraphError(f"adjacency is not symmetric at {v}-{u}")
        if not _is_connected(self.adjacency):
            raise GraphError("graph is not connected")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> Graph:
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge {u}-{v} leaves the vertex range 0..{n - 1}")
            if u == v:
                raise GraphError(f"self-loop at {u}")
            if v in nbrs[u]:
                raise GraphError(f"duplicate edge {min(u, v)}-{max(u, v)}")
            nbrs[u].add(v)
            nbrs[v].add(u)
        return cls(n, tuple(tuple(sorted(s)) for s in nbrs))

    def neighbors(self, v: int) -> tuple[int, ...]:
        self.check_vertex(v)
        return self.adjacency[v]

    def degree(self, v: int) -> int:
        return len(self.neighbors(v))

    def check_vertex(self, v: int) -> None:
        if not (isinstance(v, int) and 0 <= v < self.n):
            raise IndexError(f"vertex {v!r} not in 0..{self.n - 1}")

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in self.adjacency[u] if u < v]

    @property
    def num_edges(self) -> int:
        return sum(len(a) for a in self.adjacency) // 2

    @property
    def max_degree(self) -> int:
        return max(len(a) for a in self.adjacency)

    def regular_degree(self) -> int | None:
        """Common degree of all vertices, or ``None`` if the graph is not regular."""
        degrees = {len(a) for a in self.adjacency}
        return degrees.pop() if len(degrees) == 1 else None


def _is_connected(adjacency: Sequence[Sequence[int]]) -> bool:
    seen = {0}
    queue = deque([0])
    while queue:
        v = queue.popleft()
        for u in adjacency[v]:
            if u not in seen:
                seen.add(u)
                queue.append(u)
    return len(seen) == len(adjacency)


# ---------------------------------------------------------------------------
# Constructions
# ---------------------------------------------------------------------------


def build_complete(n: int) -> Graph:
    if n < 1:
        raise GraphError("complete graph needs n >= 1")
    return Graph.from_edges(n, ((u, v) for u in range(n) for v in range(u + 1, n)))


def build_path(n: int) -> Graph:
    if n < 1:
        raise GraphError("path needs n >= 1")
    return Graph.from_edges(n, ((i, i + 1) for i in range(n - 1)))


def build_cycle(n: int) -> Graph:
    if n < 3:
        raise GraphError("cycle needs n >= 3")
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)] + [(0, n - 1)])


def build_star(leaves: int) -> Graph:
    if leaves < 1:
        raise GraphError("star needs at least one leaf")
    return Graph.from_edges(leaves + 1, ((0, i) for i in range(1, leaves + 1)))


@dataclass(frozen=True)
class NecklaceStructure:
    """Vertex roles of the necklace graph.

    Copy ``t`` (1-based) occupies indices ``[(t-1)(k+1), t(k+1))``: ``a_t`` first,
    ``b_t`` second, then the ``k-1`` clique vertices ``C_t``.
    """

    k: int
    a: tuple[int, int, int]
    b: tuple[int, int, int]
    cliques: tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]

    def roles(self) -> dict[int, str]:
        out = {}
        for t in range(3):
            out[self.a[t]] = f"a{t + 1}"
            out[self.b[t]] = f"b{t + 1}"
            for v in self.cliques[t]:
                out[v] = f"C{t + 1}"
        return out


def build_necklace(k: int) -> tuple[Graph, NecklaceStructure]:
    """Three copies of K_{k+1}, each missing the edge a_t b_t, closed into a ring
    by the edges b_1a_2, b_2a_3, b_3a_1. The result is k-regular on 3(k+1) vertices."""
    if k < 3:
        raise GraphError("necklace graph needs k >= 3")
    size = k + 1
    a, b, cliques = [], [], []
    edges = []
    for t in range(3):
        base = t * size
        block = range(base, base + size)
        a.append(base)
        b.append(base + 1)
        cliques.append(tuple(range(base + 2, base + size)))
        edges.extend((u, v) for u in block for v in block if u < v and (u, v) != (base, base + 1))
    for t in range(3):
        edges.append((b[t], a[(t + 1) % 3]))
    graph = Graph.from_edges(3 * size, edges)
    return graph, NecklaceStructure(k, tuple(a), tuple(b), tuple(cliques))


def random_connected_graph(n: int, rng: random.Random, extra_edge_prob: float = 0.3) -> Graph:
    """Random spanning tree on ``n`` vertices plus independent extra edges."""
    if n < 1:
        raise GraphError("n must be >= 1")
    order = list(range(n))
    rng.shuffle(order)
    edges = {tuple(sorted((order[i], order[rng.randrange(i)]))) for i in range(1, n)}
    for u in range(n):
        for v in range(u + 1, n):
            if (u, v) not in edges and rng.random() < extra_edge_prob:
                edges.add((u, v))
    return Graph.from_edges(n, sorted(edges))


def square_graph(graph: Graph) -> Graph:
    """Graph on the same vertices joining every pair at distance 1 or 2."""
    edges = set()
    for v in range(graph.n):
        for u in graph.adjacency[v]:
            edges.add((min(u, v), max(u, v)))
            for w in graph.adjacency[u]:
                if w != v:
                    edges.add((min(w, v), max(w, v)))
    return Graph.from_edges(graph.n, sorted(edges))


# ---------------------------------------------------------------------------
# Coloring oracles
# ---------------------------------------------------------------------------

ColoringWitness = tuple[int, ...]


def is_proper_coloring(graph: Graph, colors: Sequence[int], k: int) -> bool:
    if len(colors) != graph.n or any(not 1 <= c <= k for c in colors):
        return False
    return all(colors[u] != colors[v] for u, v in graph.edges())


def degeneracy_order(graph: Graph) -> list[int]:
    """Vertices ordered so each has few earlier neighbors (reverse min-degree peeling)."""
    degree = [len(a) for a in graph.adjacency]
    removed = [False] * graph.n
    peel = []
    for _ in range(graph.n):
        v = min((d, v) for v, d in enumerate(degree) if not removed[v])[1]
        removed[v] = True
        peel.append(v)
        for u in graph.adjacency[v]:
            if not removed[u]:
                degree[u] -= 1
    return peel[::-1]


def is_k_colorable(graph: Graph, k: int, budget: int = DEFAULT_BUDGET) -> ColoringWitness | None:
    """Return a proper coloring with colors ``1..k``, or ``None`` if none exists.

    Backtracking over a degeneracy order; a new color is only opened once all
    smaller ones are in use, which removes color-permutation symmetry. Raises
    :class:`SearchBudgetExceeded` after ``budget`` search nodes.
    """
    if k < 1:
        raise ValueError("k must be positive")
    order = degeneracy_order(graph)
    colors = [0] * graph.n
    nodes = 0

    def extend(pos: int, used: int) -> bool:
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise SearchBudgetExceeded(f"coloring search exceeded {budget} nodes")
        if pos == graph.n:
            return True
        v = order[pos]
        taken = {colors[u] for u in graph.adjacency[v]}
        for c in range(1, min(used + 1, k) + 1):
            if c in taken:
                continue
            colors[v] = c
            if extend(pos + 1, max(used, c)):
                return True
        colors[v] = 0
        return False

    return tuple(colors) if extend(0, 0) else None


def canonical_coloring(colors: Sequence[int], priority: Sequence[int] = ()) -> ColoringWitness:
    """Rename colors by first appearance, visiting ``priority`` vertices first."""
    first = set(priority)
    visit = list(priority) + [v for v in range(len(colors)) if v not in first]
    rename: dict[int, int] = {}
    for v in visit:
        rename.setdefault(colors[v], len(rename) + 1)
    return tuple(rename[c] for c in colors)


def necklace_coloring(structure: NecklaceStructure) -> ColoringWitness:
    """The explicit k-coloring of N_k: a_t and b_t get color t, C_t the other k-1 colors."""
    k = structure.k
    colors = [0] * (3 * (k + 1))
    for t in range(3):
        colors[structure.a[t]] = colors[structure.b[t]] = t + 1
        rest = [c for c in range(1, k + 1) if c != t + 1]
        for v, c in zip(structure.cliques[t], rest):
            colors[v] = c
    return tuple(colors)


def is_distance2_3colorable(graph: Graph) -> bool:
    """True iff the graph is a path or a cycle of length divisible by 3."""
    if graph.max_degree > 2:
        return False
    if graph.num_edges == graph.n - 1:
        return True
    return graph.n % 3 == 0


def distance2_3colorable_oracle(graph: Graph, budget: int = DEFAULT_BUDGET) -> bool:
    """Brute force: 3-color the square graph."""
    return is_k_colorable(square_graph(graph), 3, budget=budget) is not None


# ---------------------------------------------------------------------------
# Text format: "n m" header, then m lines "u v" with u < v
# ---------------------------------------------------------------------------


def format_graph(graph: Graph) -> str:
    lines = [f"{graph.n} {graph.num_edges}"]
    lines.extend(f"{u} {v}" for u, v in graph.edges())
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> Graph:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise GraphError("empty graph file")
    try:
        n, m = (int(x) for x in lines[0].split())
    except ValueError:
        raise GraphError(f"bad header line {lines[0]!r}, expected 'n m'") from None
    if len(lines) - 1 != m:
        raise GraphError(f"header announces {m} edges, found {len(lines) - 1}")
    edges = []
    for ln in lines[1:]:
        try:
            u, v = (int(x) for x in ln.split())
        except ValueError:
            raise GraphError(f"bad edge line {ln!r}") from None
        if not 0 <= u < v < n:
            raise GraphError(f"edge line {ln!r} must satisfy 0 <= u < v < {n}")
        edges.append((u, v))
    return Graph.from_edges(n, edges)


def read_graph(path: str | Path) -> Graph:
    return parse_graph(Path(path).read_text(encoding="ascii"))


def write_graph(graph: Graph, path: str | Path) -> None:
    Path(path).write_text(format_graph(graph), encoding="ascii")
