"""Scores, score matrices and collision columns of binary labelings.

The score of a vertex is the number of 1-labels in its closed neighborhood.
On a k-regular graph the score matrix tallies vertices by (label, score), with
the two entries that can never be realized (label 1 with score 0, label 0 with
score k+1) forced to 1. A collision column is a column with a nonzero entry in
both rows.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from certilab.certification import CertificateAssignment, SweepGuardError
from certilab.graph_core import Graph, build_necklace

Labeling = CertificateAssignment | Sequence[int]

SWEEP_CHUNK = 1 << 14
MAX_LEMMA_SWEEP_K = 5


class NotRegularError(ValueError):
    """Score matrices are only defined for regular graphs."""


def _bits(labeling: Labeling) -> tuple[int, ...]:
    if isinstance(labeling, CertificateAssignment):
        return labeling.bits
    return tuple(labeling)


def score(graph: Graph, labeling: Labeling, v: int) -> int:
    graph.check_vertex(v)
    bits = _bits(labeling)
    return bits[v] + sum(bits[u] for u in graph.adjacency[v])


def scores(graph: Graph, labeling: Labeling) -> list[int]:
    bits = _bits(labeling)
    if len(bits) != graph.n:
        raise ValueError(f"labeling has {len(bits)} entries, graph has {graph.n} vertices")
    return [bits[v] + sum(bits[u] for u in graph.adjacency[v]) for v in range(graph.n)]


@dataclass(frozen=True)
class ScoreMatrix:
    k: int
    rows: tuple[tuple[int, ...], tuple[int, ...]]

    def __post_init__(self) -> None:
        if any(len(r) != self.k + 2 for r in self.rows) or len(self.rows) != 2:
            raise ValueError("score matrix must be 2 x (k+2)")
        if self.rows[1][0] != 1 or self.rows[0][self.k + 1] != 1:
            raise ValueError("forced entries S[1][0] and S[0][k+1] must equal 1")

    def __getitem__(self, label: int) -> tuple[int, ...]:
        return self.rows[label]

    def total(self) -> int:
        return sum(self.rows[0]) + sum(self.rows[1])

    def to_list(self) -> list[list[int]]:
        return [list(r) for r in self.rows]


def _regular_degree(graph: Graph) -> int:
    k = graph.regular_degree()
    if k is None:
        raise NotRegularError("score matrix requires a regular graph")
    return k


def score_matrix(graph: Graph, labeling: Labeling) -> ScoreMatrix:
    k = _regular_degree(graph)
    bits = _bits(labeling)
    rows = [[0] * (k + 2) for _ in range(2)]
    for v, s in enumerate(scores(graph, bits)):
        rows[bits[v]][s] += 1
    rows[1][0] = 1
    rows[0][k + 1] = 1
    return ScoreMatrix(k, (tuple(rows[0]), tuple(rows[1])))


@dataclass(frozen=True)
class CollisionColumn:
    """Column ``j`` where both rows are nonzero.

    Witnesses are vertex indices realizing the column, filled in only when the
    underlying graph and labeling were supplied. In the boundary columns only
    one witness exists: a 0-labeled vertex whose whole neighborhood is 0
    (``j == 0``), or a 1-labeled vertex whose whole neighborhood is 1
    (``j == k+1``).
    """

    j: int
    zero_witness: int | None = None
    one_witness: int | None = None


def collision_columns(matrix: ScoreMatrix) -> list[int]:
    return [j for j in range(matrix.k + 2) if matrix[0][j] * matrix[1][j] != 0]


def witness(graph: Graph, labeling: Labeling, label: int, target: int) -> int | None:
    """Lowest-index vertex with the given label and score, if any."""
    bits = _bits(labeling)
    for v, s in enumerate(scores(graph, bits)):
        if bits[v] == label and s == target:
            return v
    return None


def find_collision_column(
    matrix: ScoreMatrix,
    graph: Graph | None = None,
    labeling: Labeling | None = None,
    column: int | None = None,
) -> CollisionColumn | None:
    """Smallest collision column, or ``column`` if given and it is a collision column.

    Pass ``graph`` and ``labeling`` to recover witnesses (lowest vertex index
    per label/score class).
    """
    candidates = collision_columns(matrix)
    if column is not None:
        candidates = [j for j in candidates if j == column]
    if not candidates:
        return None
    j = candidates[0]
    if graph is None or labeling is None:
        return CollisionColumn(j)
    zero = witness(graph, labeling, 0, j) if j < matrix.k + 1 else None
    one = witness(graph, labeling, 1, j) if j > 0 else None
    return CollisionColumn(j, zero, one)


# ---------------------------------------------------------------------------
# Batched evaluation and the exhaustive sweep over labelings of N_k
# ---------------------------------------------------------------------------


def labelings_block(n: int, start: int, stop: int) -> np.ndarray:
    """Rows are labelings ``start..stop-1`` in lexicographic order (vertex 0 most significant)."""
    idx = np.arange(start, stop, dtype=np.int64)
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    return ((idx[:, None] >> shifts) & 1).astype(np.int8)


def closed_adjacency(graph: Graph) -> np.ndarray:
    mat = np.eye(graph.n, dtype=np.int16)
    for u, v in graph.edges():
        mat[u, v] = mat[v, u] = 1
    return mat


def score_matrices_batch(graph: Graph, bits: np.ndarray) -> np.ndarray:
    """Score matrices for many labelings at once; shape ``(L, 2, k+2)``."""
    k = _regular_degree(graph)
    width = k + 2
    sc = bits.astype(np.int16) @ closed_adjacency(graph)
    cell = bits.astype(np.int64) * width + sc
    offsets = (np.arange(len(bits), dtype=np.int64) * 2 * width)[:, None]
    counts = np.bincount((cell + offsets).ravel(), minlength=len(bits) * 2 * width)
    out = counts.reshape(len(bits), 2, width)
    out[:, 1, 0] = 1
    out[:, 0, k + 1] = 1
    return out


def first_collision_batch(matrices: np.ndarray) -> np.ndarray:
    """Smallest collision column per matrix, or -1 where none exists."""
    hit = (matrices[:, 0, :] > 0) & (matrices[:, 1, :] > 0)
    return np.where(hit.any(axis=1), hit.argmax(axis=1), -1)


@dataclass(frozen=True)
class Lemma33Report:
    k: int
    total: int
    successes: int
    histogram: dict[int, int]

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "total": self.total,
            "successes": self.successes,
            "histogram": {str(j): c for j, c in sorted(self.histogram.items())},
        }


def _sweep_chunk(args: tuple[int, int, int]) -> np.ndarray:
    k, start, stop = args
    graph, _ = build_necklace(k)
    cols = first_collision_batch(score_matrices_batch(graph, labelings_block(graph.n, start, stop)))
    return np.bincount(cols + 1, minlength=k + 3)


def lemma33_sweep(k: int, workers: int = 1) -> Lemma33Report:
    """Check every binary labeling of N_k for a collision column.

    The histogram maps each smallest collision column to its labeling count.
    """
    if not 3 <= k <= MAX_LEMMA_SWEEP_K:
        raise SweepGuardError(f"collision-column sweep needs 3 <= k <= {MAX_LEMMA_SWEEP_K}")
    n = 3 * (k + 1)
    total = 2**n
    jobs = [(k, s, min(s + SWEEP_CHUNK, total)) for s in range(0, total, SWEEP_CHUNK)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_sweep_chunk, jobs))
    else:
        parts = [_sweep_chunk(job) for job in jobs]
    counts = np.sum(parts, axis=0)
    histogram = {j: int(counts[j + 1]) for j in range(k + 2) if counts[j + 1]}
    return Lemma33Report(k, total, total - int(counts[0]), histogram)
