"""Indistinguishability attacks on one-bit certification of k-colorability.

Given accepted labelings of the k-colorable necklace graph N_k, these routines
build a labeling (and, in the identifier model, identifiers) of the complete
graph K_{k+1} in which every vertex sees a view that already occurs in one of
the yes-instances. Any verifier accepting the yes-instances must then accept
K_{k+1}, which is not k-colorable.
"""

from __future__ import annotations

import json
import random
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from certilab.certification import (
    CertificateAssignment,
    CertificationError,
    IdAssignment,
    SweepGuardError,
    View,
    all_views,
    identifier_range,
    stated_identifier_range,
    table_entries,
)
from certilab.graph_core import Graph, build_complete, build_necklace
from certilab.score_analysis import (
    Labeling,
    find_collision_column,
    labelings_block,
    score_matrix,
    witness,
)

MAX_CENSUS_K = 3


@dataclass(frozen=True)
class Instance:
    graph: Graph
    labeling: CertificateAssignment
    ids: IdAssignment | None = None

    def __post_init__(self) -> None:
        if len(self.labeling) != self.graph.n:
            raise CertificationError("labeling must cover every vertex")
        if self.ids is not None and len(self.ids) != self.graph.n:
            raise CertificationError("ids must cover every vertex")

    def views(self) -> list[View]:
        return all_views(self.graph, self.labeling, self.ids)

    def to_dict(self) -> dict:
        return {
            "n": self.graph.n,
            "edges": [list(e) for e in self.graph.edges()],
            "width": self.labeling.width,
            "labels": list(self.labeling.labels),
            "ids": None if self.ids is None else list(self.ids.ids),
            "id_range": None if self.ids is None else self.ids.range_bound,
        }

    @classmethod
    def from_dict(cls, data: dict) -> Instance:
        graph = Graph.from_edges(data["n"], [tuple(e) for e in data["edges"]])
        labels = CertificateAssignment(data["width"], tuple(data["labels"]))
        ids = None
        if data.get("ids") is not None:
            bound = data.get("id_range") or identifier_range(graph.n)
            ids = IdAssignment(tuple(data["ids"]), bound)
        return cls(graph, labels, ids)


def read_instance(path: str | Path) -> Instance:
    return Instance.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def write_instance(instance: Instance, path: str | Path) -> None:
    Path(path).write_text(json.dumps(instance.to_dict(), sort_keys=True) + "\n", encoding="utf-8")


# ---------------------------------------------------------------------------
# View coverage
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class VertexMatch:
    vertex: int
    view: View
    instance: int | None = None
    match: int | None = None

    @property
    def covered(self) -> bool:
        return self.instance is not None

    def to_dict(self) -> dict:
        out = {"vertex": self.vertex, "covered": self.covered}
        if self.covered:
            out.update(instance=self.instance, match=self.match)
        else:
            out["uncovered_view"] = self.view.to_dict()
        return out


@dataclass(frozen=True)
class CoverageReport:
    matches: tuple[VertexMatch, ...]

    @property
    def covered(self) -> bool:
        return all(m.covered for m in self.matches)

    @property
    def uncovered(self) -> list[VertexMatch]:
        return [m for m in self.matches if not m.covered]

    def to_dict(self) -> dict:
        return {"covered": self.covered, "vertices": [m.to_dict() for m in self.matches]}


def check_view_coverage(h_instance: Instance, yes_instances: Sequence[Instance]) -> CoverageReport:
    """Match every view of ``h_instance`` to the first equal view among ``yes_instances``.

    Matches report the yes-instance index and vertex (lowest indices first).
    """
    width = h_instance.labeling.width
    with_ids = h_instance.ids is not None
    for i, inst in enumerate(yes_instances):
        if inst.labeling.width != width:
            raise CertificationError(f"yes-instance {i} has width {inst.labeling.width}, H has {width}")
        if (inst.ids is not None) != with_ids:
            raise CertificationError(f"yes-instance {i} does not match H's identifier mode")
    seen: dict[View, tuple[int, int]] = {}
    for i, inst in enumerate(yes_instances):
        for v, view in enumerate(inst.views()):
            seen.setdefault(view, (i, v))
    matches = []
    for h, view in enumerate(h_instance.views()):
        hit = seen.get(view)
        matches.append(VertexMatch(h, view, *hit) if hit else VertexMatch(h, view))
    return CoverageReport(tuple(matches))


# ---------------------------------------------------------------------------
# Anonymous model
# ---------------------------------------------------------------------------


def clique_labeling(k: int, ones: int) -> CertificateAssignment:
    """Labeling of K_{k+1}: the first ``ones`` vertices get 1, the rest 0."""
    return CertificateAssignment.from_bits([1 if t < ones else 0 for t in range(k + 1)])


def anon_no_instance(k: int, labeling: Labeling, column: int | None = None) -> CertificateAssignment:
    """Label K_{k+1} so all its views occur in (N_k, labeling).

    Uses the smallest collision column ``j`` of the labeling (or ``column`` when
    given) and puts label 1 on exactly ``j`` vertices.
    """
    graph, _ = build_necklace(k)
    found = find_collision_column(score_matrix(graph, labeling), column=column)
    if found is None:
        if column is not None:
            raise ValueError(f"column {column} is not a collision column of this labeling")
        raise AssertionError("labeling of N_k without collision column")
    return clique_labeling(k, found.j)


def _anon_chunk(args: tuple[int, int, int]) -> tuple[int, int]:
    k, start, stop = args
    graph, _ = build_necklace(k)
    clique = build_complete(k + 1)
    covered = consistent = 0
    for row in labelings_block(graph.n, start, stop):
        lab = CertificateAssignment.from_bits(row.tolist())
        col = find_collision_column(score_matrix(graph, lab))
        h = anon_no_instance(k, lab)
        report = check_view_coverage(Instance(clique, h), [Instance(graph, lab)])
        covered += report.covered
        consistent += sum(h.bits) == col.j
    return covered, consistent


def anon_attack_sweep(k: int, workers: int = 1, chunk: int = 1 << 12) -> dict:
    """Run the anonymous construction on every labeling of N_k and check coverage."""
    if not 3 <= k <= 5:
        raise SweepGuardError("anonymous attack sweep needs 3 <= k <= 5")
    total = 2 ** (3 * (k + 1))
    jobs = [(k, s, min(s + chunk, total)) for s in range(0, total, chunk)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_anon_chunk, jobs))
    else:
        parts = [_anon_chunk(job) for job in jobs]
    return {
        "k": k,
        "total": total,
        "covered": sum(p[0] for p in parts),
        "ones_match_column": sum(p[1] for p in parts),
    }


# ---------------------------------------------------------------------------
# Identifier model
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IdBlockPlan:
    """Disjoint identifier blocks for K = (k+1)^2 + 1 copies of N_k.

    Copy ``i`` (0-based here) uses identifiers ``i*(3k+3)+1 .. (i+1)*(3k+3)``.
    """

    k: int
    copies: int
    block: int
    intervals: tuple[tuple[int, int], ...] = field(repr=False)

    @property
    def copy_range(self) -> int:
        return identifier_range(self.block)

    @property
    def clique_range(self) -> int:
        return identifier_range(self.k + 1)

    def copy_ids(self, i: int) -> IdAssignment:
        lo, _ = self.intervals[i]
        return IdAssignment(tuple(range(lo, lo + self.block)), self.copy_range)

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "copies": self.copies,
            "block": self.block,
            "max_id": self.intervals[-1][1],
            "id_range_copy": self.copy_range,
            "id_range_clique": self.clique_range,
            "stated_id_range_clique": stated_identifier_range(self.k + 1),
        }


def id_block_plan(k: int) -> IdBlockPlan:
    if k < 3:
        raise ValueError("k must be >= 3")
    copies = (k + 1) ** 2 + 1
    block = 3 * k + 3
    intervals = tuple((i * block + 1, (i + 1) * block) for i in range(copies))
    plan = IdBlockPlan(k, copies, block, intervals)
    if intervals[-1][1] > plan.clique_range or intervals[-1][1] > plan.copy_range:
        raise AssertionError("identifier blocks exceed the identifier range")
    return plan


def id_yes_instances(plan: IdBlockPlan, labelings: Sequence[Labeling]) -> list[Instance]:
    if len(labelings) != plan.copies:
        raise ValueError(f"expected {plan.copies} labelings, got {len(labelings)}")
    graph, _ = build_necklace(plan.k)
    out = []
    for i, lab in enumerate(labelings):
        if not isinstance(lab, CertificateAssignment):
            lab = CertificateAssignment.from_bits(lab)
        out.append(Instance(graph, lab, plan.copy_ids(i)))
    return out


@dataclass(frozen=True)
class IdAttack:
    """Result of the identifier-model construction.

    ``witnesses[t]`` is the (copy, vertex) whose view vertex ``t`` of K_{k+1} copies.
    """

    instance: Instance
    column: int
    columns: tuple[int, ...]
    lambda0: tuple[int, ...]
    witnesses: tuple[tuple[int, int], ...]
    yes_instances: tuple[Instance, ...] = field(repr=False)


def id_attack(
    k: int,
    labelings: Sequence[Labeling],
    plan: IdBlockPlan | None = None,
    column: int | None = None,
) -> IdAttack:
    """Build a labeled, identified K_{k+1} whose views all occur in the identified copies.

    Each copy has a smallest collision column. With (k+1)^2+1 copies spread over
    k+2 columns, some column is the smallest one of at least k+1 copies; the
    smallest such column ``j`` is used unless ``column`` forces another. The
    k+1 lowest-indexed copies in which ``j`` collides each donate one witness:
    label 1 for the first ``j`` vertices of K_{k+1}, label 0 for the rest.
    """
    plan = plan or id_block_plan(k)
    yes = id_yes_instances(plan, labelings)
    graph = yes[0].graph
    matrices = [score_matrix(graph, inst.labeling) for inst in yes]
    columns = []
    for matrix in matrices:
        found = find_collision_column(matrix)
        if found is None:
            raise AssertionError("labeling of N_k without collision column")
        columns.append(found.j)
    if column is None:
        counts = Counter(columns)
        shared = [j for j in range(k + 2) if counts[j] >= k + 1]
        if not shared:
            raise AssertionError("pigeonhole failed: no column shared by k+1 copies")
        j = shared[0]
    else:
        j = column
    lambda0 = tuple(
        i for i, m in enumerate(matrices) if find_collision_column(m, column=j) is not None
    )
    if len(lambda0) < k + 1:
        raise ValueError(f"column {j} collides in only {len(lambda0)} copies, need {k + 1}")
    witnesses = []
    for t, i in enumerate(lambda0[: k + 1]):
        label = 1 if t < j else 0
        v = witness(graph, yes[i].labeling, label, j)
        if v is None:
            raise AssertionError(f"copy {i} has no witness with label {label} and score {j}")
        witnesses.append((i, v))
    ids = IdAssignment(tuple(yes[i].ids.ids[v] for i, v in witnesses), plan.clique_range)
    h = Instance(build_complete(k + 1), clique_labeling(k, j), ids)
    return IdAttack(h, j, tuple(columns), lambda0, tuple(witnesses), tuple(yes))


def id_no_instance(
    k: int, labelings: Sequence[Labeling], plan: IdBlockPlan | None = None, column: int | None = None
) -> Instance:
    return id_attack(k, labelings, plan, column).instance


def random_labelings(k: int, copies: int, rng: random.Random) -> list[CertificateAssignment]:
    n = 3 * (k + 1)
    return [
        CertificateAssignment.from_bits([(x >> (n - 1 - v)) & 1 for v in range(n)])
        for x in (rng.getrandbits(n) for _ in range(copies))
    ]


def id_attack_sweep(k: int, trials: int, seed: int) -> dict:
    """Run the identifier construction on ``trials`` seeded random labeling tuples."""
    plan = id_block_plan(k)
    rng = random.Random(seed)
    successes = 0
    max_id = 0
    histogram: Counter[int] = Counter()
    for _ in range(trials):
        attack = id_attack(k, random_labelings(k, plan.copies, rng), plan)
        ids = attack.instance.ids.ids
        ok = (
            len(set(ids)) == len(ids)
            and max(ids) <= plan.clique_range
            and check_view_coverage(attack.instance, attack.yes_instances).covered
        )
        successes += ok
        max_id = max(max_id, max(ids))
        histogram[attack.column] += 1
    return {
        "k": k,
        "seed": seed,
        "trials": trials,
        "successes": successes,
        "max_id_used": max_id,
        "plan": plan.to_dict(),
        "column_histogram": {str(j): c for j, c in sorted(histogram.items())},
    }


# ---------------------------------------------------------------------------
# Census of all degree-k anonymous binary table verifiers
# ---------------------------------------------------------------------------


def view_masks(graph: Graph) -> set[int]:
    """Distinct sets of table entries (as bitmasks) used by each labeling of a k-regular graph."""
    k = graph.regular_degree()
    if k is None:
        raise ValueError("census graphs must be regular")
    masks: set[int] = set()
    total = 2**graph.n
    adj = np.eye(graph.n, dtype=np.int16)
    for u, v in graph.edges():
        adj[u, v] = adj[v, u] = 1
    for start in range(0, total, 1 << 14):
        bits = labelings_block(graph.n, start, min(total, start + (1 << 14))).astype(np.int16)
        ones = bits @ adj - bits
        entry = bits * (k + 1) + ones
        mask = np.bitwise_or.reduce(np.left_shift(1, entry.astype(np.int64)), axis=1)
        masks.update(int(m) for m in np.unique(mask))
    return masks


@dataclass(frozen=True)
class CensusReport:
    k: int
    verifiers: int
    accept_some_yes: int
    reject_all_no: int
    separating_verifiers: int
    separating_indices: tuple[int, ...] = ()

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "verifiers": self.verifiers,
            "accept_some_yes": self.accept_some_yes,
            "reject_all_no": self.reject_all_no,
            "separating_verifiers": self.separating_verifiers,
            "separating_indices": list(self.separating_indices),
        }


def verifier_census(k: int = 3, max_k: int = MAX_CENSUS_K) -> CensusReport:
    """Count degree-k table verifiers that accept some labeling of N_k yet reject
    every labeling of K_{k+1}.

    A verifier (table index ``m``) globally accepts a labeling iff every table
    entry that labeling uses is set in ``m``.
    """
    if not 3 <= k <= max_k:
        raise SweepGuardError(f"census needs 3 <= k <= {max_k}")
    size = len(table_entries(k, exact_degree=True))
    yes_masks = view_masks(build_necklace(k)[0])
    no_masks = view_masks(build_complete(k + 1))
    accept_yes = reject_no = 0
    separating = []
    for m in range(2**size):
        a = any(mask & ~m == 0 for mask in yes_masks)
        b = all(mask & ~m != 0 for mask in no_masks)
        accept_yes += a
        reject_no += b
        if a and b:
            separating.append(m)
    return CensusReport(k, 2**size, accept_yes, reject_no, len(separating), tuple(separating))
