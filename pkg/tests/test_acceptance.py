"""End-to-end acceptance checks.

Each test appends one PASS/FAIL line to the "acceptance criteria" section of the
pytest terminal summary, with the measured wall time.
"""

import itertools
import random
import time
from contextlib import contextmanager

from certilab.adversary import (
    Instance,
    anon_attack_sweep,
    anon_no_instance,
    check_view_coverage,
    id_attack,
    id_block_plan,
    random_labelings,
    verifier_census,
)
from certilab.certification import (
    CertificateAssignment,
    View,
    compute_view,
    count_accepted_labelings,
    enumerate_binary_labelings,
    enumerate_binary_table_verifiers,
    identifier_range,
    run_verifier,
)
from certilab.graph_core import (
    build_complete,
    build_cycle,
    build_necklace,
    build_path,
    canonical_coloring,
    distance2_3colorable_oracle,
    is_distance2_3colorable,
    is_k_colorable,
    is_proper_coloring,
    random_connected_graph,
)
from certilab.schemes import dist2_3color_scheme
from certilab.score_analysis import lemma33_sweep, score, score_matrix

SEED = 0


@contextmanager
def criterion(log, number, title, limit=None):
    """Time the body, enforce ``limit`` seconds, and record one summary line."""
    start = time.perf_counter()
    ok = False
    try:
        yield
        elapsed = time.perf_counter() - start
        assert limit is None or elapsed < limit, f"took {elapsed:.2f}s, limit {limit}s"
        ok = True
    finally:
        elapsed = time.perf_counter() - start
        budget = f" (limit {limit}s)" if limit else ""
        line = f"[{'PASS' if ok else 'FAIL'}] {number}. {title}: {elapsed:.2f}s{budget}"
        log.append(line)
        print(line)


def test_criterion_1_necklace_colorable(acceptance_log):
    with criterion(acceptance_log, 1, "N_k is k-colorable with the canonical witness", 1.0):
        for k in (3, 4, 5):
            graph, s = build_necklace(k)
            colors = is_k_colorable(graph, k)
            assert colors is not None and is_proper_coloring(graph, colors, k)
            priority = [v for t in range(3) for v in (s.a[t], s.b[t])]
            canon = canonical_coloring(colors, priority)
            for t in range(3):
                assert canon[s.a[t]] == canon[s.b[t]] == t + 1
                assert sorted(canon[v] for v in s.cliques[t]) == [c for c in range(1, k + 1) if c != t + 1]


def test_criterion_2_collision_column_exhaustive(acceptance_log):
    with criterion(acceptance_log, 2, "every labeling of N_k has a collision column (k=3,4,5)", 30.0):
        for k in (3, 4, 5):
            report = lemma33_sweep(k)
            assert report.total == 2 ** (3 * (k + 1))
            assert report.successes == report.total
            assert sum(report.histogram.values()) == report.total


def test_criterion_3_anonymous_attack(acceptance_log):
    with criterion(acceptance_log, 3, "anonymous K_4 labeling covered for 4096/4096 labelings of N_3", 10.0):
        result = anon_attack_sweep(3)
        assert result["covered"] == result["total"] == 4096
        assert result["ones_match_column"] == 4096
    with criterion(acceptance_log, "3b", "anonymous K_5 labeling covered for 32768/32768 labelings of N_4"):
        result = anon_attack_sweep(4)
        assert result["covered"] == result["total"] == 32768


def test_criterion_4_census(acceptance_log):
    with criterion(acceptance_log, 4, "no degree-3 table verifier separates N_3 from K_4", 5.0):
        report = verifier_census(3)
        assert report.verifiers == 256
        assert report.separating_verifiers == 0


def test_criterion_5_identifier_attack(acceptance_log):
    with criterion(acceptance_log, 5, "identifier attack succeeds on 1000/1000 seeded trials", 30.0):
        plan = id_block_plan(3)
        assert plan.copies == 17 and plan.clique_range == identifier_range(4) == 204
        rng = random.Random(SEED)
        successes = 0
        for _ in range(1000):
            attack = id_attack(3, random_labelings(3, plan.copies, rng), plan)
            ids = attack.instance.ids.ids
            injective = len(set(ids)) == 4
            in_range = all(1 <= i <= 204 for i in ids)
            covered = check_view_coverage(attack.instance, attack.yes_instances).covered
            successes += injective and in_range and covered
        assert successes == 1000


def test_criterion_6_dist2_completeness(acceptance_log):
    scheme = dist2_3color_scheme()
    with criterion(acceptance_log, 6, "dist2 prover output accepted on paths and cycles up to n=30"):
        graphs = [build_path(n) for n in range(1, 31)]
        graphs += [build_cycle(n) for n in range(3, 31, 3)]
        for g in graphs:
            cert = scheme.certify(g)
            assert cert is not None, g.n
            assert scheme.verify(g, cert).accepted, g.n


def _random_high_degree_graphs(count, max_n, seed):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        g = random_connected_graph(rng.randint(4, max_n), rng)
        if g.max_degree >= 3:
            out.append(g)
    return out


def test_criterion_7_dist2_soundness(acceptance_log):
    verifier = dist2_3color_scheme().verifier
    with criterion(acceptance_log, 7, "dist2 rejects every labeling of all no-instances tested"):
        for n in range(4, 19):
            if n % 3:
                assert count_accepted_labelings(build_cycle(n), verifier) == 0, n
        for g in _random_high_degree_graphs(100, 12, SEED):
            assert count_accepted_labelings(g, verifier) == 0
        # spot check the batched count against direct evaluation on one small no-instance
        c5 = build_cycle(5)
        assert not any(run_verifier(c5, lab, verifier).accepted for lab in enumerate_binary_labelings(c5))


def test_criterion_8_structural_oracle(acceptance_log):
    with criterion(acceptance_log, 8, "structural distance-2 test agrees with G^2 3-coloring"):
        graphs = [build_path(n) for n in range(1, 13)] + [build_cycle(n) for n in range(3, 13)]
        rng = random.Random(SEED)
        graphs += [random_connected_graph(rng.randint(1, 6), rng) for _ in range(200)]
        for g in graphs:
            assert is_distance2_3colorable(g) == distance2_3colorable_oracle(g)


def test_criterion_9_properties(acceptance_log):
    with criterion(acceptance_log, 9, "score, view and indistinguishability properties hold"):
        necklace, _ = build_necklace(3)
        clique = build_complete(4)
        regular = [build_complete(n) for n in range(2, 7)] + [build_cycle(n) for n in range(3, 10)]
        regular.append(necklace)

        # score duality and score-matrix row sums
        for g in regular:
            for lab in enumerate_binary_labelings(g):
                assert score_matrix(g, lab).total() == g.n + 2
                comp = [1 - b for b in lab.bits]
                for v in range(g.n):
                    assert score(g, lab, v) + score(g, comp, v) == g.degree(v) + 1

        # views ignore neighbor order
        for n in range(2, 7):
            g = build_complete(n)
            for rest in itertools.product("01", repeat=n - 1):
                base = compute_view(g, CertificateAssignment(1, ("1", *rest)), 0)
                for perm in set(itertools.permutations(rest)):
                    assert compute_view(g, CertificateAssignment(1, ("1", *perm)), 0) == base
                    assert View(None, "1", perm) == base

        # any verifier accepting (N_3, l) accepts the K_4 labeling built from l
        groups = {}
        for lab in enumerate_binary_labelings(necklace):
            h = anon_no_instance(3, lab)
            keys = frozenset((v.own_label, v.ones) for v in Instance(necklace, lab).views())
            groups.setdefault((keys, h.bits), (lab, h))
        checked = 0
        for verifier in enumerate_binary_table_verifiers(3, exact_degree=True):
            for lab, h in groups.values():
                if run_verifier(necklace, lab, verifier).accepted:
                    assert run_verifier(clique, h, verifier).accepted
            checked += 1
        assert checked == 256
