import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from certilab.certification import (
    CertificateAssignment,
    CertificationError,
    IdAssignment,
    SweepGuardError,
    TableVerifier,
    VerifierDomainError,
    View,
    compute_view,
    enumerate_binary_labelings,
    enumerate_binary_table_verifiers,
    format_ids,
    format_labeling,
    identifier_range,
    parse_ids,
    parse_labeling,
    run_verifier,
    table_entries,
)
from certilab.graph_core import build_complete, build_cycle, build_necklace, build_path, build_star
from certilab.schemes import dist2_3color_scheme

bits = CertificateAssignment.from_bits


def test_views_on_k4():
    k4 = build_complete(4)
    lab = bits([1, 0, 0, 0])
    assert compute_view(k4, lab, 0) == View(None, "1", ("0", "0", "0"))
    assert compute_view(k4, lab, 1) == View(None, "0", ("0", "0", "1"))


def test_view_on_path_middle():
    assert compute_view(build_path(3), bits([1, 0, 0]), 1) == View(None, "0", ("0", "1"))


def test_view_with_ids_hides_neighbor_ids():
    g = build_path(3)
    ids = IdAssignment((7, 3, 5), identifier_range(3))
    view = compute_view(g, bits([1, 0, 0]), 1, ids)
    assert view.own_id == 3 and view.neighbor_labels == ("0", "1")


def test_view_vertex_out_of_range():
    with pytest.raises(IndexError):
        compute_view(build_path(3), bits([0, 0, 0]), 3)


@given(st.permutations(["0", "1", "1", "0", "1"]))
def test_view_ignores_neighbor_order(order):
    assert View(None, "1", tuple(order)) == View(None, "1", ("1", "0", "1", "1", "0"))


def test_dist2_verifier_examples():
    verifier = dist2_3color_scheme().verifier
    assert run_verifier(build_path(4), bits([1, 0, 0, 1]), verifier).accepted
    star = build_star(3)
    for lab in enumerate_binary_labelings(star):
        verdict = run_verifier(star, lab, verifier)
        assert not verdict.decisions[0]


def test_table_reject_on_triangle():
    table = {key: key != (0, 2, 0) for key in table_entries(2)}
    verifier = TableVerifier.from_table(2, table)
    verdict = run_verifier(build_cycle(3), bits([0, 0, 0]), verifier)
    assert not verdict.accepted and verdict.rejecting == [0, 1, 2]


def test_table_domain_error():
    verifier = TableVerifier(2, 2**12 - 1)
    with pytest.raises(VerifierDomainError):
        run_verifier(build_complete(4), bits([0, 0, 0, 0]), verifier)
    exact = TableVerifier(3, 255, exact_degree=True)
    with pytest.raises(VerifierDomainError):
        run_verifier(build_path(3), bits([0, 0, 0]), exact)


def test_table_verifier_counts():
    assert len(list(enumerate_binary_table_verifiers(0))) == 4
    assert len(list(enumerate_binary_table_verifiers(1))) == 64
    assert len(list(enumerate_binary_table_verifiers(3, exact_degree=True))) == 256
    assert len(table_entries(3)) == 2 + 4 + 6 + 8


def test_table_verifiers_are_distinct_and_ordered():
    tables = [tuple(sorted(v.table.items())) for v in enumerate_binary_table_verifiers(1)]
    assert len(set(tables)) == 64
    assert [v.index for v in enumerate_binary_table_verifiers(1)] == list(range(64))


def test_table_round_trip():
    v = TableVerifier(2, 1234)
    assert TableVerifier.from_table(2, v.table) == v


def test_table_guard():
    with pytest.raises(SweepGuardError):
        next(enumerate_binary_table_verifiers(4))  # 30 entries


def test_labeling_enumeration():
    assert [lab.bits for lab in enumerate_binary_labelings(1)] == [(0,), (1,)]
    assert len(list(enumerate_binary_labelings(build_complete(4)))) == 16
    labs = [lab.bits for lab in enumerate_binary_labelings(build_necklace(3)[0])]
    assert len(labs) == len(set(labs)) == 4096
    assert labs == sorted(labs)
    with pytest.raises(SweepGuardError):
        next(enumerate_binary_labelings(25))


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_anonymous_verdict_invariant_under_relabeling_of_clique(n):
    g = build_complete(n)
    for verifier in list(enumerate_binary_table_verifiers(n - 1, exact_degree=True))[::7]:
        for ones in range(n + 1):
            base = run_verifier(g, bits([1] * ones + [0] * (n - ones)), verifier).accepted
            for perm in set(itertools.permutations([1] * ones + [0] * (n - ones))):
                assert run_verifier(g, bits(perm), verifier).accepted == base


def test_ids_do_not_change_table_verdict():
    g, _ = build_necklace(3)
    ids = IdAssignment(tuple(range(101, 113)), identifier_range(12))
    for verifier in list(enumerate_binary_table_verifiers(3, exact_degree=True))[::5]:
        for lab in list(enumerate_binary_labelings(g))[::97]:
            assert run_verifier(g, lab, verifier, ids) == run_verifier(g, lab, verifier)


def test_certificate_validation():
    with pytest.raises(CertificationError):
        CertificateAssignment(2, ("01", "1"))
    with pytest.raises(CertificationError):
        CertificateAssignment(0, ())
    with pytest.raises(CertificationError):
        bits([0, 2])
    with pytest.raises(CertificationError):
        run_verifier(build_path(3), bits([0, 1]), lambda v: True)


def test_id_validation():
    with pytest.raises(CertificationError):
        IdAssignment((1, 1), 10)
    with pytest.raises(CertificationError):
        IdAssignment((1, 11), 10)
    with pytest.raises(CertificationError):
        IdAssignment((0, 2), 10)


def test_labeling_file_formats():
    assert parse_labeling("1001\n") == bits([1, 0, 0, 1])
    assert format_labeling(bits([1, 0, 0, 1])) == "1001\n"
    wide = CertificateAssignment.from_values([0, 1, 2], 2)
    assert parse_labeling(format_labeling(wide)) == wide
    assert parse_labeling("000110", width=2) == wide
    with pytest.raises(CertificationError):
        parse_labeling("10a1\n")
    with pytest.raises(CertificationError):
        parse_labeling("101\n", width=2)
    with pytest.raises(CertificationError):
        parse_labeling("01 1\n")


def test_id_file_format():
    ids = IdAssignment((5, 2, 9), identifier_range(3))
    assert format_ids(ids) == "0 5\n1 2\n2 9\n"
    assert parse_ids(format_ids(ids), 3) == ids
    with pytest.raises(CertificationError):
        parse_ids("0 5\n0 6\n", 2)
    with pytest.raises(CertificationError):
        parse_ids("0 5\n", 2)
    with pytest.raises(CertificationError):
        parse_ids("0 5\n1 500\n", 2)


@settings(max_examples=50)
@given(st.lists(st.sampled_from(["0", "1"]), min_size=1, max_size=6), st.randoms())
def test_compute_view_permutation_property(labels, rnd):
    n = len(labels) + 1
    g = build_complete(n)
    cert = CertificateAssignment(1, tuple(["1"] + labels))
    perm = list(range(1, n))
    rnd.shuffle(perm)
    shuffled = CertificateAssignment(1, tuple(["1"] + [labels[p - 1] for p in perm]))
    assert compute_view(g, cert, 0) == compute_view(g, shuffled, 0)
