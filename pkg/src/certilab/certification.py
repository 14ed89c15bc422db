"""Certificate assignments, identifiers, views and verifier execution.

A vertex sees its own identifier (when identifiers are present), its own
certificate and the multiset of its neighbors' certificates. It never sees the
identifiers of its neighbors.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Callable, Iterator, Sequence

import numpy as np

from certilab.graph_core import Graph

MAX_TABLE_ENTRIES = 24
MAX_SWEEP_VERTICES = 24


class CertificationError(ValueError):
    """Malformed certificates, identifiers, or mismatched widths."""


class VerifierDomainError(LookupError):
    """A view falls outside the domain of a table verifier (its max degree is too small)."""


class SweepGuardError(ValueError):
    """An exhaustive enumeration was requested beyond its size guard."""


def identifier_range(n: int) -> int:
    """Identifier range f(n) = 3n^3 + 3n used for the identifier-based constructions."""
    return 3 * n**3 + 3 * n


def stated_identifier_range(n: int) -> int:
    """The range n^3 + 3n as originally stated; reported alongside :func:`identifier_range`."""
    return n**3 + 3 * n


@dataclass(frozen=True)
class CertificateAssignment:
    width: int
    labels: tuple[str, ...]

    def __post_init__(self) -> None:
        if self.width < 1:
            raise CertificationError("certificate width must be >= 1")
        for v, lab in enumerate(self.labels):
            if len(lab) != self.width or set(lab) - {"0", "1"}:
                raise CertificationError(
                    f"label of vertex {v} is {lab!r}, expected {self.width} bits"
                )

    @classmethod
    def from_bits(cls, bits: Sequence[int]) -> CertificateAssignment:
        """Binary labeling (width 1) from a sequence of 0/1 values."""
        if any(b not in (0, 1) for b in bits):
            raise CertificationError("binary labels must be 0 or 1")
        return cls(1, tuple("1" if b else "0" for b in bits))

    @classmethod
    def from_values(cls, values: Sequence[int], width: int) -> CertificateAssignment:
        if any(not 0 <= x < 2**width for x in values):
            raise CertificationError(f"values must fit in {width} bits")
        return cls(width, tuple(format(x, f"0{width}b") for x in values))

    @property
    def bits(self) -> tuple[int, ...]:
        if self.width != 1:
            raise CertificationError("bits are only defined for binary labelings")
        return tuple(int(lab) for lab in self.labels)

    def __len__(self) -> int:
        return len(self.labels)


BinaryLabeling = CertificateAssignment


@dataclass(frozen=True)
class IdAssignment:
    ids: tuple[int, ...]
    range_bound: int

    def __post_init__(self) -> None:
        if len(set(self.ids)) != len(self.ids):
            raise CertificationError("identifiers must be pairwise distinct")
        bad = [x for x in self.ids if not 1 <= x <= self.range_bound]
        if bad:
            raise CertificationError(f"identifiers {bad} outside [1, {self.range_bound}]")

    def __len__(self) -> int:
        return len(self.ids)


@dataclass(frozen=True)
class View:
    own_id: int | None
    own_label: str
    neighbor_labels: tuple[str, ...]

    def __post_init__(self) -> None:
        # canonical multiset form, so views compare structurally
        object.__setattr__(self, "neighbor_labels", tuple(sorted(self.neighbor_labels)))

    @property
    def degree(self) -> int:
        return len(self.neighbor_labels)

    @property
    def ones(self) -> int:
        """Number of neighbors labeled "1" (binary views)."""
        return self.neighbor_labels.count("1")

    def anonymous(self) -> View:
        return View(None, self.own_label, self.neighbor_labels)

    def to_dict(self) -> dict:
        return {
            "own_id": self.own_id,
            "own_label": self.own_label,
            "neighbor_labels": list(self.neighbor_labels),
        }


def _check_sizes(graph: Graph, cert: CertificateAssignment, ids: IdAssignment | None) -> None:
    if len(cert) != graph.n:
        raise CertificationError(f"labeling covers {len(cert)} vertices, graph has {graph.n}")
    if ids is not None and len(ids) != graph.n:
        raise CertificationError(f"id assignment covers {len(ids)} vertices, graph has {graph.n}")


def compute_view(
    graph: Graph, cert: CertificateAssignment, v: int, ids: IdAssignment | None = None
) -> View:
    graph.check_vertex(v)
    _check_sizes(graph, cert, ids)
    return View(
        ids.ids[v] if ids is not None else None,
        cert.labels[v],
        tuple(cert.labels[u] for u in graph.adjacency[v]),
    )


def all_views(graph: Graph, cert: CertificateAssignment, ids: IdAssignment | None = None) -> list[View]:
    _check_sizes(graph, cert, ids)
    return [compute_view(graph, cert, v, ids) for v in range(graph.n)]


Verifier = Callable[[View], bool]


@dataclass(frozen=True)
class Verdict:
    decisions: tuple[bool, ...]

    @property
    def accepted(self) -> bool:
        return all(self.decisions)

    @property
    def rejecting(self) -> list[int]:
        return [v for v, ok in enumerate(self.decisions) if not ok]


def run_verifier(
    graph: Graph, cert: CertificateAssignment, verifier: Verifier, ids: IdAssignment | None = None
) -> Verdict:
    """Run ``verifier`` on every vertex; the global verdict accepts iff all vertices do.

    Domain errors raised by the verifier propagate unchanged.
    """
    return Verdict(tuple(bool(verifier(view)) for view in all_views(graph, cert, ids)))


# ---------------------------------------------------------------------------
# Table verifiers
# ---------------------------------------------------------------------------

TableKey = tuple[int, int, int]  # (own bit, degree, ones among neighbors)


def table_entries(max_degree: int, exact_degree: bool = False) -> list[TableKey]:
    """Domain of a binary table verifier, in enumeration order.

    Ordered by degree, then own bit, then number of 1-neighbors. With
    ``exact_degree`` only views of degree ``max_degree`` are included.
    """
    if max_degree < 0:
        raise ValueError("max_degree must be >= 0")
    degrees = [max_degree] if exact_degree else range(max_degree + 1)
    return [(own, d, ones) for d in degrees for own in (0, 1) for ones in range(d + 1)]


def view_key(view: View) -> TableKey:
    if len(view.own_label) != 1:
        raise CertificationError("table verifiers only read binary views")
    return (int(view.own_label), view.degree, view.ones)


@dataclass(frozen=True)
class TableVerifier:
    """Explicit accept/reject table over anonymous binary views.

    ``index`` encodes the table: entry ``e`` of :func:`table_entries` accepts iff
    bit ``e`` of ``index`` is set.
    """

    max_degree: int
    index: int
    exact_degree: bool = False

    def __post_init__(self) -> None:
        if not 0 <= self.index < 2 ** len(self.entries):
            raise ValueError(f"table index {self.index} out of range")

    @cached_property
    def entries(self) -> list[TableKey]:
        return table_entries(self.max_degree, self.exact_degree)

    @cached_property
    def table(self) -> dict[TableKey, bool]:
        return {key: bool(self.index >> e & 1) for e, key in enumerate(self.entries)}

    @classmethod
    def from_table(
        cls, max_degree: int, table: dict[TableKey, bool], exact_degree: bool = False
    ) -> TableVerifier:
        entries = table_entries(max_degree, exact_degree)
        if set(table) != set(entries):
            raise ValueError("table must be total over its domain")
        return cls(max_degree, sum(1 << e for e, key in enumerate(entries) if table[key]), exact_degree)

    def __call__(self, view: View) -> bool:
        key = view_key(view)
        try:
            return self.table[key]
        except KeyError:
            raise VerifierDomainError(
                f"view {key} outside table domain (max_degree={self.max_degree},"
                f" exact_degree={self.exact_degree})"
            ) from None


def enumerate_binary_table_verifiers(
    max_degree: int, exact_degree: bool = False
) -> Iterator[TableVerifier]:
    """Every total table, in increasing ``index`` order."""
    size = len(table_entries(max_degree, exact_degree))
    if size > MAX_TABLE_ENTRIES:
        raise SweepGuardError(f"table has {size} entries; limit is {MAX_TABLE_ENTRIES}")
    for index in range(2**size):
        yield TableVerifier(max_degree, index, exact_degree)


def enumerate_binary_labelings(graph: Graph | int) -> Iterator[CertificateAssignment]:
    """All 2^n binary labelings, lexicographic in the bit vector (vertex 0 most significant)."""
    n = graph if isinstance(graph, int) else graph.n
    if n > MAX_SWEEP_VERTICES:
        raise SweepGuardError(f"2^{n} labelings exceed the sweep guard (n <= {MAX_SWEEP_VERTICES})")
    for bits in itertools.product((0, 1), repeat=n):
        yield CertificateAssignment.from_bits(bits)


def key_view(key: TableKey) -> View:
    """A representative anonymous view for a table key."""
    own, degree, ones = key
    return View(None, str(own), ("1",) * ones + ("0",) * (degree - ones))


def count_accepted_labelings(graph: Graph, verifier: Verifier, chunk: int = 1 << 14) -> int:
    """Number of binary labelings of ``graph`` that ``verifier`` globally accepts.

    Only valid for anonymous verifiers over binary views: such a verifier's
    decision is a function of (own bit, degree, ones), so it is evaluated once
    per distinct key and broadcast over every labeling.
    """
    n = graph.n
    if n > MAX_SWEEP_VERTICES:
        raise SweepGuardError(f"2^{n} labelings exceed the sweep guard (n <= {MAX_SWEEP_VERTICES})")
    adj = np.zeros((n, n), dtype=np.int16)
    for u, v in graph.edges():
        adj[u, v] = adj[v, u] = 1
    degree = adj.sum(axis=0).astype(np.int64)
    stride = n + 1
    decision: dict[int, bool] = {}
    accepted = 0
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    for start in range(0, 2**n, chunk):
        idx = np.arange(start, min(start + chunk, 2**n), dtype=np.int64)
        bits = ((idx[:, None] >> shifts) & 1).astype(np.int16)
        ones = (bits @ adj).astype(np.int64)
        code = (bits.astype(np.int64) * stride + degree) * stride + ones
        uniq, inverse = np.unique(code, return_inverse=True)
        ok = np.empty(len(uniq), dtype=bool)
        for pos, c in enumerate(uniq.tolist()):
            if c not in decision:
                own, rest = divmod(c, stride * stride)
                decision[c] = bool(verifier(key_view((own, *divmod(rest, stride)))))
            ok[pos] = decision[c]
        accepted += int(ok[inverse.reshape(code.shape)].all(axis=1).sum())
    return accepted


# ---------------------------------------------------------------------------
# File formats
# ---------------------------------------------------------------------------


def format_labeling(cert: CertificateAssignment) -> str:
    if cert.width == 1:
        return "".join(cert.labels) + "\n"
    return " ".join(cert.labels) + "\n"


def parse_labeling(text: str, width: int | None = None) -> CertificateAssignment:
    """Parse a labeling file.

    Binary labelings are one line of n characters. Wider labels are written as
    whitespace-separated tokens, or as one unbroken string when ``width`` is given.
    """
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if len(lines) != 1:
        raise CertificationError("labeling file must contain exactly one line")
    line = lines[0]
    tokens = line.split()
    if len(tokens) > 1:
        labels = tuple(tokens)
    elif width is None or width == 1:
        labels = tuple(line)
    else:
        if len(line) % width:
            raise CertificationError(f"label string length {len(line)} is not a multiple of {width}")
        labels = tuple(line[i : i + width] for i in range(0, len(line), width))
    widths = {len(x) for x in labels}
    if len(widths) != 1:
        raise CertificationError("labels have differing widths")
    found = widths.pop()
    if width is not None and found != width:
        raise CertificationError(f"labels have width {found}, expected {width}")
    return CertificateAssignment(found, labels)


def format_ids(ids: IdAssignment) -> str:
    return "".join(f"{v} {x}\n" for v, x in enumerate(ids.ids))


def parse_ids(text: str, n: int, range_bound: int | None = None) -> IdAssignment:
    """Parse ``vertex id`` lines; the range defaults to :func:`identifier_range`."""
    found: dict[int, int] = {}
    for ln in text.splitlines():
        if not ln.strip():
            continue
        try:
            v, x = (int(t) for t in ln.split())
        except ValueError:
            raise CertificationError(f"bad id line {ln!r}") from None
        if not 0 <= v < n or v in found:
            raise CertificationError(f"id line {ln!r}: vertex missing, repeated or out of range")
        found[v] = x
    if len(found) != n:
        raise CertificationError(f"id file covers {len(found)} of {n} vertices")
    bound = identifier_range(n) if range_bound is None else range_bound
    return IdAssignment(tuple(found[v] for v in range(n)), bound)


def read_labeling(path: str | Path, width: int | None = None) -> CertificateAssignment:
    return parse_labeling(Path(path).read_text(encoding="ascii"), width)


def read_ids(path: str | Path, n: int, range_bound: int | None = None) -> IdAssignment:
    return parse_ids(Path(path).read_text(encoding="ascii"), n, range_bound)
