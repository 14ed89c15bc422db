"""Concrete proof-labeling schemes: prover plus per-vertex verifier."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable

from certilab.certification import (
    CertificateAssignment,
    IdAssignment,
    Verdict,
    Verifier,
    View,
    run_verifier,
)
from certilab.graph_core import DEFAULT_BUDGET, Graph, is_distance2_3colorable, is_k_colorable


@dataclass(frozen=True)
class Scheme:
    name: str
    width: int
    prover: Callable[[Graph], CertificateAssignment | None]
    verifier: Verifier

    def certify(self, graph: Graph) -> CertificateAssignment | None:
        return self.prover(graph)

    def verify(
        self, graph: Graph, cert: CertificateAssignment, ids: IdAssignment | None = None
    ) -> Verdict:
        if cert.width != self.width:
            raise ValueError(f"scheme {self.name} expects width {self.width}, got {cert.width}")
        return run_verifier(graph, cert, self.verifier, ids)


def color_width(k: int) -> int:
    """Bits needed to encode colors 1..k, with a floor of one bit."""
    return max(1, (k - 1).bit_length())


def kcolor_scheme(k: int, budget: int = DEFAULT_BUDGET) -> Scheme:
    """Certificates are colors; color c is stored as the binary value c-1."""
    if k < 1:
        raise ValueError("k must be >= 1")
    width = color_width(k)

    def prover(graph: Graph) -> CertificateAssignment | None:
        colors = is_k_colorable(graph, k, budget=budget)
        if colors is None:
            return None
        return CertificateAssignment.from_values([c - 1 for c in colors], width)

    def verifier(view: View) -> bool:
        return int(view.own_label, 2) < k and view.own_label not in view.neighbor_labels

    return Scheme(f"kcolor{k}", width, prover, verifier)


def two_color_scheme() -> Scheme:
    scheme = kcolor_scheme(2)
    return Scheme("2color", scheme.width, scheme.prover, scheme.verifier)


def _dist2_verifier(view: View) -> bool:
    if view.degree > 2:
        return False
    if view.degree == 2:
        return int(view.own_label) + view.ones == 1
    return True


def _dist2_prover(graph: Graph) -> CertificateAssignment | None:
    if not is_distance2_3colorable(graph):
        return None
    if graph.num_edges == graph.n - 1:
        # path: walk from the lowest-index endpoint
        start = min(v for v in range(graph.n) if len(graph.adjacency[v]) <= 1)
    else:
        # cycle: start at vertex 0, head toward its lowest-index neighbor
        start = 0
    walk = [start]
    prev = None
    while len(walk) < graph.n:
        cur = walk[-1]
        walk.append(min(u for u in graph.adjacency[cur] if u != prev))
        prev = cur
    bits = [0] * graph.n
    for step, v in enumerate(walk):
        bits[v] = 1 if step % 3 == 0 else 0
    return CertificateAssignment.from_bits(bits)


def dist2_3color_scheme() -> Scheme:
    """One-bit certification of distance-2 3-colorability (paths and cycles of length 0 mod 3).

    Labels follow the pattern 1,0,0,1,0,0,... along the path or cycle. A vertex
    of degree 2 accepts iff exactly one vertex of its closed neighborhood holds
    a 1; degree above 2 rejects; degree at most 1 accepts.
    """
    return Scheme("dist2", 1, _dist2_prover, _dist2_verifier)


_KCOLOR_RE = re.compile(r"kcolor(\d+)$")


def get_scheme(name: str, budget: int = DEFAULT_BUDGET) -> Scheme:
    """Look up a scheme by CLI name: ``dist2``, ``2color`` or ``kcolor<k>``."""
    if name == "dist2":
        return dist2_3color_scheme()
    if name == "2color":
        return two_color_scheme()
    m = _KCOLOR_RE.match(name)
    if m and int(m.group(1)) >= 1:
        return kcolor_scheme(int(m.group(1)), budget=budget)
    raise KeyError(f"unknown scheme {name!r}; expected dist2, 2color or kcolor<k>")
