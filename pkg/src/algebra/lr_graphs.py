"""Principal graphs of the Longo-Rehren inclusion, alpha-induction counts and the depth-2 test."""

import logging
from dataclasses import dataclass
from types import MappingProxyType
from typing import Mapping, Optional

import networkx as nx
import numpy as np
import pydot

from src.algebra import fusion_ring
from src.algebra.errors import FusionInputError
from src.algebra.fusion_ring import FusionRing, LabelRef

logger = logging.getLogger(__name__)

PRINCIPAL = "principal"
DUAL_PRINCIPAL = "dual principal"
UNVERIFIED_CHIRALITY = "unverified chirality"

EvenVertex = tuple[int, int]


@dataclass(frozen=True, eq=False)
class BipartiteGraph:
    """
    Bipartite graph with even vertices (i, j) and odd vertices k.

    edges[((i, j), k)] is the multiplicity of the edge between (i, j) and k.
    """
    labels: tuple[str, ...]
    even_vertices: tuple[EvenVertex, ...]
    odd_vertices: tuple[int, ...]
    edges: Mapping[tuple[EvenVertex, int], int]
    tag: str = PRINCIPAL

    def same_combinatorics(self, other: "BipartiteGraph") -> bool:
        """Vertex-for-vertex and edge-for-edge equality, ignoring the tag."""
        return (
            self.even_vertices == other.even_vertices
            and self.odd_vertices == other.odd_vertices
            and dict(self.edges) == dict(other.edges)
        )

    def adjacency(self) -> np.ndarray:
        """Even-by-odd multiplicity matrix in vertex order."""
        rows = {v: r for r, v in enumerate(self.even_vertices)}
        cols = {k: c for c, k in enumerate(self.odd_vertices)}
        matrix = np.zeros((len(rows), len(cols)))
        for (even, odd), mult in self.edges.items():
            matrix[rows[even], cols[odd]] = mult
        return matrix


def _lr_graph(ring: FusionRing, tag: str) -> BipartiteGraph:
    graph = nx.Graph()
    for (i, j, k), mult in ring.tensor.items():
        graph.add_edge(("e", i, j), ("o", k), weight=mult)

    component = nx.node_connected_component(graph, ("e", 0, 0))
    even = tuple(sorted((v[1], v[2]) for v in component if v[0] == "e"))
    odd = tuple(sorted(v[1] for v in component if v[0] == "o"))
    edges = {
        ((i, j), k): ring.N(i, j, k)
        for (i, j) in even
        for k in odd
        if ring.N(i, j, k)
    }
    logger.debug("%s graph: %d even, %d odd vertices", tag, len(even), len(odd))
    return BipartiteGraph(
        labels=ring.labels,
        even_vertices=even,
        odd_vertices=odd,
        edges=MappingProxyType(dict(sorted(edges.items()))),
        tag=tag,
    )


def principal_graph(ring: FusionRing) -> BipartiteGraph:
    """
    Connected component of (0, 0) in the graph with an N_ij^k-fold edge between (i, j) and k.

    The even vertex (i, j) stands for the sector of rho_i tensor rho_{dual(j)}^opp.

    Args:
        ring: Valid fusion ring

    Returns:
        BipartiteGraph with lexicographically ordered vertices
    """
    return _lr_graph(ring, PRINCIPAL)


def dual_principal_graph(ring: FusionRing, modular: bool) -> BipartiteGraph:
    """
    The same construction with even vertices read as beta-induced sectors.

    Without a non-degenerate braiding the output carries the "unverified chirality" tag.
    """
    return _lr_graph(ring, DUAL_PRINCIPAL if modular else UNVERIFIED_CHIRALITY)


def to_dot(graph: BipartiteGraph, name: str = "lr_graph") -> str:
    """
    Render the graph in DOT syntax.

    Even vertices are boxes named e_i_j, odd vertices circles named o_k, and an
    edge of multiplicity m is written m times.
    """
    dot = pydot.Dot(name, graph_type="graph", strict=False)
    for i, j in graph.even_vertices:
        dot.add_node(pydot.Node(
            f"e_{i}_{j}", shape="box", label=f'"({graph.labels[i]},{graph.labels[j]})"'
        ))
    for k in graph.odd_vertices:
        dot.add_node(pydot.Node(f"o_{k}", shape="circle", label=f'"{graph.labels[k]}"'))
    for ((i, j), k), mult in graph.edges.items():
        for _ in range(mult):
            dot.add_edge(pydot.Edge(f"e_{i}_{j}", f"o_{k}"))
    return dot.to_string()


def graph_index(graph: BipartiteGraph) -> float:
    """Squared norm of the bipartite adjacency matrix."""
    adjacency = graph.adjacency()
    return float(np.max(np.linalg.eigvalsh(adjacency.T @ adjacency)))


def lr_index(ring: FusionRing) -> float:
    """[M : N tensor N^opp] = sum_i d_i^2."""
    return fusion_ring.global_index(ring)


def alpha_hom_count(
    ring: FusionRing,
    pair1: tuple[LabelRef, LabelRef],
    pair2: tuple[LabelRef, LabelRef],
    chirality: str = "+",
    other_chirality: Optional[str] = None,
    modular: bool = False,
) -> int:
    """
    Dimension of the intertwiner space between two alpha-induced sectors.

    For equal chiralities this is sum_m N_{m i}^k N_{m j}^l with pair1 = (i, j)
    and pair2 = (k, l). Mixed chiralities share only the identity, which needs a
    non-degenerate braiding.

    Args:
        ring: Valid fusion ring
        pair1: (i, j) for rho_i tensor rho_j^opp
        pair2: (k, l) for rho_k tensor rho_l^opp
        chirality: "+" or "-" for the first induction
        other_chirality: Chirality of the second induction (defaults to the first)
        modular: Whether the braiding is non-degenerate

    Returns:
        Nonnegative integer
    """
    other_chirality = other_chirality or chirality
    if chirality not in ("+", "-") or other_chirality not in ("+", "-"):
        raise FusionInputError(f"Chirality must be '+' or '-', got {chirality}, {other_chirality}")

    i, j = (ring.resolve(x) for x in pair1)
    k, l = (ring.resolve(x) for x in pair2)
    A = ring.array

    if chirality == other_chirality:
        return int(A[:, i, k] @ A[:, j, l])

    if not modular:
        raise FusionInputError("Mixed-chirality counts require a modular ring")
    return int(A[i, ring.dual[j], 0] * A[k, ring.dual[l], 0])


def is_depth_two(ring: FusionRing, tolerance: float = fusion_ring.DEFAULT_TOLERANCE) -> bool:
    """True iff every sector has dimension 1."""
    return all(abs(d - 1) < tolerance for d in ring.perron_frobenius)
