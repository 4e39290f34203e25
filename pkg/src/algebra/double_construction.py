"""Quantum doubles: the doubled system of a ring and the Drinfeld double of a finite group."""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from src.algebra import fusion_ring, lr_graphs
from src.algebra.errors import FusionInputError, InconsistencyError
from src.algebra.fusion_ring import FusionRing
from src.algebra.groups import MAX_GROUP_ORDER, GroupTable, character_table
from src.algebra.modular_data import ModularData, verlinde_tensor
from src.algebra.reports import CheckResult, Report, check

logger = logging.getLogger(__name__)

DELIGNE = "deligne"
DRINFELD = "drinfeld"


@dataclass(frozen=True, eq=False)
class DoubledRing:
    ring: FusionRing
    provenance: str
    modular: Optional[ModularData] = None


def deligne_double(ring: FusionRing, modular: Optional[ModularData] = None) -> DoubledRing:
    """
    The doubled system {rho_i tensor rho_j^opp} with labels "(i,j)".

    N_{(i,j),(k,l)}^{(m,n)} = N_ik^m N_jl^n. When modular data is given the
    double carries S tensor conj(S) and T tensor conj(T).

    Args:
        ring: Valid fusion ring
        modular: Optional modular data of the ring

    Returns:
        DoubledRing with provenance "deligne"
    """
    n = ring.size
    A = ring.array
    labels = [f"({a},{b})" for a in ring.labels for b in ring.labels]
    dual = [ring.dual[i] * n + ring.dual[j] for i in range(n) for j in range(n)]
    tensor = np.einsum("ikm,jln->ijklmn", A, A).reshape(n * n, n * n, n * n)
    entries = [(int(x), int(y), int(z), int(tensor[x, y, z])) for x, y, z in np.argwhere(tensor)]
    doubled = FusionRing.build(labels, dual, entries)

    doubled_modular = None
    if modular is not None:
        doubled_modular = ModularData.build(
            doubled, np.kron(modular.S, modular.S.conj()), np.kron(modular.T, modular.T.conj())
        )
    return DoubledRing(ring=doubled, provenance=DELIGNE, modular=doubled_modular)


def drinfeld_double(group: GroupTable, seed: int = 0) -> DoubledRing:
    """
    Fusion ring and modular data of the untwisted Drinfeld double D(G).

    Simple objects are pairs (conjugacy class a, irreducible character alpha of
    the centralizer of the class representative g_a), named "g_a|chi<alpha>".
    S is the character sum over commuting pairs; T_(a,alpha) = chi_alpha(g_a) / chi_alpha(1).
    Fusion rules follow from S by the Verlinde formula.

    Args:
        group: Group of order at most MAX_GROUP_ORDER
        seed: Seed for the centralizer character tables

    Returns:
        DoubledRing with provenance "drinfeld"

    Raises:
        FusionInputError if the group is too large
        NumericError if a character table cannot be computed
        InconsistencyError if the dimension count or the ring axioms fail
    """
    order = group.order
    if order > MAX_GROUP_ORDER:
        raise FusionInputError(f"Group order {order} exceeds {MAX_GROUP_ORDER}")
    logger.info("Building Drinfeld double for a group of order %d...", order)

    classes = group.conjugacy_classes
    labels, dims, twists = [], [], []
    offsets, tables, positions = [], [], []
    transporter: dict[int, int] = {}

    for members in classes:
        representative = members[0]
        subgroup, embedding = group.subgroup(group.centralizer(representative))
        table = character_table(subgroup, seed=seed)
        offsets.append(len(labels))
        tables.append(table)
        positions.append({g: i for i, g in enumerate(embedding)})
        for alpha, degree in enumerate(table.degrees):
            labels.append(f"{group.elements[representative]}|chi{alpha}")
            dims.append(len(members) * degree)
            twists.append(table.value(alpha, positions[-1][representative]) / degree)
        for g in members:
            transporter[g] = next(x for x in range(order) if group.conjugate(representative, x) == g)

    size = len(labels)
    S = np.zeros((size, size), dtype=complex)
    class_of = group.class_of
    for g in range(order):
        a = class_of[g]
        for h in range(order):
            if group.mul[g, h] != group.mul[h, g]:
                continue
            b = class_of[h]
            x, y = transporter[g], transporter[h]
            h_local = group.product(group.product(group.inverse[x], h), x)
            g_local = group.product(group.product(group.inverse[y], g), y)
            first = tables[a].values[:, tables[a].group.class_of[positions[a][h_local]]]
            second = tables[b].values[:, tables[b].group.class_of[positions[b][g_local]]]
            rows = slice(offsets[a], offsets[a] + len(first))
            cols = slice(offsets[b], offsets[b] + len(second))
            S[rows, cols] += np.outer(first.conj(), second.conj())
    S /= order

    total = sum(d * d for d in dims)
    if total != order * order:
        raise InconsistencyError(
            f"Drinfeld double dimensions sum to {total}, expected {order * order}",
            expected=order * order,
            actual=total,
        )

    tensor = verlinde_tensor(S)
    ring = FusionRing.from_array(labels, tensor)
    report = fusion_ring.validate(ring)
    if not report.passed:
        failed = [entry.name for entry in report.entries if not entry.passed]
        raise InconsistencyError(f"Drinfeld double fails ring axioms: {failed}")

    logger.info("Drinfeld double built: %d simple objects", size)
    return DoubledRing(ring=ring, provenance=DRINFELD, modular=ModularData.build(ring, S, twists))


def orbifold_budget(group_order: int) -> tuple[int, int, int]:
    """(|G|^2, |G|, |G|^2 - |G|): total index, untwisted part, extra sectors."""
    if isinstance(group_order, bool) or not isinstance(group_order, (int, np.integer)) or group_order < 1:
        raise FusionInputError(f"Group order must be a positive integer, got {group_order}")
    total = int(group_order) ** 2
    return total, int(group_order), total - int(group_order)


class DoubleComparison(Report):
    """Principal-graph even vertices against the full doubling."""
    full: bool = True
    even_vertices: int = 1
    total_pairs: int = 1
    grading_order: int = 1
    deficiency_factor: float = 1.0


def compare_double(ring: FusionRing, tolerance: float = fusion_ring.DEFAULT_TOLERANCE) -> DoubleComparison:
    """
    Compare the even vertices of the principal graph with all label pairs.

    The deficiency factor I_global^2 / sum_{(i,j) even} d_i^2 d_j^2 must equal
    the order of the universal grading group.

    Returns:
        DoubleComparison
    """
    graph = lr_graphs.principal_graph(ring)
    d = ring.perron_frobenius
    total_pairs = ring.size ** 2
    covered = sum((d[i] * d[j]) ** 2 for i, j in graph.even_vertices)
    deficiency = fusion_ring.global_index(ring) ** 2 / covered
    grading_order = fusion_ring.grading(ring).group.order
    full = len(graph.even_vertices) == total_pairs

    entries = [
        CheckResult(
            name="even_vertices",
            passed=True,
            detail="full doubling" if full else "proper subcategory of the doubling",
            lhs=float(len(graph.even_vertices)),
            rhs=float(total_pairs),
        ),
        check(
            "deficiency_factor",
            deficiency,
            float(grading_order),
            tolerance * max(1.0, deficiency),
            detail="I_global^2 / covered dimension = grading order",
        ),
    ]
    return DoubleComparison.from_entries(
        "double",
        ",".join(ring.labels),
        entries,
        full=full,
        even_vertices=len(graph.even_vertices),
        total_pairs=total_pairs,
        grading_order=grading_order,
        deficiency_factor=deficiency,
    )
