"""Report builders shared by the CLI, the API and the audit pipeline."""

import logging
from typing import Optional

import numpy as np

from src.algebra import double_construction, fusion_ring, lr_graphs, lr_oracle, modular_data, multi_interval
from src.algebra.errors import FusionInputError, InconsistencyError, ModularityError
from src.algebra.groups import GroupTable
from src.algebra.reports import CheckResult, Report, check
from src.catalog.models import CatalogEntry

logger = logging.getLogger(__name__)

DEFAULT_INTERVALS = 3


def _subject(entry: CatalogEntry) -> str:
    return entry.name or ",".join(entry.ring.labels)


def validate_report(entry: CatalogEntry, tolerance: float) -> Report:
    report = fusion_ring.validate(entry.ring)
    return report.model_copy(update={"subject": _subject(entry)})


def dims_report(entry: CatalogEntry, tolerance: float) -> Report:
    """Perron-Frobenius dimensions, their consistency, and agreement with S when present."""
    vector = fusion_ring.dims(entry.ring, tolerance)
    entries = [CheckResult(
        name="dimension_consistency",
        passed=vector.is_consistent(entry.ring),
        detail="d_0 = 1, d_i = d_dual(i), d_i d_j = sum_k N_ij^k d_k",
        residual=vector.residual(entry.ring),
    )]
    data = {"labels": list(entry.ring.labels), "dims": list(vector.d)}
    if entry.modular is not None:
        try:
            from_s = modular_data.dims_from_S(entry.modular)
            entries.append(CheckResult(name="dims_from_S", passed=True, detail="S_0i / S_00 agrees"))
            data["dims_from_S"] = list(from_s.d)
        except (InconsistencyError, ModularityError) as e:
            entries.append(CheckResult(name="dims_from_S", passed=False, detail=str(e)))
    return Report.from_entries("dims", _subject(entry), entries, data=data)


def index_report(entry: CatalogEntry, tolerance: float) -> Report:
    """Global index, LR index and graph index, with the depth-2 and grading data."""
    ring = entry.ring
    index = fusion_ring.global_index(ring)
    graph_index = lr_graphs.graph_index(lr_graphs.principal_graph(ring))
    grading = fusion_ring.grading(ring)
    entries = [
        check("lr_index", lr_graphs.lr_index(ring), index, tolerance, detail="[M : N tensor N^opp] = I_global"),
        check("graph_index", graph_index, index, tolerance * max(1.0, index) * 10,
              detail="squared norm of the principal graph = I_global"),
        CheckResult(
            name="index_lower_bound",
            passed=index >= ring.size - tolerance,
            detail="I_global >= number of sectors",
            lhs=index,
            rhs=float(ring.size),
        ),
    ]
    data = {
        "global_index": index,
        "graph_index": graph_index,
        "depth_two": lr_graphs.is_depth_two(ring, tolerance),
        "grading_order": grading.group.order,
        "grading": {ring.labels[i]: grading.group.elements[c] for i, c in enumerate(grading.component)},
        "even_part_ratio": multi_interval.even_part_ratio(ring),
    }
    return Report.from_entries("index", _subject(entry), entries, data=data)


def graph_report(entry: CatalogEntry, tolerance: float) -> Report:
    """Principal and dual principal graphs with their DOT rendering."""
    ring = entry.ring
    principal = lr_graphs.principal_graph(ring)
    dual = lr_graphs.dual_principal_graph(ring, modular=entry.modular is not None)
    index = fusion_ring.global_index(ring)
    entries = [
        CheckResult(
            name="principal_equals_dual",
            passed=principal.same_combinatorics(dual),
            detail=f"dual principal graph tagged '{dual.tag}'",
        ),
        check("graph_index", lr_graphs.graph_index(principal), index, tolerance * max(1.0, index) * 10,
              detail="squared norm of the principal graph = I_global"),
    ]
    data = {
        "even_vertices": [[ring.labels[i], ring.labels[j]] for i, j in principal.even_vertices],
        "odd_vertices": [ring.labels[k] for k in principal.odd_vertices],
        "edges": [[ring.labels[i], ring.labels[j], ring.labels[k], m] for ((i, j), k), m in principal.edges.items()],
        "dual_tag": dual.tag,
        "dot": lr_graphs.to_dot(principal),
    }
    return Report.from_entries("graph", _subject(entry), entries, data=data)


def modular_report(entry: CatalogEntry, tolerance: float) -> Report:
    if entry.modular is None:
        raise FusionInputError(f"Entry '{_subject(entry)}' has no modular data")
    report = modular_data.check_modularity(entry.modular, tolerance)
    twists = modular_data.twists(entry.modular)
    data = dict(report.data, twists=[[float(t.real), float(t.imag)] for t in twists])
    return report.model_copy(update={"subject": _subject(entry), "data": data})


def multi_report(entry: CatalogEntry, tolerance: float, n: int = DEFAULT_INTERVALS) -> Report:
    ledger = multi_interval.build_ledger(entry.ring, n, tolerance)
    return ledger.model_copy(update={"subject": _subject(entry)})


def double_report(entry: CatalogEntry, tolerance: float) -> Report:
    """Comparison with the full doubling plus the index of the doubled system."""
    ring = entry.ring
    comparison = double_construction.compare_double(ring, tolerance)
    doubled = double_construction.deligne_double(ring, entry.modular)
    index = fusion_ring.global_index(ring)
    entries = list(comparison.entries) + [
        check(
            "deligne_index",
            fusion_ring.global_index(doubled.ring),
            index ** 2,
            1e-6 * index ** 2,
            detail="I_global of the doubled system = I_global^2",
        ),
    ]
    if doubled.modular is not None:
        doubled_report = modular_data.check_modularity(doubled.modular, tolerance)
        entries.append(CheckResult(
            name="deligne_modularity",
            passed=doubled_report.passed,
            detail="S tensor conj(S), T tensor conj(T) is modular",
        ))
    return double_construction.DoubleComparison.from_entries(
        "double",
        _subject(entry),
        entries,
        full=comparison.full,
        even_vertices=comparison.even_vertices,
        total_pairs=comparison.total_pairs,
        grading_order=comparison.grading_order,
        deficiency_factor=comparison.deficiency_factor,
    )


def dg_report(group: GroupTable, name: str, tolerance: float) -> Report:
    """Drinfeld double of a group: dimension count, ring axioms and modularity."""
    doubled = double_construction.drinfeld_double(group)
    ring = doubled.ring
    d = np.array(ring.perron_frobenius)
    order = group.order
    entries = [
        check("dimension_count", float(np.sum(d ** 2)), float(order ** 2), tolerance * order ** 2,
              detail="sum d^2 = |G|^2"),
        CheckResult(name="ring_axioms", passed=fusion_ring.validate(ring).passed),
        CheckResult(name="modularity", passed=modular_data.check_modularity(doubled.modular, tolerance).passed),
    ]
    budget = double_construction.orbifold_budget(order)
    data = {
        "labels": list(ring.labels),
        "dims": [float(x) for x in d],
        "orbifold_budget": {"total": budget[0], "untwisted": budget[1], "extra": budget[2]},
    }
    return Report.from_entries("dg", name or f"order {order}", entries, data=data)


def oracle_report(group: GroupTable, name: str, m: Optional[int], samples: int, seed: int) -> Report:
    return lr_oracle.run_oracle(group, m=m, samples=samples, seed=seed, name=name)


ENTRY_COMMANDS = {
    "validate": validate_report,
    "dims": dims_report,
    "index": index_report,
    "graph": graph_report,
    "modular": modular_report,
    "multi": multi_report,
    "double": double_report,
}
