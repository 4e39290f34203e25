"""LangGraph workflow that audits a catalog entry against every index identity."""

import logging
from typing import Any, AsyncIterator, Optional, TypedDict

from langgraph.graph import END, StateGraph
from typing_extensions import NotRequired

from src.algebra.reports import CheckResult, Report
from src.catalog.models import CatalogEntry
from src.pipeline import commands

logger = logging.getLogger(__name__)

MAX_STEPS = 10


class AuditState(TypedDict):
    """State schema for the audit graph."""
    entry: CatalogEntry
    tolerance: float
    entries: list[CheckResult]
    step_count: int
    report: NotRequired[Report]


def _prefixed(stage: str, report: Report) -> list[CheckResult]:
    return [item.model_copy(update={"name": f"{stage}:{item.name}"}) for item in report.entries]


def _stage(stage: str, build):
    """Wrap a report builder as a graph node that appends its entries to the state."""
    def node(state: AuditState) -> dict:
        logger.info("Audit stage %s for %s", stage, state["entry"].name)
        report = build(state["entry"], state["tolerance"])
        return {
            "entries": state["entries"] + _prefixed(stage, report),
            "step_count": state.get("step_count", 0) + 1,
        }
    node.__name__ = f"{stage}_node"
    return node


def finish_node(state: AuditState) -> dict:
    """Collect all entries into the final report."""
    entry = state["entry"]
    report = Report.from_entries(
        "audit",
        entry.name,
        state["entries"],
        data={"labels": list(entry.ring.labels), "modular": entry.modular is not None},
    )
    return {"report": report, "step_count": state.get("step_count", 0) + 1}


def route_after_validate(state: AuditState) -> str:
    if state.get("step_count", 0) >= MAX_STEPS:
        return "finish"
    if not all(item.passed for item in state["entries"]):
        return "finish"
    return "dims"


def route_after_dims(state: AuditState) -> str:
    if state.get("step_count", 0) >= MAX_STEPS:
        return "finish"
    if state["entry"].modular is not None:
        return "modular"
    return "graphs"


def create_audit_graph():
    """
    Create the audit workflow.

    validate -> dims -> [modular] -> graphs -> multi_interval -> double -> finish.
    An entry that fails the ring axioms goes straight to finish.

    Returns:
        Compiled LangGraph graph
    """
    workflow = StateGraph(AuditState)

    workflow.add_node("validate", _stage("validate", commands.validate_report))
    workflow.add_node("dims", _stage("dims", commands.dims_report))
    workflow.add_node("modular", _stage("modular", commands.modular_report))
    workflow.add_node("graphs", _stage("graphs", commands.graph_report))
    workflow.add_node("multi_interval", _stage("multi_interval", commands.multi_report))
    workflow.add_node("double", _stage("double", commands.double_report))
    workflow.add_node("finish", finish_node)

    workflow.set_entry_point("validate")
    workflow.add_conditional_edges(
        "validate",
        route_after_validate,
        {"dims": "dims", "finish": "finish"},
    )
    workflow.add_conditional_edges(
        "dims",
        route_after_dims,
        {"modular": "modular", "graphs": "graphs", "finish": "finish"},
    )
    workflow.add_edge("modular", "graphs")
    workflow.add_edge("graphs", "multi_interval")
    workflow.add_edge("multi_interval", "double")
    workflow.add_edge("double", "finish")
    workflow.add_edge("finish", END)

    return workflow.compile()


def _initial_state(entry: CatalogEntry, tolerance: float) -> AuditState:
    return {"entry": entry, "tolerance": tolerance, "entries": [], "step_count": 0}


def run_audit(entry: CatalogEntry, tolerance: float, graph: Optional[Any] = None) -> Report:
    """
    Run the full audit on one entry.

    Args:
        entry: Catalog entry
        tolerance: Comparison tolerance
        graph: Compiled audit graph (built on demand when omitted)

    Returns:
        Report with command "audit" and one entry per check, prefixed by stage
    """
    graph = graph or create_audit_graph()
    state = graph.invoke(_initial_state(entry, tolerance))
    return state["report"]


async def stream_audit(
    entry: CatalogEntry,
    tolerance: float,
    graph: Optional[Any] = None,
) -> AsyncIterator[dict]:
    """
    Run the audit and stream one event per stage.

    Yields:
        {"type": "stage", "stage", "entries", "step"} for each stage, then
        {"type": "final_report", "content"}
    """
    graph = graph or create_audit_graph()
    seen = 0
    step = 0
    async for event in graph.astream(_initial_state(entry, tolerance)):
        step += 1
        for stage, update in event.items():
            if "report" in update:
                yield {"type": "final_report", "content": update["report"].model_dump(), "step": step}
                continue
            new_entries = update.get("entries", [])[seen:]
            seen += len(new_entries)
            yield {
                "type": "stage",
                "stage": stage,
                "entries": [item.model_dump() for item in new_entries],
                "step": step,
            }
