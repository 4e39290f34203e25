import asyncio

import pytest

from src.algebra.errors import FusionInputError
from src.pipeline import commands
from src.pipeline.graph import create_audit_graph, run_audit, stream_audit


@pytest.fixture(scope="module")
def audit_graph():
    return create_audit_graph()


def _stages(report):
    return {item.name.split(":", 1)[0] for item in report.entries}


def test_ising_audit_passes(ising, audit_graph):
    report = run_audit(ising, 1e-9, audit_graph)
    assert report.command == "audit"
    assert report.subject == "ising"
    assert report.passed, [item.name for item in report.entries if not item.passed]
    assert _stages(report) == {"validate", "dims", "modular", "graphs", "multi_interval", "double"}
    assert report.data["modular"] is True


def test_audit_skips_modular_stage_without_data(catalog, audit_graph):
    report = run_audit(catalog.get("z4"), 1e-9, audit_graph)
    assert report.passed
    assert "modular" not in _stages(report)


def test_invalid_ring_stops_after_validation(broken_ising, audit_graph):
    report = run_audit(broken_ising, 1e-9, audit_graph)
    assert not report.passed
    assert _stages(report) == {"validate"}
    assert "validate:associativity" in {item.name for item in report.entries if not item.passed}


def test_stream_audit_events(catalog, audit_graph):
    async def collect():
        return [event async for event in stream_audit(catalog.get("fibonacci"), 1e-9, audit_graph)]

    events = asyncio.run(collect())
    stages = [event["stage"] for event in events if event["type"] == "stage"]
    assert stages == ["validate", "dims", "modular", "graphs", "multi_interval", "double"]
    assert events[-1]["type"] == "final_report"
    assert events[-1]["content"]["passed"] is True
    streamed = sum(len(event["entries"]) for event in events if event["type"] == "stage")
    assert streamed == len(events[-1]["content"]["entries"])


def test_index_report(ising):
    report = commands.index_report(ising, 1e-9)
    assert report.passed
    assert report.data["global_index"] == pytest.approx(4.0)
    assert report.data["grading_order"] == 2
    assert report.data["grading"] == {"1": "1", "eps": "1", "sigma": "sigma"}
    assert report.data["depth_two"] is False


def test_graph_report_carries_dot(ising):
    report = commands.graph_report(ising, 1e-9)
    assert report.passed
    assert report.data["dual_tag"] == "dual principal"
    assert report.data["dot"].startswith("graph lr_graph {")
    assert ["sigma", "sigma"] in report.data["even_vertices"]


def test_modular_report_requires_modular_data(catalog):
    with pytest.raises(FusionInputError):
        commands.modular_report(catalog.get("z4"), 1e-9)


def test_double_report(ising):
    report = commands.double_report(ising, 1e-9)
    assert report.passed
    assert report.deficiency_factor == pytest.approx(2.0)
    assert {"deficiency_factor", "deligne_index", "deligne_modularity"} <= {item.name for item in report.entries}


def test_dg_report(catalog):
    report = commands.dg_report(catalog.get("dg_s3").group, "S3", 1e-9)
    assert report.passed
    assert report.data["orbifold_budget"] == {"total": 36, "untwisted": 6, "extra": 30}
    assert sorted(round(d) for d in report.data["dims"]) == [1, 1, 2, 2, 2, 2, 3, 3]


def test_multi_report_interval_count(ising):
    report = commands.multi_report(ising, 1e-9, 4)
    assert report.passed
    assert report.n == 4
    assert report.mu_n == pytest.approx(64.0)
