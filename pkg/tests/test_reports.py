import pytest

from src.algebra.multi_interval import IndexLedger
from src.algebra.reports import CheckResult, Report, check


def test_check_uses_absolute_residual():
    result = check("identity", 1.0 + 1e-12, 1.0, 1e-9, detail="x = 1")
    assert result.passed
    assert result.residual < 1e-11
    assert not check("identity", 1.1, 1.0, 1e-9).passed


def test_report_passes_only_when_every_entry_passes():
    entries = [CheckResult(name="a", passed=True), CheckResult(name="b", passed=False)]
    assert not Report.from_entries("validate", "x", entries).passed
    assert Report.from_entries("validate", "x", entries[:1]).passed
    assert Report.from_entries("validate", "x", []).passed


def test_report_schema_round_trips_through_json():
    report = Report.from_entries("dims", "ising", [CheckResult(name="a", passed=True, lhs=1.0)], data={"k": [1, 2]}, seed=3)
    assert Report.model_validate_json(report.model_dump_json()) == report


def test_from_entries_rejects_undeclared_fields():
    with pytest.raises(TypeError, match="grading_order"):
        Report.from_entries("index", "ising", [], grading_order=2)


def test_from_entries_fills_declared_subclass_fields():
    ledger = IndexLedger.from_entries("multi", "ising", [], n=3, mu_n=16.0)
    assert ledger.n == 3
    assert ledger.mu_n == 16.0
