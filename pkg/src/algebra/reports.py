"""Report models shared by every command."""

from typing import Any, Optional

from pydantic import BaseModel, Field


class CheckResult(BaseModel):
    """Outcome of a single named check."""
    name: str
    passed: bool
    detail: str = ""
    lhs: Optional[float] = None
    rhs: Optional[float] = None
    residual: Optional[float] = None
    counterexample: Optional[list[str]] = None


class Report(BaseModel):
    """Machine-readable record emitted by the CLI and the API."""
    command: str
    subject: str
    passed: bool
    entries: list[CheckResult] = Field(default_factory=list)
    data: dict[str, Any] = Field(default_factory=dict)
    seed: Optional[int] = None

    @classmethod
    def from_entries(
        cls,
        command: str,
        subject: str,
        entries: list[CheckResult],
        data: Optional[dict[str, Any]] = None,
        seed: Optional[int] = None,
        **fields: Any,
    ) -> "Report":
        """
        Build a report whose pass flag is the conjunction of its entries.

        Raises:
            TypeError when a keyword is not a declared field of the report class
        """
        unknown = sorted(set(fields) - set(cls.model_fields))
        if unknown:
            raise TypeError(f"{cls.__name__} has no field(s) {unknown}")
        return cls(
            command=command,
            subject=subject,
            passed=all(entry.passed for entry in entries),
            entries=entries,
            data=data or {},
            seed=seed,
            **fields,
        )


def check(
    name: str,
    lhs: float,
    rhs: float,
    tolerance: float,
    detail: str = "",
) -> CheckResult:
    """Compare two real numbers and wrap the outcome as a CheckResult."""
    residual = abs(float(lhs) - float(rhs))
    return CheckResult(
        name=name,
        passed=residual < tolerance,
        detail=detail,
        lhs=float(lhs),
        rhs=float(rhs),
        residual=residual,
    )
