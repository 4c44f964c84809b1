"""Structured report models for verification runs."""

from __future__ import annotations

import json
from datetime import UTC, datetime
from pathlib import Path
from typing import Literal

from pydantic import AliasChoices, BaseModel, Field


class ResidualReport(BaseModel):
    """Residuals of one identity on one case; ``passed`` iff max_residual <= tolerance."""

    identity: str
    suite: Literal["theorems", "props", "examples", "algebra"]
    geometry: str
    n: int
    degree: int | None = None
    homogeneity: float | None = None
    points: int = 0
    component_residuals: dict[str, float] = Field(default_factory=dict)
    max_residual: float = 0.0
    mean_residual: float = 0.0
    tolerance: float = 0.0
    passed: bool = False
    adjudicated_sign: int | None = None
    informational: dict[str, float] = Field(default_factory=dict)
    gating: bool = True
    note: str = ""


class SuiteSummary(BaseModel):
    passed: int = Field(
        default=0, validation_alias=AliasChoices("passed", "pass"), serialization_alias="pass"
    )
    failed: int = Field(
        default=0, validation_alias=AliasChoices("failed", "fail"), serialization_alias="fail"
    )
    sign_eq5: int | None = None
    coeff_eq2: str | None = None


class SuiteMeta(BaseModel):
    generated_at: str = Field(default_factory=lambda: datetime.now(UTC).isoformat())


class SuiteReport(BaseModel):
    cases: list[ResidualReport] = Field(default_factory=list)
    summary: SuiteSummary = Field(default_factory=SuiteSummary)
    meta: SuiteMeta = Field(default_factory=SuiteMeta)

    @property
    def ok(self) -> bool:
        """True when every gating report passed."""
        return all(case.passed for case in self.cases if case.gating)


def summarize(
    cases: list[ResidualReport],
    sign_eq5: int | None = None,
    coeff_eq2: str | None = None,
) -> SuiteSummary:
    passed = sum(1 for case in cases if case.passed)
    return SuiteSummary(
        passed=passed,
        failed=len(cases) - passed,
        sign_eq5=sign_eq5,
        coeff_eq2=coeff_eq2,
    )


def render_report(report: SuiteReport) -> str:
    return json.dumps(report.model_dump(mode="json", by_alias=True), indent=2) + "\n"


def emit_report(report: SuiteReport, path: Path | str) -> None:
    """Write the report as JSON with a stable field order."""
    Path(path).write_text(render_report(report), encoding="utf-8")
