"""Configuration for verification runs: defaults, environment, JSON file and flags."""

from __future__ import annotations

import json
from enum import StrEnum
from pathlib import Path
from typing import Any

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings

from calculus.errors import CodecError
from geometry.ambient import Case
from geometry.chart import ChartSpec
from verify.theorems import MUTATIONS


class Suite(StrEnum):
    THEOREMS = "theorems"
    PROPS = "props"
    EXAMPLES = "examples"
    ALGEBRA = "algebra"
    ALL = "all"


SUITE_ORDER = (Suite.ALGEBRA, Suite.THEOREMS, Suite.PROPS, Suite.EXAMPLES)


class SuiteConfig(BaseSettings):
    """Verification run configuration.

    Precedence: CLI flags > JSON config file > FORMS_* env vars > defaults.
    Flags and file values arrive as constructor arguments (see ``load_config``).
    """

    model_config = {"env_prefix": "FORMS_", "extra": "ignore"}

    geometries: list[Case] = Field(default_factory=lambda: list(Case))
    n: list[int] = Field(default_factory=lambda: [2, 3])
    H: float = Field(default=1.0, gt=0.0)
    degrees: list[int] | None = None
    homogeneities: list[int] = Field(default_factory=lambda: [-1, 0, 1])
    points: int = Field(default=20, ge=1)
    seed: int = 42
    rel_tol: float = Field(default=1e-8, gt=0.0)
    abs_floor: float = Field(default=1e-10, gt=0.0)
    box_half_width: float = Field(default=0.5, gt=0.0)
    floor_factor: float = Field(default=0.1, gt=0.0)
    branch: int = 1
    suites: list[Suite] = Field(default_factory=lambda: [Suite.ALL])
    forms_per_degree: int = Field(default=2, ge=1)
    monomials_per_degree: int = Field(default=2, ge=1)
    report: Path | None = None
    mutations: list[str] = Field(default_factory=list)
    json_logs: bool = False
    log_level: str = "info"

    @field_validator("n")
    @classmethod
    def _check_n(cls, value: list[int]) -> list[int]:
        for n in value:
            if not 2 <= n <= 4:
                msg = f"n must be between 2 and 4, got {n}"
                raise ValueError(msg)
        return value

    @field_validator("degrees")
    @classmethod
    def _check_degrees(cls, value: list[int] | None) -> list[int] | None:
        if value is not None and any(p < 0 for p in value):
            raise ValueError("degrees must be non-negative")
        return value

    @field_validator("branch")
    @classmethod
    def _check_branch(cls, value: int) -> int:
        if value not in (1, -1):
            msg = f"branch must be 1 or -1, got {value}"
            raise ValueError(msg)
        return value

    @field_validator("mutations")
    @classmethod
    def _check_mutations(cls, value: list[str]) -> list[str]:
        unknown = sorted(set(value) - set(MUTATIONS))
        if unknown:
            msg = f"unknown mutation hooks {unknown}; valid: {', '.join(MUTATIONS)}"
            raise ValueError(msg)
        return value

    def selected_suites(self) -> list[Suite]:
        """Suites to run, in execution order, with ``all`` expanded."""
        chosen = set(self.suites)
        if Suite.ALL in chosen:
            return list(SUITE_ORDER)
        return [suite for suite in SUITE_ORDER if suite in chosen]

    def box(self, n: int) -> list[tuple[float, float]]:
        return [(-self.box_half_width, self.box_half_width)] * n

    def chart_spec(self, n: int) -> ChartSpec:
        """Chart parameters for an n-dimensional hypersurface."""
        return ChartSpec(branch=self.branch, box=self.box(n), floor_factor=self.floor_factor)


def read_config_file(path: Path) -> dict[str, Any]:
    """Load a JSON config file mirroring SuiteConfig's fields."""
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        msg = f"config file {path} is not valid JSON: {exc}"
        raise CodecError(msg) from exc
    if not isinstance(data, dict):
        msg = f"config file {path} must contain a JSON object"
        raise CodecError(msg)
    return data


def load_config(
    overrides: dict[str, Any] | None = None,
    config_file: Path | None = None,
) -> SuiteConfig:
    """Merge file values and explicit overrides; unset (None) overrides are ignored."""
    values: dict[str, Any] = {}
    if config_file is not None:
        values.update(read_config_file(config_file))
    for key, value in (overrides or {}).items():
        if value is not None:
            values[key] = value
    return SuiteConfig(**values)
