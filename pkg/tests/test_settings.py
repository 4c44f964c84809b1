"""Tests for SuiteConfig defaults, validation and precedence."""

from __future__ import annotations

import json
from pathlib import Path

import pytest
from pydantic import ValidationError

from calculus.errors import CodecError
from config.settings import Suite, SuiteConfig, load_config
from geometry.ambient import Case, Geometry
from geometry.chart import GraphChart


class TestDefaults:
    def test_defaults(self) -> None:
        config = SuiteConfig()
        assert config.geometries == [Case.DS, Case.ADS, Case.SPHERE]
        assert config.n == [2, 3]
        assert config.H == 1.0
        assert config.homogeneities == [-1, 0, 1]
        assert config.points == 20
        assert config.seed == 42
        assert config.rel_tol == 1e-8
        assert config.abs_floor == 1e-10
        assert config.selected_suites() == [
            Suite.ALGEBRA,
            Suite.THEOREMS,
            Suite.PROPS,
            Suite.EXAMPLES,
        ]

    def test_box(self) -> None:
        assert SuiteConfig(box_half_width=0.3).box(2) == [(-0.3, 0.3), (-0.3, 0.3)]

    def test_chart_spec_carries_chart_settings(self) -> None:
        config = SuiteConfig(box_half_width=0.2, branch=-1, floor_factor=0.3)
        spec = config.chart_spec(3)
        assert spec.branch == -1
        assert spec.box == [(-0.2, 0.2)] * 3
        assert spec.floor_factor == 0.3
        chart = GraphChart.from_spec(Geometry(Case.DS, 3), spec)
        assert chart.box == ((-0.2, 0.2),) * 3
        assert all(point.y[-1] < 0 for point in chart.sample_points(4, 1))


class TestValidation:
    @pytest.mark.parametrize(
        "overrides",
        [
            {"n": [1]},
            {"n": [5]},
            {"H": 0.0},
            {"points": 0},
            {"rel_tol": -1e-8},
            {"abs_floor": 0.0},
            {"geometries": ["flrw"]},
            {"suites": ["everything"]},
            {"branch": 0},
            {"degrees": [-1]},
            {"mutations": ["eq9_sign"]},
        ],
    )
    def test_rejects_invalid_values(self, overrides: dict) -> None:
        with pytest.raises(ValidationError):
            SuiteConfig(**overrides)

    def test_suite_selection_order(self) -> None:
        config = SuiteConfig(suites=["examples", "theorems"])
        assert config.selected_suites() == [Suite.THEOREMS, Suite.EXAMPLES]

    def test_empty_suite_selector(self) -> None:
        assert SuiteConfig(suites=[]).selected_suites() == []


class TestPrecedence:
    def test_env_overrides_defaults(self, monkeypatch: pytest.MonkeyPatch) -> None:
        monkeypatch.setenv("FORMS_POINTS", "7")
        monkeypatch.setenv("FORMS_GEOMETRIES", '["sphere"]')
        config = load_config()
        assert config.points == 7
        assert config.geometries == [Case.SPHERE]

    def test_file_overrides_env(self, tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> None:
        monkeypatch.setenv("FORMS_REL_TOL", "1e-4")
        path = tmp_path / "config.json"
        path.write_text(json.dumps({"rel_tol": 1e-8, "n": [2]}), encoding="utf-8")
        config = load_config(config_file=path)
        assert config.rel_tol == 1e-8
        assert config.n == [2]

    def test_flags_override_file(self, tmp_path: Path) -> None:
        path = tmp_path / "config.json"
        path.write_text(json.dumps({"rel_tol": 1e-8}), encoding="utf-8")
        config = load_config({"rel_tol": 1e-6, "seed": None}, path)
        assert config.rel_tol == 1e-6
        assert config.seed == 42

    def test_invalid_file(self, tmp_path: Path) -> None:
        path = tmp_path / "config.json"
        path.write_text("[1, 2]", encoding="utf-8")
        with pytest.raises(CodecError):
            load_config(config_file=path)
        path.write_text("{not json", encoding="utf-8")
        with pytest.raises(CodecError):
            load_config(config_file=path)
