"""Tests for the ambient-forms CLI."""

from __future__ import annotations

import json
from pathlib import Path

import pytest
from click.testing import Result
from typer.testing import CliRunner

from cli.main import app

runner = CliRunner()


def _eval(operator: str, form: Path, geometry: Path, points: Path) -> Result:
    args = ["--form", str(form), "--geometry", str(geometry), "--points", str(points)]
    return runner.invoke(app, ["eval", operator, *args])


def _write(path: Path, payload: object) -> Path:
    path.write_text(json.dumps(payload), encoding="utf-8")
    return path


@pytest.fixture
def eval_inputs(tmp_path: Path) -> tuple[Path, Path, Path]:
    form = {
        "degree": 1,
        "dim": 3,
        "space": "ambient",
        "terms": [{"indices": [0], "coeff": {"var": 1}}],
    }
    return (
        _write(tmp_path / "form.json", form),
        _write(tmp_path / "geometry.json", {"case": "sphere", "n": 2}),
        _write(tmp_path / "points.json", [[0.1, 0.2, 0.3], [0.4, -0.5, 0.6]]),
    )


class TestRun:
    def test_writes_report(self, tmp_path: Path) -> None:
        out = tmp_path / "report.json"
        result = runner.invoke(
            app,
            [
                "run",
                "--suite",
                "examples",
                "--geometry",
                "sphere",
                "--n",
                "2",
                "--points",
                "4",
                "--report",
                str(out),
                "--log-level",
                "error",
            ],
        )
        assert result.exit_code == 0
        payload = json.loads(out.read_text(encoding="utf-8"))
        assert set(payload) == {"cases", "summary", "meta"}
        assert payload["summary"]["fail"] == 0
        assert payload["summary"]["pass"] == len(payload["cases"])

    def test_empty_suite_list_from_config_file(self, tmp_path: Path) -> None:
        config = _write(tmp_path / "config.json", {"suites": []})
        out = tmp_path / "report.json"
        result = runner.invoke(
            app, ["run", "--config", str(config), "--report", str(out), "--log-level", "error"]
        )
        assert result.exit_code == 0
        assert json.loads(out.read_text(encoding="utf-8"))["cases"] == []

    def test_invalid_dimension_is_usage_error(self) -> None:
        result = runner.invoke(app, ["run", "--n", "7"])
        assert result.exit_code == 2
        assert "Usage error" in result.output

    def test_unknown_geometry_is_usage_error(self) -> None:
        result = runner.invoke(app, ["run", "--geometry", "torus"])
        assert result.exit_code == 2

    def test_malformed_config_file_is_usage_error(self, tmp_path: Path) -> None:
        bad = tmp_path / "config.json"
        bad.write_text("{not json", encoding="utf-8")
        result = runner.invoke(app, ["run", "--config", str(bad)])
        assert result.exit_code == 2

    @pytest.mark.slow
    def test_mutation_exits_nonzero(self, tmp_path: Path) -> None:
        result = runner.invoke(
            app,
            [
                "run",
                "--suite",
                "theorems",
                "--geometry",
                "ds",
                "--n",
                "3",
                "--degree",
                "1",
                "--homogeneity=0",
                "--points",
                "4",
                "--mutate",
                "eq3_lie",
                "--report",
                str(tmp_path / "report.json"),
                "--log-level",
                "error",
            ],
        )
        assert result.exit_code == 1
        assert "th1_box" in result.output


class TestCheck:
    def test_passes(self) -> None:
        result = runner.invoke(app, ["check", "--n", "2", "--points", "4"])
        assert result.exit_code == 0
        assert "PASS" in result.output
        assert "FAIL" not in result.output


class TestEval:
    def test_exterior_derivative(self, eval_inputs: tuple[Path, Path, Path]) -> None:
        form, geometry, points = eval_inputs
        result = _eval("d", form, geometry, points)
        assert result.exit_code == 0
        payload = json.loads(result.output)
        # d(y^1 dy^0) = -dy^0 ∧ dy^1
        assert payload["components"] == {"0,1": [-1.0, -1.0]}
        assert payload["form"]["degree"] == 2

    def test_codifferential(self, eval_inputs: tuple[Path, Path, Path]) -> None:
        form, geometry, points = eval_inputs
        result = _eval("delta", form, geometry, points)
        assert result.exit_code == 0
        # δ(y^1 dy^0) = -∂_0 y^1 = 0 on the Euclidean ambient space
        assert json.loads(result.output)["components"] == {}

    def test_unknown_operator(self, eval_inputs: tuple[Path, Path, Path]) -> None:
        form, geometry, points = eval_inputs
        result = _eval("curl", form, geometry, points)
        assert result.exit_code == 2
        assert "Unknown operator" in result.output

    def test_points_of_wrong_width_fail(
        self, eval_inputs: tuple[Path, Path, Path], tmp_path: Path
    ) -> None:
        form, geometry, _ = eval_inputs
        points = _write(tmp_path / "wide.json", [[0.1, 0.2, 0.3, 0.4]])
        result = _eval("d", form, geometry, points)
        assert result.exit_code == 1
        assert "ArityError" in result.output

    def test_dimension_mismatch_fails(self, tmp_path: Path) -> None:
        form = _write(tmp_path / "form.json", {"degree": 0, "dim": 5, "terms": []})
        geometry = _write(tmp_path / "geometry.json", {"case": "ds", "n": 2})
        points = _write(tmp_path / "points.json", [[0.0] * 5])
        result = _eval("star", form, geometry, points)
        assert result.exit_code == 1
