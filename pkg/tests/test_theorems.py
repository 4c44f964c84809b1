"""Tests for the restriction and continuation evaluators."""

from __future__ import annotations

import pytest

from calculus.forms import Form, Space
from calculus.polynomials import random_form, random_seed_form
from geometry.ambient import Case, Geometry
from geometry.chart import GraphChart
from verify.residuals import Tolerance
from verify.theorems import (
    ADJUDICATED_EQ5_SIGN,
    EQ2_COEFFICIENTS,
    adjudicate_eq2,
    restriction_box_rhs,
    restriction_laplace_beltrami_rhs,
    th1_box,
    th1_box_dilation,
    th1_delta,
    th2_box,
    th2_delta,
    th3,
    th4,
)


def _failure(report) -> tuple:
    return report.identity, report.degree, report.homogeneity, report.component_residuals


class TestRestriction:
    @pytest.mark.parametrize("degree", [0, 1, 2, 3])
    def test_box_restriction(self, chart2, points2, rng, tolerance, degree: int) -> None:
        alpha = random_form(rng, degree, chart2.geo.dim)
        report = th1_box(alpha, chart2, points2, tolerance)
        assert report.passed, _failure(report)

    @pytest.mark.parametrize("degree", [1, 2, 3])
    def test_delta_restriction(self, chart2, points2, rng, tolerance, degree: int) -> None:
        alpha = random_form(rng, degree, chart2.geo.dim)
        report = th1_delta(alpha, chart2, points2, tolerance)
        assert report.passed, _failure(report)

    @pytest.mark.parametrize("degree", [0, 1, 2])
    def test_dilation_form_agrees(self, chart2, points2, rng, tolerance, degree: int) -> None:
        alpha = random_form(rng, degree, chart2.geo.dim)
        report = th1_box_dilation(alpha, chart2, points2, tolerance)
        assert report.passed, _failure(report)
        assert set(report.component_residuals) == {"vs_lhs", "vs_eq3"}

    @pytest.mark.parametrize("degree", [0, 1, 2, 3])
    def test_laplace_beltrami_restriction(
        self, chart2, points2, rng, tolerance, degree: int
    ) -> None:
        alpha = random_form(rng, degree, chart2.geo.dim)
        report = th3(alpha, chart2, points2, tolerance)
        assert report.passed, _failure(report)

    @pytest.mark.parametrize("degree", [0, 2])
    def test_laplace_beltrami_reduces_where_shift_vanishes(self, rng, degree: int) -> None:
        chart = GraphChart(Geometry(Case.SPHERE, 2))
        alpha = random_form(rng, degree, 3)
        lb, _ = restriction_laplace_beltrami_rhs(alpha, chart)
        box, _ = restriction_box_rhs(alpha, chart)
        xs = [[0.1, -0.2], [0.3, 0.05]]
        lb_values, box_values = lb.evaluate(xs), box.evaluate(xs)
        assert lb_values.keys() == box_values.keys()
        for index, values in lb_values.items():
            assert values.tolist() == box_values[index].tolist()

    def test_eq2_adjudication_picks_shifted_coefficient(self, chart2, points2, rng) -> None:
        alpha = random_form(rng, 2, chart2.geo.dim)
        chosen, reports = adjudicate_eq2(alpha, chart2, points2, Tolerance())
        assert chosen == EQ2_COEFFICIENTS[0]
        assert [r.identity for r in reports] == [f"th1_delta[{c}]" for c in EQ2_COEFFICIENTS]
        assert all(not r.gating for r in reports)


class TestMutations:
    @pytest.mark.parametrize("hook", ["eq3_lie2", "eq3_lie", "eq3_dinn"])
    def test_box_terms_are_load_bearing(self, hook: str, rng) -> None:
        chart = GraphChart(Geometry(Case.DS, 3))
        points = chart.sample_points(6, 4)
        alpha = random_form(rng, 1, 4)
        report = th1_box(alpha, chart, points, Tolerance(), mutations=[hook])
        assert not report.passed
        assert report.max_residual > 1e-3

    @pytest.mark.parametrize("hook", ["eq2_coeff", "eq2_sign"])
    def test_delta_terms_are_load_bearing(self, hook: str, chart2, points2, rng) -> None:
        alpha = random_form(rng, 2, chart2.geo.dim)
        report = th1_delta(alpha, chart2, points2, Tolerance(), mutations=[hook])
        assert report.max_residual > 1e-3

    def test_curvature_term_is_load_bearing(self, chart2, points2, rng) -> None:
        seed = random_seed_form(rng, 1, chart2.geo.dim)
        report = th2_box(seed, 2, chart2, points2, Tolerance(), mutations=["eq5_curv"])
        assert report.component_residuals["transverse"] > 1e-3

    def test_normal_sign_term_is_load_bearing(self, chart2, points2, rng) -> None:
        seed = random_seed_form(rng, 1, chart2.geo.dim)
        baseline = th2_box(seed, 1, chart2, points2, Tolerance())
        mutated = th2_box(seed, 1, chart2, points2, Tolerance(), mutations=["eq5_normal"])
        assert mutated.informational["ambient_signed"] > 1e-3
        assert mutated.adjudicated_sign == baseline.adjudicated_sign == ADJUDICATED_EQ5_SIGN


class TestContinuation:
    @pytest.mark.parametrize("s", [-2, -1, 0, 1, 2])
    @pytest.mark.parametrize("degree", [0, 1, 2])
    def test_delta_continuation(self, chart2, points2, rng, tolerance, degree, s) -> None:
        seed = random_seed_form(rng, degree, chart2.geo.dim)
        report = th2_delta(seed, s, chart2, points2, tolerance)
        assert report.passed, _failure(report)

    @pytest.mark.parametrize("s", [-1, 0, 1])
    @pytest.mark.parametrize("degree", [0, 1, 2])
    def test_box_continuation(self, chart2, points2, rng, tolerance, degree, s) -> None:
        seed = random_seed_form(rng, degree, chart2.geo.dim)
        report = th2_box(seed, s, chart2, points2, tolerance)
        assert report.passed, _failure(report)
        assert {"ambient_sign_+1", "ambient_sign_-1", "ambient_signed"} <= set(
            report.informational
        )

    def test_sign_adjudication(self, chart2, points2, rng, tolerance) -> None:
        seed = random_seed_form(rng, 1, chart2.geo.dim)
        report = th2_box(seed, 1, chart2, points2, tolerance)
        assert report.adjudicated_sign == ADJUDICATED_EQ5_SIGN
        assert report.informational["ambient_signed"] <= report.tolerance

    def test_scalar_seed_has_no_sign_to_adjudicate(self, chart2, points2, rng, tolerance) -> None:
        seed = random_seed_form(rng, 0, chart2.geo.dim)
        report = th2_box(seed, 1, chart2, points2, tolerance)
        assert report.adjudicated_sign is None

    @pytest.mark.parametrize("s", [-1, 0, 1])
    @pytest.mark.parametrize("degree", [0, 1, 2])
    def test_laplace_beltrami_continuation(
        self, chart2, points2, rng, tolerance, degree, s
    ) -> None:
        seed = random_seed_form(rng, degree, chart2.geo.dim)
        report = th4(seed, s, chart2, points2, tolerance)
        assert report.passed, _failure(report)

    @pytest.mark.parametrize("evaluator", [th2_box, th4], ids=["box", "laplace_beltrami"])
    def test_transverse_level_runs_on_chart_forms(
        self, evaluator, chart2, points2, rng, tolerance
    ) -> None:
        seed = random_seed_form(rng, 1, chart2.geo.dim)
        report = evaluator(seed, 0, chart2, points2, tolerance)
        assert report.component_residuals["transverse"] <= report.tolerance
        assert report.passed, _failure(report)

    def test_zero_seed(self, chart2, points2, tolerance) -> None:
        zero = Form.zero(1, chart2.geo.dim, Space.AMBIENT)
        assert th2_delta(zero, 0, chart2, points2, tolerance).passed
