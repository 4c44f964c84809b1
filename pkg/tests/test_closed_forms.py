"""Tests for the closed-form □_Σ examples on transverse degree-zero fields."""

from __future__ import annotations

import pytest

from calculus.polynomials import random_seed_form
from geometry.ambient import Case, Geometry
from geometry.chart import GraphChart
from verify.closed_forms import oneform_example, scalar_example, sphere_eigen


class TestScalarExample:
    def test_box_matches_flat_dalembertian(self, chart2, points2, rng, tolerance) -> None:
        seed = random_seed_form(rng, 0, chart2.geo.dim)
        report = scalar_example(seed, chart2, points2, tolerance)
        assert report.passed, report.component_residuals
        assert report.informational["precondition_defect"] < 1e-9


class TestOneFormExample:
    def test_box_matches_closed_form(self, chart2, points2, rng, tolerance) -> None:
        seed = random_seed_form(rng, 1, chart2.geo.dim)
        report = oneform_example(seed, chart2, points2, tolerance)
        assert report.passed, report.component_residuals
        assert set(report.component_residuals) == {"box_sigma", "transverse", "vs_eq5"}

    def test_printed_weight_is_transverse_only_on_the_sphere(self, rng, tolerance) -> None:
        chart = GraphChart(Geometry(Case.SPHERE, 2))
        points = chart.sample_points(6, 8)
        report = oneform_example(random_seed_form(rng, 1, 3), chart, points, tolerance)
        assert report.informational["bare_weight_transverse"] <= report.tolerance


class TestSphereEigenvalue:
    @pytest.mark.parametrize("n", [2, 3])
    def test_eigenvalue(self, n: int, tolerance) -> None:
        chart = GraphChart(Geometry(Case.SPHERE, n))
        report = sphere_eigen(chart, chart.sample_points(8, 1), tolerance)
        assert report is not None
        assert report.passed, report.component_residuals
        assert report.max_residual < 1e-9

    def test_only_defined_on_the_sphere(self, tolerance) -> None:
        chart = GraphChart(Geometry(Case.DS, 2))
        assert sphere_eigen(chart, chart.sample_points(4, 1), tolerance) is None
