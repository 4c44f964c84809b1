"""Tests for the core algebra identities on flat and induced metrics."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from calculus.forms import Space
from calculus.metric import MetricField
from geometry.chart import GraphChart, chart_array
from verify.algebra import IDENTITIES, core_algebra
from verify.residuals import Tolerance

SAMPLE = np.array([[0.3, -0.4, 0.7], [-0.8, 0.1, 0.5], [0.6, 0.9, -0.2], [0.0, 0.2, -0.1]])


class TestFlatMetric:
    @pytest.mark.parametrize(
        "entries", [[1.0, 1.0, 1.0], [1.0, -1.0, -1.0], [1.0, -1.0, 1.0]]
    )
    def test_all_identities(self, entries: list[float], rng, tolerance) -> None:
        metric = MetricField.diagonal(entries, Space.AMBIENT)
        reports = core_algebra(metric, SAMPLE, tolerance, rng, label="flat")
        assert [r.identity for r in reports] == [f"algebra_{name}" for name in IDENTITIES]
        for report in reports:
            assert report.passed, (report.identity, report.component_residuals)
            assert report.max_residual < 1e-9

    @settings(max_examples=10, deadline=None)
    @given(st.integers(min_value=0, max_value=2**16))
    def test_random_seeds(self, seed: int) -> None:
        metric = MetricField.diagonal([1.0, -1.0, -1.0, -1.0], Space.AMBIENT)
        rng = np.random.default_rng(seed)
        points = rng.uniform(-1.0, 1.0, size=(3, 4))
        reports = core_algebra(metric, points, Tolerance(), rng, label="flat4", forms_per_degree=1)
        assert all(r.passed for r in reports)


class TestInducedMetric:
    def test_all_identities(self, chart2: GraphChart, points2, rng, tolerance) -> None:
        reports = core_algebra(
            chart2.metric,
            chart_array(points2),
            tolerance,
            rng,
            label=chart2.geo.label,
            orientation=chart2.orientation,
        )
        for report in reports:
            assert report.passed, (report.identity, report.component_residuals)
