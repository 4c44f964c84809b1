"""Shared test fixtures for ambient-forms."""

from __future__ import annotations

from collections.abc import Iterator

import numpy as np
import pytest
import structlog

from calculus.forms import Space
from calculus.metric import MetricField
from geometry.ambient import Case, Geometry
from geometry.chart import GraphChart, SigmaPoint
from verify.residuals import Tolerance


@pytest.fixture
def rng() -> np.random.Generator:
    """Return a fixed-seed generator."""
    return np.random.default_rng(7)


@pytest.fixture
def tolerance() -> Tolerance:
    return Tolerance()


@pytest.fixture
def minkowski3() -> MetricField:
    """Return η = diag(+, −, −) on three ambient variables."""
    return MetricField.diagonal([1.0, -1.0, -1.0], Space.AMBIENT)


@pytest.fixture
def euclid3() -> MetricField:
    return MetricField.diagonal([1.0, 1.0, 1.0], Space.AMBIENT)


@pytest.fixture(params=list(Case), ids=lambda case: case.value)
def geo2(request: pytest.FixtureRequest) -> Geometry:
    """Every geometry case with a two-dimensional hypersurface."""
    return Geometry(request.param, 2)


@pytest.fixture
def chart2(geo2: Geometry) -> GraphChart:
    return GraphChart(geo2)


@pytest.fixture
def points2(chart2: GraphChart) -> list[SigmaPoint]:
    return chart2.sample_points(6, 11)


@pytest.fixture
def reset_logging() -> Iterator[None]:
    """Restore structlog defaults and drop bound context after the test."""
    yield
    structlog.contextvars.clear_contextvars()
    structlog.reset_defaults()
