"""Tests for the ambient geometry: signatures, radial fields, splitting and homogenisation."""

from __future__ import annotations

import numpy as np
import pytest

from calculus.errors import GeometryError
from calculus.expr import evaluate_batch, var
from calculus.forms import Form, Space
from calculus.operators import ext_d, interior_vec, wedge
from calculus.polynomials import random_form, random_seed_form
from geometry.ambient import (
    Case,
    Geometry,
    GeometrySpec,
    example_scalar_box,
    homogeneity_defect,
    homogenize,
    split,
)
from geometry.chart import GraphChart, ambient_array, off_sigma_points
from verify.residuals import compare_forms, vanishing


def _cone_points(geo: Geometry, rng: np.random.Generator) -> np.ndarray:
    chart = GraphChart(geo)
    return off_sigma_points(chart.sample_points(8, rng), rng)


class TestGeometry:
    @pytest.mark.parametrize(
        ("case", "diagonal"),
        [
            (Case.DS, (1.0, -1.0, -1.0)),
            (Case.ADS, (1.0, -1.0, 1.0)),
            (Case.SPHERE, (1.0, 1.0, 1.0)),
        ],
    )
    def test_signature(self, case: Case, diagonal: tuple[float, ...]) -> None:
        geo = Geometry(case, 2)
        assert geo.diagonal == diagonal
        assert geo.eta_nn == diagonal[-1]
        assert geo.eta_nn * geo.sgn_ambient * geo.sgn_sigma == 1

    def test_case_coerced_from_string(self) -> None:
        assert Geometry("ads", 3).case is Case.ADS

    def test_label(self) -> None:
        assert Geometry(Case.SPHERE, 3).label == "sphere-n3"

    @pytest.mark.parametrize(
        ("case", "n", "hubble"),
        [("flrw", 2, 1.0), (Case.DS, 0, 1.0), (Case.DS, 5, 1.0), (Case.DS, 2, 0.0)],
    )
    def test_invalid_geometry(self, case: str, n: int, hubble: float) -> None:
        with pytest.raises(GeometryError):
            Geometry(case, n, hubble)

    def test_spec_round_trip(self) -> None:
        spec = GeometrySpec(case="ds", n=3, H=0.5)
        geo = Geometry.from_spec(spec)
        assert geo.to_spec() == spec


class TestRadialFields:
    def test_h_equals_H_on_sigma(self) -> None:
        geo = Geometry(Case.DS, 2, 2.0)
        ys = ambient_array(GraphChart(geo).sample_points(5, 3))
        np.testing.assert_allclose(evaluate_batch([geo.radial.h], ys)[0], 2.0)

    def test_normal_is_unit_with_constraint_sign(self, geo2: Geometry, rng) -> None:
        ys = _cone_points(geo2, rng)
        normal = geo2.radial.normal
        norm = evaluate_batch([geo2.metric.pair(normal, normal)], ys)[0]
        np.testing.assert_allclose(norm, geo2.eta_nn, rtol=1e-12)

    def test_conormal_is_dual_to_normal(self, geo2: Geometry, rng) -> None:
        ys = _cone_points(geo2, rng)
        contraction = interior_vec(geo2.radial.normal, geo2.radial.conormal)
        np.testing.assert_allclose(contraction.evaluate(ys)[()], 1.0, rtol=1e-12)


class TestSplit:
    def test_parts_sum_and_transversality(self, geo2: Geometry, rng) -> None:
        ys = _cone_points(geo2, rng)
        alpha = random_form(rng, 2, geo2.dim)
        parallel, perp = split(alpha, geo2)
        assert compare_forms(parallel + perp, alpha, ys).max_residual < 1e-12
        transverse = vanishing(interior_vec(geo2.radial.normal, perp), ys, extra=[alpha])
        assert transverse.max_residual < 1e-9 * max(transverse.scale, 1.0)

    def test_conormal_is_closed(self, geo2: Geometry, rng) -> None:
        ys = _cone_points(geo2, rng)
        conormal = geo2.radial.conormal
        closed = vanishing(ext_d(conormal), ys, extra=[conormal])
        assert closed.max_residual < 1e-9 * max(closed.scale, 1.0)

    def test_longitudinal_part_is_killed_by_conormal(self, geo2: Geometry, rng) -> None:
        ys = _cone_points(geo2, rng)
        alpha = random_form(rng, 2, geo2.dim)
        parallel, _ = split(alpha, geo2)
        product = vanishing(wedge(geo2.radial.conormal, parallel), ys, extra=[parallel])
        assert product.max_residual < 1e-9 * max(product.scale, 1.0)

    @pytest.mark.parametrize("degree", [1, 2])
    def test_split_is_idempotent(self, geo2: Geometry, rng, degree: int) -> None:
        ys = _cone_points(geo2, rng)
        parallel, perp = split(random_form(rng, degree, geo2.dim), geo2)
        again_parallel, lost_perp = split(parallel, geo2)
        lost_parallel, again_perp = split(perp, geo2)
        for part, same in ((again_parallel, parallel), (again_perp, perp)):
            comparison = compare_forms(part, same, ys)
            assert comparison.max_residual < 1e-9 * max(comparison.scale, 1.0)
        for leak, whole in ((lost_perp, parallel), (lost_parallel, perp)):
            comparison = vanishing(leak, ys, extra=[whole])
            assert comparison.max_residual < 1e-9 * max(comparison.scale, 1.0)

    def test_conormal_is_longitudinal(self, geo2: Geometry, rng) -> None:
        ys = _cone_points(geo2, rng)
        conormal = geo2.radial.conormal
        parallel, perp = split(conormal, geo2)
        same = compare_forms(parallel, conormal, ys)
        assert same.max_residual < 1e-9 * max(same.scale, 1.0)
        rest = vanishing(perp, ys, extra=[conormal])
        assert rest.max_residual < 1e-9 * max(rest.scale, 1.0)

    def test_scalar_is_transverse(self) -> None:
        geo = Geometry(Case.SPHERE, 2)
        phi = Form.scalar(var(0), 3, Space.AMBIENT)
        parallel, perp = split(phi, geo)
        assert parallel.is_zero
        assert perp is phi

    def test_rejects_chart_form(self) -> None:
        geo = Geometry(Case.SPHERE, 2)
        with pytest.raises(GeometryError):
            split(Form.basis((0,), 2, Space.CHART), geo)


class TestHomogenize:
    @pytest.mark.parametrize("s", [-2, -1, 0, 1, 2])
    @pytest.mark.parametrize("degree", [0, 1, 2])
    def test_extension_is_homogeneous_and_transverse(
        self, geo2: Geometry, rng, degree: int, s: int
    ) -> None:
        ys = _cone_points(geo2, rng)
        beta = homogenize(random_seed_form(rng, degree, geo2.dim), s, geo2)
        defect = vanishing(homogeneity_defect(beta, s, geo2), ys, extra=[beta])
        assert defect.max_residual < 1e-9 * max(defect.scale, 1.0)
        if degree > 0:
            normal = vanishing(interior_vec(geo2.radial.normal, beta), ys, extra=[beta])
            assert normal.max_residual < 1e-9 * max(normal.scale, 1.0)

    def test_rejects_inhomogeneous_seed(self) -> None:
        geo = Geometry(Case.DS, 2)
        seed = Form.basis((0,), 3, Space.AMBIENT, var(0) + 1)
        with pytest.raises(GeometryError):
            homogenize(seed, 0, geo)

    def test_rejects_fractional_power(self) -> None:
        geo = Geometry(Case.DS, 2)
        seed = Form.basis((0,), 3, Space.AMBIENT, var(1))
        with pytest.raises(GeometryError):
            homogenize(seed, 0.5, geo)

    def test_zero_seed_passes_through(self) -> None:
        geo = Geometry(Case.DS, 2)
        zero = Form.zero(1, 3, Space.AMBIENT)
        assert homogenize(zero, 1, geo) is zero


class TestFlatExamples:
    def test_scalar_box_needs_scalar(self) -> None:
        geo = Geometry(Case.SPHERE, 2)
        with pytest.raises(GeometryError):
            example_scalar_box(Form.basis((0,), 3, Space.AMBIENT), geo)
