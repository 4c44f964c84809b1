"""Closed-form □_Σ on 0-homogeneous transverse scalars and one-forms; sphere eigenvalue."""

from __future__ import annotations

from collections.abc import Sequence

from calculus.expr import const, mul, var
from calculus.forms import Form, Space
from calculus.operators import codifferential, interior_vec, laplace_de_rham, wedge
from geometry.ambient import (
    Case,
    example_oneform_box,
    example_scalar_box,
    homogeneity_defect,
    homogenize,
)
from geometry.chart import GraphChart, SigmaPoint, ambient_array, chart_array
from verify.residuals import ReportBuilder, Tolerance, compare_forms, vanishing
from verify.result import ResidualReport
from verify.theorems import ADJUDICATED_EQ5_SIGN


def _builder(
    identity: str,
    chart: GraphChart,
    points: Sequence[SigmaPoint],
    tolerance: Tolerance,
    degree: int,
) -> ReportBuilder:
    return ReportBuilder(
        identity, "examples", chart.geo.label, chart.n, tolerance, len(points), degree=degree
    )


def scalar_example(
    seed: Form,
    chart: GraphChart,
    points: Sequence[SigmaPoint],
    tolerance: Tolerance,
) -> ResidualReport:
    """□_Σφ = ∂^α∂_αφ for the 0-homogeneous extension φ of a scalar seed."""
    geo = chart.geo
    xs, ys = chart_array(points), ambient_array(points)
    phi = homogenize(seed, 0, geo)
    check = _builder("example_scalar_box", chart, points, tolerance, 0)
    flat = example_scalar_box(phi, geo)
    check.add(
        "box_sigma",
        compare_forms(chart.intrinsic_box(chart.pullback(phi)), chart.pullback(flat), xs),
    )
    check.informational["precondition_defect"] = vanishing(
        homogeneity_defect(phi, 0, geo), ys
    ).max_residual
    return check.build()


def oneform_example(
    seed: Form,
    chart: GraphChart,
    points: Sequence[SigmaPoint],
    tolerance: Tolerance,
) -> ResidualReport:
    """□_ΣA = {∂^α∂_αA_β + 2η^{nn}H²(∂^αA_α)y_β}dy^β, transverse A of degree 0.

    The bare weight 2H² (no η^{nn}) is evaluated as well and its transversality
    residual recorded; the two coincide on the sphere.
    """
    geo = chart.geo
    xs, ys = chart_array(points), ambient_array(points)
    field = homogenize(seed, 0, geo)
    check = _builder("example_oneform_box", chart, points, tolerance, 1)
    result = example_oneform_box(field, geo)
    e_n = geo.radial.normal
    check.add(
        "box_sigma",
        compare_forms(chart.intrinsic_box(chart.pullback(field)), chart.pullback(result), xs),
    )
    check.add("transverse", vanishing(interior_vec(e_n, result), ys, extra=[result]))
    box = laplace_de_rham(field, geo.metric)
    normal = wedge(geo.radial.conormal, codifferential(field, geo.metric))
    eq5 = box.add_scale(normal, 1.0, ADJUDICATED_EQ5_SIGN * 2.0 * geo.H)
    check.add("vs_eq5", compare_forms(result, eq5, ys, extra=[box, normal]))

    bare = example_oneform_box(field, geo, weight=1.0)
    check.informational["bare_weight_transverse"] = vanishing(
        interior_vec(e_n, bare), ys, extra=[bare]
    ).max_residual
    dil = geo.radial.dilation
    check.informational["precondition_y_dot_A"] = vanishing(
        interior_vec(dil, field), ys
    ).max_residual
    check.informational["precondition_defect"] = vanishing(
        homogeneity_defect(field, 0, geo), ys
    ).max_residual
    return check.build()


def sphere_eigen(
    chart: GraphChart,
    points: Sequence[SigmaPoint],
    tolerance: Tolerance,
) -> ResidualReport | None:
    """□_Σ(y^0 h) = −nH³ y^0 on the round sphere; None for the other cases."""
    geo = chart.geo
    if geo.case is not Case.SPHERE:
        return None
    xs = chart_array(points)
    check = _builder("sphere_eigen", chart, points, tolerance, 0)
    phi = Form.scalar(mul(var(0), geo.radial.h), geo.dim, Space.AMBIENT)
    expected = Form.scalar(mul(const(-geo.n * geo.H**3), var(0)), geo.n, Space.CHART)
    box_sigma = chart.intrinsic_box(chart.pullback(phi))
    check.add("box_sigma", compare_forms(box_sigma, expected, xs))
    flat = chart.pullback(example_scalar_box(phi, geo))
    check.add("flat_box", compare_forms(flat, expected, xs))
    return check.build()
