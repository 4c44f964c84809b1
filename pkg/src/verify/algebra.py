"""Core exterior-algebra identities on random polynomial forms, flat and chart metrics."""

from __future__ import annotations

import numpy as np
import structlog

from calculus.expr import Expr
from calculus.forms import Form, Space, VectorField
from calculus.metric import MetricField
from calculus.operators import (
    codifferential,
    creator,
    ext_d,
    hodge,
    hodge_inv,
    interior_oneform,
    interior_vec,
    lie_derivative,
)
from calculus.polynomials import random_form, random_polynomial
from verify.residuals import ReportBuilder, Tolerance, compare_forms, vanishing
from verify.result import ResidualReport

logger = structlog.get_logger()

IDENTITIES = (
    "d_squared",
    "delta_squared",
    "double_star",
    "star_inverse",
    "pairing",
    "star_interior",
    "key_lemma",
    "cartan_scalar",
)


def _vector(rng: np.random.Generator, dim: int, space: Space) -> VectorField:
    return VectorField.from_components(
        [random_polynomial(rng, dim, max_degree=1, terms=2) for _ in range(dim)], space
    )


def _scalar(value: Expr, dim: int, space: Space) -> Form:
    return Form.scalar(value, dim, space)


def core_algebra(
    metric: MetricField,
    points: np.ndarray,
    tolerance: Tolerance,
    rng: np.random.Generator,
    *,
    label: str,
    orientation: int = 1,
    forms_per_degree: int = 2,
) -> list[ResidualReport]:
    """One report per identity; components per degree and sample."""
    m = metric.dim
    space = metric.space
    builders = {
        name: ReportBuilder(f"algebra_{name}", "algebra", label, m, tolerance, len(points))
        for name in IDENTITIES
    }

    def star(form: Form) -> Form:
        return hodge(form, metric, orientation)

    def delta(form: Form) -> Form:
        return codifferential(form, metric, orientation)

    for p in range(m + 1):
        for k in range(forms_per_degree):
            tag = f"p{p}#{k}"
            a = random_form(rng, p, m, space, max_degree=2, terms=2)
            u = _vector(rng, m, space)
            v = _vector(rng, m, space)
            phi = random_polynomial(rng, m, max_degree=2, terms=3)

            da = ext_d(a)
            builders["d_squared"].add(tag, vanishing(ext_d(da), points, extra=[da]))
            if p >= 2:
                delta_a = delta(a)
                builders["delta_squared"].add(
                    tag, vanishing(delta(delta_a), points, extra=[delta_a])
                )
            sign = metric.sign * (-1) ** (p * (m - p))
            builders["double_star"].add(
                tag, compare_forms(star(star(a)), a.scale_by(float(sign)), points)
            )
            builders["star_inverse"].add(
                tag, compare_forms(hodge_inv(star(a), metric, orientation), a, points)
            )

            paired = interior_vec(u, creator(v, a, metric))
            if p > 0:
                paired = paired + creator(v, interior_vec(u, a), metric)
            expected = a.scale_by(metric.pair(u, v))
            builders["pairing"].add(tag, compare_forms(paired, expected, points))

            if p > 0:
                lhs = star(interior_vec(v, a))
                rhs = creator(v, star(a), metric).scale_by(-((-1.0) ** p))
                builders["star_interior"].add(f"{tag}:i", compare_forms(lhs, rhs, points))
            if p < m:
                lhs = star(creator(v, a, metric))
                rhs = interior_vec(v, star(a)).scale_by((-1.0) ** p)
                builders["star_interior"].add(f"{tag}:j", compare_forms(lhs, rhs, points))

            if p > 0:
                dphi = ext_d(_scalar(phi, m, space))
                lemma = delta(a.scale_by(phi)) - delta(a).scale_by(phi)
                lemma = lemma + interior_oneform(dphi, a, metric)
                builders["key_lemma"].add(tag, vanishing(lemma, points, extra=[delta(a)]))
            else:
                scalar = _scalar(phi, m, space)
                builders["cartan_scalar"].add(
                    tag,
                    compare_forms(
                        lie_derivative(u, scalar), _scalar(u.apply(phi), m, space), points
                    ),
                )
    reports = [builder.build() for builder in builders.values()]
    logger.debug("algebra.checked", metric=label, reports=len(reports))
    return reports
