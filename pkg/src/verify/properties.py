"""Frame identities: orthonormality, holonomic coefficients and the basis properties.

Every basis property is checked on tangential coframe monomials
τ = e^{μ1}∧…∧e^{μt}, t = 0..n-1. Pulled-back statements are compared on chart
components at Σ points; ambient statements at radially rescaled points off Σ.
"""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np
import structlog

from calculus.expr import Expr, Number, const, mul
from calculus.forms import Form, Space
from calculus.operators import (
    codifferential,
    ext_d,
    hodge,
    interior_oneform,
    interior_vec,
    lie_derivative,
    wedge,
)
from calculus.polynomials import random_polynomial
from geometry.ambient import split
from geometry.chart import SigmaPoint, ambient_array, chart_array, off_sigma_points
from geometry.frame import OrthoFrame, structure_constant, vector_homogeneity_defect
from verify.residuals import ReportBuilder, Tolerance, compare_forms, vanishing
from verify.result import ResidualReport

logger = structlog.get_logger()

PROPERTIES = (
    "prop1",
    "prop2",
    "prop3",
    "prop3_weighted",
    "prop4",
    "prop4_weighted",
    "prop4_remark",
    "prop5",
    "prop6",
    "prop7",
    "prop8",
)


def _scalar(value: Expr | Number, dim: int) -> Form:
    return Form.scalar(value, dim, Space.AMBIENT)


def frame_residuals(
    frame: OrthoFrame,
    points: Sequence[SigmaPoint],
    tolerance: Tolerance,
    rng: np.random.Generator,
) -> list[ResidualReport]:
    """Orthonormality, agreement of e_n with hD, holonomic relations, vector homogeneity."""
    geo = frame.chart.geo
    dim, n = geo.dim, geo.n
    ys = ambient_array(points)
    off = off_sigma_points(points, rng)

    def builder(name: str) -> ReportBuilder:
        return ReportBuilder(name, "props", geo.label, n, tolerance, len(points))

    ortho = builder("frame_orthonormality")
    for a in range(dim):
        for b in range(a, dim):
            pairing = _scalar(geo.metric.pair(frame.vectors[a], frame.vectors[b]), dim)
            expected = _scalar(geo.diagonal[a] if a == b else 0.0, dim)
            ortho.add(f"eta({a},{b})", compare_forms(pairing, expected, off))
    normal = frame.vectors[n] - geo.radial.normal
    for k, component in enumerate(normal.components):
        ortho.add(f"e_n-hD[{k}]", vanishing(_scalar(component, dim), off))

    holo = builder("holonomic_coefficients")
    for a in range(dim):
        for b in range(a + 1, dim):
            value = _scalar(structure_constant(frame, n, a, b), dim)
            holo.add(f"c^n_{a}{b}", vanishing(value, ys))
    for mu in range(n):
        for nu in range(n):
            value = _scalar(structure_constant(frame, mu, nu, n), dim)
            expected = _scalar(geo.radial.h if mu == nu else 0.0, dim)
            holo.add(f"c^{mu}_{nu}n", compare_forms(value, expected, ys))
    for c in range(dim):
        forward = _scalar(structure_constant(frame, c, 0, 1), dim)
        backward = _scalar(structure_constant(frame, c, 1, 0), dim)
        holo.add(f"antisym^{c}_01", compare_forms(forward, -backward, ys))

    homog = builder("frame_vector_homogeneity")
    for a in range(dim):
        defect = vector_homogeneity_defect(frame, a)
        for k, component in enumerate(defect.components):
            homog.add(f"[D,e_{a}]+e_{a}[{k}]", vanishing(_scalar(component, dim), off))
    return [ortho.build(), holo.build(), homog.build()]


def verify_basis_properties(
    frame: OrthoFrame,
    points: Sequence[SigmaPoint],
    tolerance: Tolerance,
    rng: np.random.Generator,
    monomials_per_degree: int = 2,
) -> list[ResidualReport]:
    """One report per property and monomial degree t, one component per monomial check."""
    chart = frame.chart
    geo = chart.geo
    n, dim = geo.n, geo.dim
    eta = geo.metric
    eta_nn = geo.eta_nn
    h = geo.radial.h
    e_n = geo.radial.normal
    conormal = geo.radial.conormal
    xs = chart_array(points)
    off = off_sigma_points(points, rng)
    reports: list[ResidualReport] = []

    for t in range(n):
        candidates = frame.monomials(t)
        size = min(monomials_per_degree, len(candidates))
        picks = sorted(int(i) for i in rng.choice(len(candidates), size=size, replace=False))
        phi = random_polynomial(rng, dim, max_degree=2, terms=3)
        dphi = ext_d(_scalar(phi, dim))
        phi_sigma = chart.pullback(_scalar(phi, dim))
        d_phi_sigma = chart.intrinsic_d(phi_sigma)
        builders = {
            name: ReportBuilder(name, "props", geo.label, n, tolerance, len(points), degree=t)
            for name in PROPERTIES
        }
        sign_t = (-1.0) ** t
        sign_4 = -sign_t * eta_nn

        for pick in picks:
            indices = candidates[pick]
            label = "e^{" + ",".join(map(str, indices)) + "}"
            tau = frame.monomial(indices)
            tau_n = wedge(tau, conormal)
            tau_sigma = chart.pullback(tau)
            d_sigma_tau = chart.intrinsic_d(tau_sigma)
            d_tau = ext_d(tau)
            d_tau_n = ext_d(tau_n)

            check = builders["prop1"]
            check.add(f"{label}:pullback", compare_forms(chart.pullback(d_tau), d_sigma_tau, xs))
            longitudinal, _ = split(d_tau, geo)
            expected = tau_n.scale_by(mul(const(sign_t * t), h))
            check.add(f"{label}:longitudinal", compare_forms(longitudinal, expected, off))
            _, transverse = split(d_tau_n, geo)
            check.add(f"{label}:second_transverse", vanishing(transverse, off, extra=[d_tau_n]))
            pulled = chart.pullback(interior_vec(e_n, d_tau_n)).scale_by(-sign_t)
            check.add(f"{label}:second_pullback", compare_forms(pulled, d_sigma_tau, xs))

            check = builders["prop2"]
            star_tau_n = hodge(tau_n, eta)
            star_sigma = chart.intrinsic_star(tau_sigma).scale_by(eta_nn * (-1.0) ** (n - t))
            check.add(f"{label}:first", compare_forms(chart.pullback(star_tau_n), star_sigma, xs))
            star_tau = hodge(tau, eta)
            check.add(f"{label}:second", vanishing(chart.pullback(star_tau), xs))

            delta_tau = codifferential(tau, eta)
            builders["prop3"].add(
                label,
                compare_forms(chart.pullback(delta_tau), chart.intrinsic_delta(tau_sigma), xs),
            )
            phi_tau = tau.scale_by(phi)
            builders["prop3_weighted"].add(
                label,
                compare_forms(
                    chart.pullback(codifferential(phi_tau, eta)),
                    chart.intrinsic_delta(chart.pullback(phi_tau)),
                    xs,
                ),
            )

            delta_tau_n = codifferential(tau_n, eta)
            expected = tau_sigma.scale_by(sign_4 * geo.H * (n - t))
            builders["prop4"].add(label, compare_forms(chart.pullback(delta_tau_n), expected, xs))
            weight = mul(const(sign_4), e_n.apply(phi) + mul(const(geo.H * (n - t)), phi))
            builders["prop4_weighted"].add(
                label,
                compare_forms(
                    chart.pullback(codifferential(tau_n.scale_by(phi), eta)),
                    chart.pullback(tau.scale_by(weight)),
                    xs,
                ),
            )
            remark = tau.scale_by(mul(const(sign_4 * (n - t)), h))
            if t > 0:
                remark = remark + wedge(delta_tau, conormal)
            builders["prop4_remark"].add(label, compare_forms(delta_tau_n, remark, off))

            builders["prop5"].add(
                label, vanishing(interior_vec(e_n, star_tau_n), off, extra=[star_tau_n])
            )
            builders["prop6"].add(
                label, vanishing(interior_vec(e_n, delta_tau), off, extra=[delta_tau])
            )

            check = builders["prop7"]
            check.add(
                f"{label}:tau",
                compare_forms(lie_derivative(e_n, tau), tau.scale_by(mul(const(t), h)), off),
            )
            check.add(
                f"{label}:tau^e^n",
                compare_forms(lie_derivative(e_n, tau_n), tau_n.scale_by(mul(const(t), h)), off),
            )

            check = builders["prop8"]
            contracted_sigma = chart.intrinsic_interior(d_phi_sigma, tau_sigma)
            contracted = chart.pullback(interior_oneform(dphi, tau, eta))
            check.add(f"{label}:first", compare_forms(contracted, contracted_sigma, xs))
            contracted_n = interior_oneform(dphi, tau_n, eta)
            _, transverse = split(contracted_n, geo)
            expected = tau.scale_by(mul(const(sign_t * eta_nn), e_n.apply(phi)))
            check.add(f"{label}:second_transverse", compare_forms(transverse, expected, off))
            pulled = chart.pullback(interior_vec(e_n, contracted_n)).scale_by(-sign_t)
            check.add(f"{label}:second_pullback", compare_forms(pulled, contracted_sigma, xs))

        for name, check in builders.items():
            reports.append(check.build())
            logger.debug("props.checked", geometry=geo.label, identity=name, t=t)
    return reports
