"""Homogeneously extended orthonormal frame adapted to Σ.

Tangent vectors ∂_μ y of the graph chart are orthonormalised with η on Σ
(timelike direction first), then their ambient components are extended off Σ
by composing with the ray projection x^μ = (h/H) y^μ. The extended components
are 0-homogeneous, so the frame vectors satisfy [D, e_A] = -e_A.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np
import structlog

from calculus.errors import FrameError
from calculus.expr import (
    Expr,
    Substitution,
    add,
    const,
    evaluate_batch,
    is_zero,
    mul,
    neg,
    power,
    sqrt,
    var,
)
from calculus.forms import Form, Space, VectorField
from calculus.operators import wedge
from geometry.chart import GraphChart, chart_array

logger = structlog.get_logger()

PROBE_POINTS = 16
DEGENERACY_FLOOR = 1e-10


@dataclass(frozen=True, eq=False)
class OrthoFrame:
    chart: GraphChart
    vectors: tuple[VectorField, ...]
    coframe: tuple[Form, ...]
    signs: tuple[float, ...]

    @property
    def n(self) -> int:
        return self.chart.n

    def monomial(self, indices: tuple[int, ...]) -> Form:
        """e^{μ1} ∧ … ∧ e^{μt}; the empty index gives the constant 1."""
        dim = self.chart.geo.dim
        result = Form.scalar(1.0, dim, Space.AMBIENT)
        for index in indices:
            result = wedge(result, self.coframe[index])
        return result

    def monomials(self, degree: int) -> list[tuple[int, ...]]:
        """Index sets of the tangential coframe monomials of the given degree."""
        return list(combinations(range(self.n), degree))


def _pair(eta: tuple[float, ...], u: tuple[Expr, ...], v: tuple[Expr, ...]) -> Expr:
    return add(
        *(
            mul(const(eta[a]), u[a], v[a])
            for a in range(len(eta))
            if not is_zero(u[a]) and not is_zero(v[a])
        )
    )


def build_frame(chart: GraphChart) -> OrthoFrame:
    geo = chart.geo
    eta = geo.diagonal
    probe = chart_array(chart.sample_points(PROBE_POINTS, seed=0))
    tangents = [tuple(row[mu] for row in chart.jacobian) for mu in range(chart.n)]

    basis: list[tuple[Expr, ...]] = []
    for mu, tangent in enumerate(tangents):
        v = tangent
        for nu, e_nu in enumerate(basis):
            # e_nu is normalised with η(e_nu, e_nu) = eta[nu]
            coeff = mul(const(eta[nu]), _pair(eta, tangent, e_nu))
            v = tuple(add(v_a, neg(mul(coeff, e_a))) for v_a, e_a in zip(v, e_nu, strict=True))
        norm2 = _pair(eta, v, v)
        values = evaluate_batch([norm2], probe)[0]
        if np.any(np.abs(values) < DEGENERACY_FLOOR) or np.any(np.sign(values) != eta[mu]):
            msg = (
                f"Gram-Schmidt step {mu}: η(v, v) has range [{values.min():.3g}, "
                f"{values.max():.3g}] but sign {eta[mu]:+g} is required"
            )
            raise FrameError(msg)
        length = sqrt(mul(const(eta[mu]), norm2))
        basis.append(tuple(mul(v_a, power(length, -1)) for v_a in v))

    if chart.orientation < 0:
        basis[-1] = tuple(neg(c) for c in basis[-1])

    ray = Substitution(
        [mul(const(1.0 / geo.H), geo.radial.h, var(mu)) for mu in range(chart.n)]
    )
    vectors = [VectorField(geo.dim, tuple(ray(c) for c in e), Space.AMBIENT) for e in basis]
    vectors.append(geo.radial.normal)

    coframe = [
        Form.canonicalize(
            1,
            geo.dim,
            Space.AMBIENT,
            [((b,), mul(const(eta[a] * eta[b]), vec.components[b])) for b in range(geo.dim)],
        )
        for a, vec in enumerate(vectors[:-1])
    ]
    coframe.append(geo.radial.conormal)
    logger.debug("frame.built", geometry=geo.label, branch=chart.branch)
    return OrthoFrame(chart, tuple(vectors), tuple(coframe), eta)


def apply_oneform(lam: Form, v: VectorField) -> Expr:
    """λ(v) = λ_a v^a."""
    return add(*(mul(coeff, v.components[a]) for (a,), coeff in lam.terms.items()))


def structure_constant(frame: OrthoFrame, c: int, a: int, b: int) -> Expr:
    """c^C_{AB} defined by [e_A, e_B] = c^C_{AB} e_C."""
    return apply_oneform(frame.coframe[c], frame.vectors[a].bracket(frame.vectors[b]))


def vector_homogeneity_defect(frame: OrthoFrame, a: int) -> VectorField:
    """[D, e_A] + e_A, which vanishes for vectors homogeneous of degree -1."""
    dil = frame.chart.geo.radial.dilation
    return dil.bracket(frame.vectors[a]) + frame.vectors[a]
