"""Graph charts on Σ, the pullback m*, and the intrinsic operators driven by g_Σ."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Literal

import numpy as np
import structlog
from pydantic import BaseModel, Field

from calculus.errors import GeometryError, SamplingError
from calculus.expr import (
    Expr,
    Substitution,
    add,
    const,
    evaluate_batch,
    is_zero,
    mul,
    neg,
    sqrt,
    var,
)
from calculus.forms import Form, MultiIndex, Space
from calculus.metric import MetricField
from calculus.operators import codifferential, ext_d, hodge, interior_oneform, laplace_de_rham
from geometry.ambient import Geometry

logger = structlog.get_logger()

MAX_SAMPLE_BATCHES = 50


class ChartSpec(BaseModel):
    branch: Literal[1, -1] = 1
    box: list[tuple[float, float]] | None = None
    floor_factor: float = Field(default=0.1, gt=0.0)


@dataclass(frozen=True)
class SigmaPoint:
    x: tuple[float, ...]
    y: tuple[float, ...]


def chart_array(points: Sequence[SigmaPoint]) -> np.ndarray:
    return np.array([p.x for p in points], dtype=float)


def ambient_array(points: Sequence[SigmaPoint]) -> np.ndarray:
    return np.array([p.y for p in points], dtype=float)


class GraphChart:
    """Σ as the graph y^n = branch·sqrt(q(x)) over the first n ambient coordinates."""

    def __init__(
        self,
        geo: Geometry,
        branch: int = 1,
        box: Sequence[tuple[float, float]] | None = None,
        floor_factor: float = 0.1,
    ) -> None:
        if branch not in (1, -1):
            msg = f"branch must be +1 or -1, got {branch}"
            raise GeometryError(msg)
        self.geo = geo
        self.n = geo.n
        self.branch = branch
        box = [(-0.5, 0.5)] * geo.n if box is None else [tuple(b) for b in box]
        if len(box) != geo.n or any(lo >= hi for lo, hi in box):
            msg = f"chart box must have {geo.n} increasing intervals, got {box}"
            raise GeometryError(msg)
        self.box: tuple[tuple[float, float], ...] = tuple(box)
        self.floor = (floor_factor / geo.H) ** 2
        # (y^n)^2 = H^{-2} - η^{nn} Σ_μ η_μμ (x^μ)^2
        self.q = add(
            const(geo.H**-2),
            *(mul(const(-geo.eta_nn * geo.diagonal[mu]), var(mu), var(mu)) for mu in range(geo.n)),
        )
        self.embedding: tuple[Expr, ...] = (
            *(var(mu) for mu in range(geo.n)),
            mul(const(branch), sqrt(self.q)),
        )
        self._substitution = Substitution(self.embedding)
        self._jacobian_minors: dict[tuple[MultiIndex, MultiIndex], Expr] = {}

    @classmethod
    def from_spec(cls, geo: Geometry, spec: ChartSpec) -> GraphChart:
        return cls(geo, spec.branch, spec.box, spec.floor_factor)

    @cached_property
    def jacobian(self) -> tuple[tuple[Expr, ...], ...]:
        """J[A][μ] = ∂y^A/∂x^μ."""
        return tuple(
            tuple(component.diff(mu) for mu in range(self.n)) for component in self.embedding
        )

    @cached_property
    def metric(self) -> MetricField:
        """Induced metric g_μν = η_AB J^A_μ J^B_ν."""
        eta = self.geo.diagonal
        rows: list[list[Expr]] = [[const(0.0)] * self.n for _ in range(self.n)]
        for mu in range(self.n):
            for nu in range(mu, self.n):
                entry = add(
                    *(
                        mul(const(eta[a]), self.jacobian[a][mu], self.jacobian[a][nu])
                        for a in range(self.geo.dim)
                        if not is_zero(self.jacobian[a][mu]) and not is_zero(self.jacobian[a][nu])
                    )
                )
                rows[mu][nu] = rows[nu][mu] = entry
        return MetricField(rows, Space.CHART, sign=self.geo.sgn_sigma)

    @cached_property
    def orientation(self) -> int:
        """Sign of det[∂_0 y, …, ∂_{n-1} y, e_n] at the box centre."""
        centre = [[(lo + hi) / 2.0 for lo, hi in self.box]]
        if not self.in_domain(np.array(centre))[0]:
            msg = f"chart box centre {centre[0]} lies outside the domain"
            raise SamplingError(msg)
        flat = [entry for row in self.jacobian for entry in row]
        jac = evaluate_batch(flat, centre)[:, 0].reshape(self.geo.dim, self.n)
        y = evaluate_batch(list(self.embedding), centre)[:, 0]
        frame = np.column_stack([jac, self.geo.H * y])
        return 1 if np.linalg.det(frame) > 0 else -1

    def in_domain(self, xs: np.ndarray) -> np.ndarray:
        return evaluate_batch([self.q], xs)[0] >= self.floor

    def embed(self, xs: np.ndarray) -> np.ndarray:
        """Ambient images, shape (len(xs), n+1)."""
        return evaluate_batch(list(self.embedding), xs).T

    def jacobian_minor(self, rows: MultiIndex, cols: MultiIndex) -> Expr:
        key = (rows, cols)
        cached = self._jacobian_minors.get(key)
        if cached is not None:
            return cached
        if not rows:
            result: Expr = const(1.0)
        else:
            terms = []
            for j, col in enumerate(cols):
                entry = self.jacobian[rows[0]][col]
                if is_zero(entry):
                    continue
                sub = self.jacobian_minor(rows[1:], cols[:j] + cols[j + 1 :])
                if is_zero(sub):
                    continue
                term = mul(entry, sub)
                terms.append(term if j % 2 == 0 else neg(term))
            result = add(*terms)
        self._jacobian_minors[key] = result
        return result

    def pullback(self, a: Form) -> Form:
        """m*α: compose coefficients with the embedding and contract with Jacobian minors."""
        if a.space is not Space.AMBIENT or a.dim != self.geo.dim:
            msg = f"pullback needs an ambient form on {self.geo.dim} variables"
            raise GeometryError(msg)
        if a.degree > self.n:
            return Form.zero(a.degree, self.n, Space.CHART)
        targets = list(combinations(range(self.n), a.degree))
        raw = []
        for index, coeff in a.terms.items():
            composed = self._substitution(coeff)
            for target in targets:
                minor = self.jacobian_minor(index, target)
                if not is_zero(minor):
                    raw.append((target, mul(composed, minor)))
        return Form.canonicalize(a.degree, self.n, Space.CHART, raw)

    def check_chart(self, b: Form) -> None:
        if b.space is not Space.CHART or b.dim != self.n:
            msg = f"expected a chart form on {self.n} variables, got {b.space}/{b.dim}"
            raise GeometryError(msg)

    def intrinsic_d(self, b: Form) -> Form:
        self.check_chart(b)
        return ext_d(b)

    def intrinsic_delta(self, b: Form) -> Form:
        self.check_chart(b)
        return codifferential(b, self.metric, self.orientation)

    def intrinsic_box(self, b: Form) -> Form:
        self.check_chart(b)
        return laplace_de_rham(b, self.metric, self.orientation)

    def intrinsic_star(self, b: Form) -> Form:
        self.check_chart(b)
        return hodge(b, self.metric, self.orientation)

    def intrinsic_interior(self, lam: Form, b: Form) -> Form:
        self.check_chart(b)
        return interior_oneform(lam, b, self.metric)

    def curvature_constant(self, degree: int) -> float:
        """η^{nn} H² a(a-n), the Weitzenböck shift on a-forms."""
        return self.geo.eta_nn * self.geo.H**2 * degree * (degree - self.n)

    def laplace_beltrami_sigma(self, b: Form) -> Form:
        """Δ_Σ = □_Σ − η^{nn}H²a(a−n)."""
        box = self.intrinsic_box(b)
        shift = self.curvature_constant(b.degree)
        if shift == 0.0:
            return box
        return box.add_scale(b, 1.0, -shift)

    def sample_points(self, count: int, seed: int | np.random.Generator) -> list[SigmaPoint]:
        """Uniform points of the chart box inside the domain, deterministic per seed."""
        if count <= 0:
            msg = f"sample count must be positive, got {count}"
            raise SamplingError(msg)
        rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
        lows = np.array([lo for lo, _ in self.box])
        highs = np.array([hi for _, hi in self.box])
        batch = max(4 * count, 64)
        kept: list[np.ndarray] = []
        total = 0
        for attempt in range(MAX_SAMPLE_BATCHES):
            xs = rng.uniform(lows, highs, size=(batch, self.n))
            good = xs[self.in_domain(xs)]
            kept.append(good)
            total += len(good)
            if total >= count:
                break
            logger.debug("chart.sample.retry", attempt=attempt, kept=total, wanted=count)
        else:
            msg = (
                f"only {total} of {count} points of box {list(self.box)} satisfy "
                f"q(x) >= {self.floor:g} after {MAX_SAMPLE_BATCHES} batches"
            )
            raise SamplingError(msg)
        xs = np.concatenate(kept)[:count]
        ys = self.embed(xs)
        return [
            SigmaPoint(tuple(float(v) for v in x), tuple(float(v) for v in y))
            for x, y in zip(xs, ys, strict=True)
        ]


def laplace_beltrami_ambient(a: Form, geo: Geometry) -> Form:
    """Δ_{n+1} on flat ambient space, which is □_{n+1}."""
    geo.check_ambient(a)
    return laplace_de_rham(a, geo.metric)


def off_sigma_points(
    points: Sequence[SigmaPoint],
    rng: np.random.Generator,
    low: float = 0.6,
    high: float = 1.6,
) -> np.ndarray:
    """Radial rescalings λy of Σ points with λ uniform in [low, high]."""
    ys = ambient_array(points)
    scales = rng.uniform(low, high, size=(len(ys), 1))
    return ys * scales
