"""Pointwise comparison of forms and assembly of residual reports."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from calculus.errors import ArityError
from calculus.forms import Form
from verify.result import ResidualReport


@dataclass(frozen=True)
class Tolerance:
    rel: float = 1e-8
    abs_floor: float = 1e-10

    def bound(self, scale: float) -> float:
        return self.rel * max(scale, 1.0) + self.abs_floor


@dataclass(frozen=True)
class Comparison:
    max_residual: float
    mean_residual: float
    scale: float


def _magnitude(form: Form, points: np.ndarray) -> float:
    if form.is_zero:
        return 0.0
    return float(max(np.max(np.abs(values)) for values in form.evaluate(points).values()))


def compare_forms(
    lhs: Form,
    rhs: Form,
    points: np.ndarray,
    extra: Sequence[Form] = (),
) -> Comparison:
    """Max/mean over points of the largest component of lhs - rhs.

    The scale is the largest component magnitude among lhs, rhs and ``extra``
    (the individual terms that were summed), so cancellations inside a sum do
    not shrink the tolerance. Every form must live on the coordinates of
    ``points``.
    """
    lhs.check_compatible(rhs)
    for term in extra:
        lhs.check_compatible(term, same_degree=False)
    points = np.atleast_2d(np.asarray(points, dtype=float))
    if points.shape[1] != lhs.dim:
        msg = (
            f"{lhs.space} forms on {lhs.dim} variables compared at "
            f"{points.shape[1]}-coordinate points"
        )
        raise ArityError(msg)
    diff = lhs - rhs
    count = len(points)
    if diff.is_zero:
        per_point = np.zeros(count)
    else:
        per_point = np.max(np.abs(np.stack(list(diff.evaluate(points).values()))), axis=0)
    scale = max(_magnitude(f, points) for f in (lhs, rhs, *extra))
    return Comparison(
        max_residual=float(per_point.max(initial=0.0)),
        mean_residual=float(per_point.mean()) if count else 0.0,
        scale=scale,
    )


def vanishing(form: Form, points: np.ndarray, extra: Sequence[Form] = ()) -> Comparison:
    """Compare ``form`` against zero."""
    return compare_forms(form, Form.zero(form.degree, form.dim, form.space), points, extra)


@dataclass
class ReportBuilder:
    """Collects named comparisons and turns them into a ResidualReport."""

    identity: str
    suite: str
    geometry: str
    n: int
    tolerance: Tolerance
    points: int
    degree: int | None = None
    homogeneity: float | None = None
    components: dict[str, Comparison] = field(default_factory=dict)
    informational: dict[str, float] = field(default_factory=dict)

    def add(self, name: str, comparison: Comparison) -> Comparison:
        self.components[name] = comparison
        return comparison

    def build(
        self,
        *,
        gating: bool = True,
        adjudicated_sign: int | None = None,
        note: str = "",
    ) -> ResidualReport:
        comparisons = list(self.components.values())
        max_residual = max((c.max_residual for c in comparisons), default=0.0)
        mean_residual = (
            float(np.mean([c.mean_residual for c in comparisons])) if comparisons else 0.0
        )
        scale = max((c.scale for c in comparisons), default=0.0)
        bound = self.tolerance.bound(scale)
        return ResidualReport(
            identity=self.identity,
            suite=self.suite,
            geometry=self.geometry,
            n=self.n,
            degree=self.degree,
            homogeneity=self.homogeneity,
            points=self.points,
            component_residuals={name: c.max_residual for name, c in self.components.items()},
            max_residual=max_residual,
            mean_residual=mean_residual,
            tolerance=bound,
            passed=max_residual <= bound,
            adjudicated_sign=adjudicated_sign,
            informational=dict(self.informational),
            gating=gating,
            note=note,
        )
