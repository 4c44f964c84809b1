"""Ambient (A)dS and sphere geometry: η, h, D, e_n, e^n and the radial splitting."""

from __future__ import annotations

from dataclasses import dataclass
from enum import StrEnum
from functools import cached_property, reduce
from operator import mul as _times

from pydantic import BaseModel, Field

from calculus.errors import GeometryError
from calculus.expr import Expr, add, const, homogeneous_degree, mul, power, sqrt, var
from calculus.forms import Form, Space, VectorField
from calculus.metric import MAX_DIM, MetricField
from calculus.operators import dilation, interior_vec, lie_derivative, wedge


class Case(StrEnum):
    DS = "ds"
    ADS = "ads"
    SPHERE = "sphere"


class GeometrySpec(BaseModel):
    case: Case
    n: int = Field(ge=1, le=MAX_DIM - 1)
    H: float = Field(default=1.0, gt=0.0)


@dataclass(frozen=True)
class RadialData:
    """Radial fields of the ambient space on the cone σy² > 0."""

    sigma_y2: Expr
    h: Expr
    dilation: VectorField
    normal: VectorField
    conormal: Form


@dataclass(frozen=True)
class Geometry:
    case: Case
    n: int
    H: float = 1.0

    def __post_init__(self) -> None:
        try:
            object.__setattr__(self, "case", Case(self.case))
        except ValueError as exc:
            msg = f"unknown geometry case {self.case!r}"
            raise GeometryError(msg) from exc
        if not 1 <= self.n <= MAX_DIM - 1:
            msg = f"intrinsic dimension must be in 1..{MAX_DIM - 1}, got {self.n}"
            raise GeometryError(msg)
        if not self.H > 0:
            msg = f"curvature scale H must be positive, got {self.H}"
            raise GeometryError(msg)
        if self.eta_nn * self.sgn_ambient * self.sgn_sigma != 1:
            msg = f"signature bookkeeping failed for {self.case} n={self.n}"
            raise GeometryError(msg)

    @classmethod
    def from_spec(cls, spec: GeometrySpec) -> Geometry:
        return cls(spec.case, spec.n, spec.H)

    def to_spec(self) -> GeometrySpec:
        return GeometrySpec(case=self.case, n=self.n, H=self.H)

    @property
    def dim(self) -> int:
        return self.n + 1

    @property
    def label(self) -> str:
        return f"{self.case}-n{self.n}"

    @cached_property
    def diagonal(self) -> tuple[float, ...]:
        """Diagonal of η: diag(+,-,...,-,-ε), or the identity for the sphere."""
        if self.case is Case.SPHERE:
            return (1.0,) * self.dim
        epsilon = 1.0 if self.case is Case.DS else -1.0
        return (1.0,) + (-1.0,) * (self.n - 1) + (-epsilon,)

    @property
    def eta_nn(self) -> float:
        """η_nn, equal to η^{nn} and to the constraint sign σ."""
        return self.diagonal[-1]

    @property
    def sgn_ambient(self) -> int:
        return 1 if reduce(_times, self.diagonal, 1.0) > 0 else -1

    @property
    def sgn_sigma(self) -> int:
        if self.case is Case.SPHERE:
            return 1
        return -1 if (self.n - 1) % 2 else 1

    @cached_property
    def metric(self) -> MetricField:
        return MetricField.diagonal(self.diagonal, Space.AMBIENT)

    def lower(self, index: int) -> Expr:
        """y_A = η_AA y^A."""
        return mul(const(self.diagonal[index]), var(index))

    @cached_property
    def radial(self) -> RadialData:
        y2 = add(*(mul(self.lower(a), var(a)) for a in range(self.dim)))
        sigma_y2 = mul(const(self.eta_nn), y2)
        h = power(sqrt(sigma_y2), -1)
        dil = dilation(self.dim)
        # e^n = d(h^{-1}) = σ h y_β dy^β
        conormal = Form.canonicalize(
            1,
            self.dim,
            Space.AMBIENT,
            [((b,), mul(const(self.eta_nn), h, self.lower(b))) for b in range(self.dim)],
        )
        return RadialData(
            sigma_y2=sigma_y2,
            h=h,
            dilation=dil,
            normal=dil.scale_by(h),
            conormal=conormal,
        )

    def check_ambient(self, form: Form) -> None:
        if form.space is not Space.AMBIENT or form.dim != self.dim:
            msg = f"expected an ambient form on {self.dim} variables, got {form.space}/{form.dim}"
            raise GeometryError(msg)


def split(a: Form, geo: Geometry) -> tuple[Form, Form]:
    """Longitudinal and transverse parts: α_∥ = e^n∧i_n α, α_⊥ = α − α_∥."""
    geo.check_ambient(a)
    if a.degree == 0:
        return Form.zero(0, a.dim, a.space), a
    parallel = wedge(geo.radial.conormal, interior_vec(geo.radial.normal, a))
    return parallel, a - parallel


def homogeneity_defect(a: Form, s: float, geo: Geometry) -> Form:
    """ℒ_D α − s α; zero exactly when α is s-homogeneous."""
    geo.check_ambient(a)
    return lie_derivative(geo.radial.dilation, a).add_scale(a, 1.0, -s)


def homogenize(seed: Form, s: float, geo: Geometry) -> Form:
    """Transverse s-homogeneous extension (h/H)^{k+p-s} · seed_⊥.

    The seed's coefficients must all be homogeneous polynomials of one degree k.
    """
    geo.check_ambient(seed)
    if seed.is_zero:
        return seed
    degrees = {homogeneous_degree(coeff) for coeff in seed.terms.values()}
    if None in degrees or len(degrees) != 1:
        msg = f"seed coefficients must be homogeneous polynomials of one degree, got {degrees}"
        raise GeometryError(msg)
    exponent = degrees.pop() + seed.degree - s
    if float(exponent) != int(exponent):
        msg = f"homogeneity {s} leaves a non-integral power of h"
        raise GeometryError(msg)
    _, perp = split(seed, geo)
    return perp.scale_by(power(mul(const(1.0 / geo.H), geo.radial.h), int(exponent)))


def flat_box_scalar(phi: Expr, geo: Geometry) -> Expr:
    """∂^A∂_A φ with indices raised by η."""
    return add(
        *(
            mul(const(geo.diagonal[a]), phi.diff(a).diff(a))
            for a in range(geo.dim)
            if a in phi.free_vars
        )
    )


def example_scalar_box(phi: Form, geo: Geometry) -> Form:
    """Flat d'Alembertian ∂^α∂_α φ of a 0-homogeneous transverse scalar."""
    geo.check_ambient(phi)
    if phi.degree != 0:
        msg = f"expected a scalar, got a {phi.degree}-form"
        raise GeometryError(msg)
    return Form.scalar(flat_box_scalar(phi.coefficient(()), geo), geo.dim, Space.AMBIENT)


def divergence(a: Form, geo: Geometry) -> Expr:
    """∂^α A_α for an ambient one-form."""
    return add(
        *(
            mul(const(geo.diagonal[b]), coeff.diff(b))
            for (b,), coeff in a.terms.items()
            if b in coeff.free_vars
        )
    )


def example_oneform_box(a: Form, geo: Geometry, weight: float | None = None) -> Form:
    """{∂^α∂_α A_β + 2·weight·H²(∂^αA_α) y_β} dy^β.

    ``weight`` defaults to η^{nn}, the value that keeps the result transverse.
    """
    geo.check_ambient(a)
    if a.degree != 1:
        msg = f"expected a one-form, got a {a.degree}-form"
        raise GeometryError(msg)
    weight = geo.eta_nn if weight is None else weight
    div_a = divergence(a, geo)
    factor = const(2.0 * weight * geo.H**2)
    raw = [
        (
            (b,),
            add(flat_box_scalar(a.coefficient((b,)), geo), mul(factor, div_a, geo.lower(b))),
        )
        for b in range(geo.dim)
    ]
    return Form.canonicalize(1, geo.dim, Space.AMBIENT, raw)
