"""Differential forms and vector fields with expression coefficients.

A ``Form`` of degree p on m variables maps strictly increasing multi-indices
to coefficient expressions; an absent index is a zero coefficient. Forms are
tagged with the space they live on so that ambient and chart forms are never
combined by accident.
"""

from __future__ import annotations

from collections.abc import Callable, Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from enum import StrEnum

import numpy as np

from calculus.errors import FormMismatchError
from calculus.expr import (
    ONE,
    ZERO,
    Expr,
    Number,
    Points,
    add,
    as_expr,
    evaluate_batch,
    is_zero,
    mul,
    neg,
)

MultiIndex = tuple[int, ...]


class Space(StrEnum):
    AMBIENT = "ambient"
    CHART = "chart"


def permutation_sign(indices: Sequence[int]) -> int:
    """Sign of the permutation sorting ``indices`` (distinct entries assumed)."""
    sign = 1
    items = list(indices)
    for i in range(len(items)):
        for j in range(i + 1, len(items)):
            if items[i] > items[j]:
                sign = -sign
    return sign


def canonical_index(indices: Sequence[int]) -> tuple[int, MultiIndex]:
    """Return (sign, sorted index); sign is 0 when an index repeats."""
    if len(set(indices)) != len(indices):
        return 0, ()
    return permutation_sign(indices), tuple(sorted(indices))


def complement(indices: MultiIndex, dim: int) -> MultiIndex:
    present = set(indices)
    return tuple(k for k in range(dim) if k not in present)


@dataclass(frozen=True, eq=False)
class Form:
    degree: int
    dim: int
    space: Space
    terms: Mapping[MultiIndex, Expr] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.degree < 0:
            msg = f"form degree must be non-negative, got {self.degree}"
            raise FormMismatchError(msg)
        for index in self.terms:
            if len(index) != self.degree:
                msg = f"index {index} does not have length {self.degree}"
                raise FormMismatchError(msg)
            if any(a >= b for a, b in zip(index, index[1:], strict=False)):
                msg = f"index {index} is not strictly increasing"
                raise FormMismatchError(msg)
            if index and (index[0] < 0 or index[-1] >= self.dim):
                msg = f"index {index} out of range for dimension {self.dim}"
                raise FormMismatchError(msg)

    @classmethod
    def zero(cls, degree: int, dim: int, space: Space) -> Form:
        return cls(degree, dim, space, {})

    @classmethod
    def scalar(cls, value: Expr | Number, dim: int, space: Space) -> Form:
        value = as_expr(value)
        return cls(0, dim, space, {} if is_zero(value) else {(): value})

    @classmethod
    def basis(
        cls,
        indices: Sequence[int],
        dim: int,
        space: Space,
        coeff: Expr | Number = ONE,
    ) -> Form:
        """Coordinate monomial coeff·dy^{i1}∧…∧dy^{ip}, in any index order."""
        return cls.canonicalize(len(indices), dim, space, [(indices, as_expr(coeff))])

    @classmethod
    def canonicalize(
        cls,
        degree: int,
        dim: int,
        space: Space,
        raw: Iterable[tuple[Sequence[int], Expr]],
    ) -> Form:
        """Sort every index with its permutation sign, drop repeats, sum duplicates."""
        collected: dict[MultiIndex, list[Expr]] = {}
        for indices, coeff in raw:
            if len(indices) != degree:
                msg = f"raw index {tuple(indices)} does not have length {degree}"
                raise FormMismatchError(msg)
            sign, index = canonical_index(indices)
            if sign == 0 or is_zero(coeff):
                continue
            if index and (index[0] < 0 or index[-1] >= dim):
                msg = f"index {index} out of range for dimension {dim}"
                raise FormMismatchError(msg)
            collected.setdefault(index, []).append(coeff if sign > 0 else neg(coeff))
        terms = {}
        for index, parts in collected.items():
            total = add(*parts)
            if not is_zero(total):
                terms[index] = total
        return cls(degree, dim, space, terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, indices: Sequence[int]) -> Expr:
        sign, index = canonical_index(indices)
        if sign == 0:
            return ZERO
        coeff = self.terms.get(index, ZERO)
        return coeff if sign > 0 else neg(coeff)

    def check_compatible(self, other: Form, *, same_degree: bool = True) -> None:
        if self.dim != other.dim or self.space != other.space:
            msg = (
                f"cannot combine {self.space} form on {self.dim} variables with "
                f"{other.space} form on {other.dim} variables"
            )
            raise FormMismatchError(msg)
        if same_degree and self.degree != other.degree:
            msg = f"degree mismatch: {self.degree} vs {other.degree}"
            raise FormMismatchError(msg)

    def add_scale(self, other: Form, ca: Number = 1.0, cb: Number = 1.0) -> Form:
        """Linear combination ca·self + cb·other."""
        self.check_compatible(other)
        raw = [(index, mul(as_expr(ca), coeff)) for index, coeff in self.terms.items()]
        raw += [(index, mul(as_expr(cb), coeff)) for index, coeff in other.terms.items()]
        return Form.canonicalize(self.degree, self.dim, self.space, raw)

    def scale_by(self, factor: Expr | Number) -> Form:
        """Multiply every coefficient by a scalar field or number."""
        factor = as_expr(factor)
        raw = [(index, mul(factor, coeff)) for index, coeff in self.terms.items()]
        return Form.canonicalize(self.degree, self.dim, self.space, raw)

    def map_coefficients(
        self,
        fn: Callable[[Expr], Expr],
        *,
        dim: int | None = None,
        space: Space | None = None,
    ) -> Form:
        """Apply ``fn`` to every coefficient, optionally retagging the result."""
        raw = [(index, fn(coeff)) for index, coeff in self.terms.items()]
        return Form.canonicalize(
            self.degree,
            self.dim if dim is None else dim,
            self.space if space is None else space,
            raw,
        )

    def __add__(self, other: Form) -> Form:
        return self.add_scale(other)

    def __sub__(self, other: Form) -> Form:
        return self.add_scale(other, 1.0, -1.0)

    def __neg__(self) -> Form:
        return self.scale_by(-1.0)

    def __mul__(self, factor: Expr | Number) -> Form:
        return self.scale_by(factor)

    __rmul__ = __mul__

    def evaluate(self, points: Points) -> dict[MultiIndex, np.ndarray]:
        """Coefficient values at every point, keyed by multi-index."""
        indices = list(self.terms)
        values = evaluate_batch([self.terms[index] for index in indices], points, dim=self.dim)
        return {index: values[row] for row, index in enumerate(indices)}

    def __repr__(self) -> str:
        body = " + ".join(f"[{coeff!r}]d{list(index)}" for index, coeff in self.terms.items())
        return f"Form(p={self.degree}, m={self.dim}, {self.space}: {body or '0'})"


@dataclass(frozen=True, eq=False)
class VectorField:
    dim: int
    components: tuple[Expr, ...]
    space: Space

    def __post_init__(self) -> None:
        if len(self.components) != self.dim:
            msg = f"vector field needs {self.dim} components, got {len(self.components)}"
            raise FormMismatchError(msg)

    @classmethod
    def from_components(cls, components: Sequence[Expr | Number], space: Space) -> VectorField:
        return cls(len(components), tuple(as_expr(c) for c in components), space)

    @classmethod
    def coordinate(cls, k: int, dim: int, space: Space) -> VectorField:
        """The coordinate vector field ∂_k."""
        return cls(dim, tuple(ONE if j == k else ZERO for j in range(dim)), space)

    def apply(self, function: Expr) -> Expr:
        """Directional derivative v(f) = v^k ∂_k f."""
        return add(
            *(
                mul(component, function.diff(k))
                for k, component in enumerate(self.components)
                if not is_zero(component) and k in function.free_vars
            )
        )

    def bracket(self, other: VectorField) -> VectorField:
        """Lie bracket [u, v]^k = u(v^k) − v(u^k)."""
        self.check_compatible(other)
        return VectorField(
            self.dim,
            tuple(
                add(self.apply(v_k), neg(other.apply(u_k)))
                for u_k, v_k in zip(self.components, other.components, strict=True)
            ),
            self.space,
        )

    def scale_by(self, factor: Expr | Number) -> VectorField:
        factor = as_expr(factor)
        return VectorField(self.dim, tuple(mul(factor, c) for c in self.components), self.space)

    def __add__(self, other: VectorField) -> VectorField:
        self.check_compatible(other)
        return VectorField(
            self.dim,
            tuple(add(a, b) for a, b in zip(self.components, other.components, strict=True)),
            self.space,
        )

    def __sub__(self, other: VectorField) -> VectorField:
        return self + other.scale_by(-1.0)

    def check_compatible(self, other: Form | VectorField) -> None:
        if self.dim != other.dim or self.space != other.space:
            msg = (
                f"vector field ({self.space}, {self.dim}) does not match "
                f"({other.space}, {other.dim})"
            )
            raise FormMismatchError(msg)

    def evaluate(self, points: Points) -> np.ndarray:
        """Component values, shape (dim, len(points))."""
        return evaluate_batch(list(self.components), points, dim=self.dim)
