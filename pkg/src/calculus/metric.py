"""Metric fields with expression components.

Determinants, inverse components and minors of the inverse are built once as
expressions and cached on the metric, so every operator driven by the same
metric shares them (and their derivative caches).
"""

from __future__ import annotations

from collections.abc import Sequence
from functools import cached_property
from itertools import combinations

import numpy as np

from calculus.errors import DomainError, FormMismatchError, GeometryError
from calculus.expr import (
    Const,
    Expr,
    Number,
    Points,
    add,
    as_expr,
    div,
    evaluate_batch,
    is_zero,
    mul,
    neg,
    sqrt,
)
from calculus.forms import Form, MultiIndex, Space, VectorField, complement

MAX_DIM = 5


def _symmetric(a: Expr, b: Expr) -> bool:
    if a is b:
        return True
    return isinstance(a, Const) and isinstance(b, Const) and a.value == b.value


class MetricField:
    """Symmetric m×m metric with a determinant sign constant on its domain."""

    def __init__(
        self,
        components: Sequence[Sequence[Expr | Number]],
        space: Space,
        sign: int | None = None,
    ) -> None:
        dim = len(components)
        if dim == 0 or dim > MAX_DIM:
            msg = f"metric dimension must be in 1..{MAX_DIM}, got {dim}"
            raise GeometryError(msg)
        rows = tuple(tuple(as_expr(c) for c in row) for row in components)
        if any(len(row) != dim for row in rows):
            raise GeometryError("metric components must form a square array")
        for a in range(dim):
            for b in range(a + 1, dim):
                if not _symmetric(rows[a][b], rows[b][a]):
                    msg = f"metric is not symmetric at ({a}, {b})"
                    raise GeometryError(msg)
        self.dim = dim
        self.space = space
        self._g = rows
        self._minors: dict[tuple[MultiIndex, MultiIndex], Expr] = {}
        self._inverse_minors: dict[tuple[MultiIndex, MultiIndex], Expr] = {}
        self.is_constant = all(isinstance(c, Const) for row in rows for c in row)
        if sign is None:
            if not self.is_constant:
                raise GeometryError("the determinant sign of a non-constant metric must be given")
            value = float(np.linalg.det(np.array([[c.value for c in row] for row in rows])))
            if value == 0.0:
                raise DomainError("degenerate metric", "det g = 0")
            sign = 1 if value > 0 else -1
        if sign not in (1, -1):
            msg = f"metric sign must be +1 or -1, got {sign}"
            raise GeometryError(msg)
        self.sign = sign

    @classmethod
    def diagonal(cls, entries: Sequence[Number], space: Space) -> MetricField:
        dim = len(entries)
        return cls(
            [[entries[a] if a == b else 0.0 for b in range(dim)] for a in range(dim)],
            space,
        )

    def component(self, a: int, b: int) -> Expr:
        return self._g[a][b]

    def minor(self, rows: MultiIndex, cols: MultiIndex) -> Expr:
        """Determinant of g restricted to ``rows`` × ``cols`` (Laplace expansion)."""
        key = (rows, cols)
        cached = self._minors.get(key)
        if cached is not None:
            return cached
        if not rows:
            result: Expr = as_expr(1.0)
        else:
            head, rest = rows[0], rows[1:]
            terms = []
            for j, col in enumerate(cols):
                entry = self._g[head][col]
                if is_zero(entry):
                    continue
                sub = self.minor(rest, cols[:j] + cols[j + 1 :])
                if is_zero(sub):
                    continue
                term = mul(entry, sub)
                terms.append(term if j % 2 == 0 else neg(term))
            result = add(*terms)
        self._minors[key] = result
        return result

    @cached_property
    def det(self) -> Expr:
        full = tuple(range(self.dim))
        return self.minor(full, full)

    @cached_property
    def sqrt_abs_det(self) -> Expr:
        return sqrt(self.det if self.sign > 0 else neg(self.det))

    def inverse_minor(self, rows: MultiIndex, cols: MultiIndex) -> Expr:
        """Minor of the inverse metric, det(g^{-1}[rows, cols]).

        Uses the complementary-minor identity
        det(A^{-1}[I, K]) = (-1)^{ΣI+ΣK} det(A[K^c, I^c]) / det A.
        """
        key = (rows, cols)
        cached = self._inverse_minors.get(key)
        if cached is not None:
            return cached
        if not rows:
            result: Expr = as_expr(1.0)
        else:
            sub = self.minor(complement(cols, self.dim), complement(rows, self.dim))
            result = div(sub, self.det)
            if (sum(rows) + sum(cols)) % 2:
                result = neg(result)
        self._inverse_minors[key] = result
        return result

    def inverse(self, a: int, b: int) -> Expr:
        return self.inverse_minor((a,), (b,))

    def raise_indices(self, form: Form) -> dict[MultiIndex, Expr]:
        """Contravariant components α^I = Σ_K det(g^{-1}[I, K]) α_K over sorted I."""
        self.check_compatible(form)
        raised: dict[MultiIndex, Expr] = {}
        if form.degree > self.dim:
            return raised
        for upper in combinations(range(self.dim), form.degree):
            terms = []
            for lower, coeff in form.terms.items():
                factor = self.inverse_minor(upper, lower)
                if not is_zero(factor):
                    terms.append(mul(factor, coeff))
            total = add(*terms)
            if not is_zero(total):
                raised[upper] = total
        return raised

    def pair(self, u: VectorField, v: VectorField) -> Expr:
        """g(u, v) = g_ab u^a v^b."""
        terms = [
            mul(self._g[a][b], u.components[a], v.components[b])
            for a in range(self.dim)
            for b in range(self.dim)
            if not is_zero(self._g[a][b])
        ]
        return add(*terms)

    def pair_oneforms(self, lam: Form, mu: Form) -> Expr:
        """⟨λ, μ⟩ = g^{ab} λ_a μ_b."""
        if lam.degree != 1 or mu.degree != 1:
            raise FormMismatchError("pairing of one-forms needs two degree-1 forms")
        self.check_compatible(lam)
        self.check_compatible(mu)
        terms = []
        for (a,), la in lam.terms.items():
            for (b,), mb in mu.terms.items():
                factor = self.inverse(a, b)
                if not is_zero(factor):
                    terms.append(mul(factor, la, mb))
        return add(*terms)

    def check_compatible(self, item: Form | VectorField) -> None:
        if item.dim != self.dim or item.space != self.space:
            msg = (
                f"metric ({self.space}, {self.dim}) does not match "
                f"({item.space}, {item.dim})"
            )
            raise FormMismatchError(msg)

    def evaluate(self, points: Points) -> np.ndarray:
        """Component values, shape (len(points), dim, dim)."""
        flat = [self._g[a][b] for a in range(self.dim) for b in range(self.dim)]
        values = evaluate_batch(flat, points, dim=self.dim)
        return values.T.reshape(-1, self.dim, self.dim)

