"""Seeded random polynomial fields and forms used as test inputs."""

from __future__ import annotations

from itertools import combinations, combinations_with_replacement

import numpy as np

from calculus.expr import Expr, add, const, mul, power, var
from calculus.forms import Form, Space


def _monomials(dim: int, degree: int) -> list[tuple[int, ...]]:
    return list(combinations_with_replacement(range(dim), degree))


def _monomial_expr(coeff: float, factors: tuple[int, ...]) -> Expr:
    parts = [power(var(k), factors.count(k)) for k in sorted(set(factors))]
    return mul(const(coeff), *parts)


def random_polynomial(
    rng: np.random.Generator,
    dim: int,
    max_degree: int = 3,
    terms: int = 4,
) -> Expr:
    """Sum of ``terms`` distinct monomials of degree <= max_degree, coefficients in [-1, 1]."""
    pool = [m for degree in range(max_degree + 1) for m in _monomials(dim, degree)]
    return _draw(rng, pool, terms)


def random_homogeneous_polynomial(
    rng: np.random.Generator,
    dim: int,
    degree: int,
    terms: int = 3,
) -> Expr:
    return _draw(rng, _monomials(dim, degree), terms)


def _draw(rng: np.random.Generator, pool: list[tuple[int, ...]], terms: int) -> Expr:
    picks = rng.choice(len(pool), size=min(terms, len(pool)), replace=False)
    coeffs = rng.uniform(-1.0, 1.0, size=len(picks))
    monomials = (pool[int(i)] for i in picks)
    return add(*(_monomial_expr(float(c), m) for c, m in zip(coeffs, monomials, strict=True)))


def random_form(
    rng: np.random.Generator,
    degree: int,
    dim: int,
    space: Space = Space.AMBIENT,
    max_degree: int = 3,
    terms: int = 3,
) -> Form:
    """Polynomial-coefficient form with a random coefficient on every basis index."""
    raw = [
        (index, random_polynomial(rng, dim, max_degree, terms))
        for index in combinations(range(dim), degree)
    ]
    return Form.canonicalize(degree, dim, space, raw)


def random_seed_form(
    rng: np.random.Generator,
    degree: int,
    dim: int,
    poly_degree: int = 1,
    terms: int = 2,
) -> Form:
    """Ambient form whose coefficients are homogeneous polynomials of one degree."""
    raw = [
        (index, random_homogeneous_polynomial(rng, dim, poly_degree, terms))
        for index in combinations(range(dim), degree)
    ]
    return Form.canonicalize(degree, dim, Space.AMBIENT, raw)
