"""Exterior algebra and differential operators on forms.

Conventions:
  * (*α)_J = o · ε_{J^c J} · sqrt|det g| · α^{J^c}, so *1 = ω and *ω = sgn(g).
  * *^{-1} on a q-form is sgn(g)(-1)^{q(m-q)} *.
  * δ = (-1)^p *^{-1} d * on p-forms, □ = -(dδ + δd).
  * i_v and δ of a 0-form are the zero 0-form.
"""

from __future__ import annotations

from itertools import combinations

from calculus.errors import FormMismatchError
from calculus.expr import add, const, is_zero, mul, neg, var
from calculus.forms import Form, Space, VectorField, complement, permutation_sign
from calculus.metric import MetricField


def wedge(a: Form, b: Form) -> Form:
    a.check_compatible(b, same_degree=False)
    raw = []
    for left, ca in a.terms.items():
        for right, cb in b.terms.items():
            if set(left) & set(right):
                continue
            raw.append((left + right, mul(ca, cb)))
    return Form.canonicalize(a.degree + b.degree, a.dim, a.space, raw)


def interior_vec(v: VectorField, a: Form) -> Form:
    """Interior product (i_v α)_J = v^k α_{kJ}."""
    v.check_compatible(a)
    if a.degree == 0:
        return Form.zero(0, a.dim, a.space)
    raw = []
    for index, coeff in a.terms.items():
        for position, k in enumerate(index):
            component = v.components[k]
            if is_zero(component):
                continue
            term = mul(component, coeff)
            rest = index[:position] + index[position + 1 :]
            raw.append((rest, term if position % 2 == 0 else neg(term)))
    return Form.canonicalize(a.degree - 1, a.dim, a.space, raw)


def flat(v: VectorField, g: MetricField) -> Form:
    g.check_compatible(v)
    raw = []
    for a in range(g.dim):
        terms = [
            mul(g.component(a, b), v.components[b])
            for b in range(g.dim)
            if not is_zero(g.component(a, b))
        ]
        raw.append(((a,), add(*terms)))
    return Form.canonicalize(1, g.dim, v.space, raw)


def sharp(lam: Form, g: MetricField) -> VectorField:
    if lam.degree != 1:
        msg = f"sharp needs a one-form, got degree {lam.degree}"
        raise FormMismatchError(msg)
    g.check_compatible(lam)
    components = []
    for a in range(g.dim):
        terms = []
        for (b,), coeff in lam.terms.items():
            factor = g.inverse(a, b)
            if not is_zero(factor):
                terms.append(mul(factor, coeff))
        components.append(add(*terms))
    return VectorField(g.dim, tuple(components), lam.space)


def creator(v: VectorField, a: Form, g: MetricField) -> Form:
    """j_v α = (♭v) ∧ α."""
    return wedge(flat(v, g), a)


def interior_oneform(lam: Form, a: Form, g: MetricField) -> Form:
    """λ⌟α = i_{♯λ} α."""
    return interior_vec(sharp(lam, g), a)


def ext_d(a: Form) -> Form:
    raw = []
    for index, coeff in a.terms.items():
        present = set(index)
        for k in sorted(coeff.free_vars):
            if k >= a.dim:
                msg = f"coefficient uses x{k} but the form lives on {a.dim} variables"
                raise FormMismatchError(msg)
            if k in present:
                continue
            raw.append(((k, *index), coeff.diff(k)))
    return Form.canonicalize(a.degree + 1, a.dim, a.space, raw)


def hodge(a: Form, g: MetricField, orientation: int = 1) -> Form:
    g.check_compatible(a)
    if a.degree > a.dim:
        msg = f"Hodge star of a {a.degree}-form on {a.dim} variables"
        raise FormMismatchError(msg)
    if a.is_zero:
        return Form.zero(a.dim - a.degree, a.dim, a.space)
    raised = g.raise_indices(a)
    terms = {}
    for source, coeff in raised.items():
        target = complement(source, a.dim)
        sign = orientation * permutation_sign(source + target)
        terms[target] = mul(const(sign), g.sqrt_abs_det, coeff)
    return Form(a.dim - a.degree, a.dim, a.space, terms)


def hodge_inv(a: Form, g: MetricField, orientation: int = 1) -> Form:
    q = a.degree
    factor = g.sign * (-1) ** (q * (a.dim - q))
    result = hodge(a, g, orientation)
    return result if factor > 0 else -result


def codifferential(a: Form, g: MetricField, orientation: int = 1) -> Form:
    if a.degree == 0:
        return Form.zero(0, a.dim, a.space)
    if a.degree > a.dim:
        return Form.zero(a.degree - 1, a.dim, a.space)
    result = hodge_inv(ext_d(hodge(a, g, orientation)), g, orientation)
    return result if a.degree % 2 == 0 else -result


def laplace_de_rham(a: Form, g: MetricField, orientation: int = 1) -> Form:
    """□α = -(dδα + δdα)."""
    if a.degree > a.dim:
        return Form.zero(a.degree, a.dim, a.space)
    total = Form.zero(a.degree, a.dim, a.space)
    if a.degree >= 1:
        total = total + ext_d(codifferential(a, g, orientation))
    if a.degree < a.dim:
        total = total + codifferential(ext_d(a), g, orientation)
    return -total


def lie_derivative(v: VectorField, a: Form) -> Form:
    """Cartan formula ℒ_v = i_v d + d i_v."""
    result = interior_vec(v, ext_d(a))
    if a.degree == 0:
        return result
    return result + ext_d(interior_vec(v, a))


def dilation(dim: int, space: Space = Space.AMBIENT) -> VectorField:
    """D = y^A ∂_A."""
    return VectorField(dim, tuple(var(k) for k in range(dim)), space)


def coordinate_forms(degree: int, dim: int, space: Space) -> list[Form]:
    """All coordinate monomials dy^I of the given degree, in lexicographic order."""
    return [Form.basis(index, dim, space) for index in combinations(range(dim), degree)]
