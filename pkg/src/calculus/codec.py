"""JSON encoding of expressions and forms.

Expressions: {"const": r}, {"var": k}, {"op": "add"|"mul"|"neg"|"div"|"sqrt", "args": [...]},
{"op": "pow", "base": ..., "exp": int}. Decoding builds nodes as written, without
folding, so a decoded expression is exactly the tree in the payload.
"""

from __future__ import annotations

from typing import Any

from pydantic import BaseModel, Field, ValidationError

from calculus.errors import CodecError, FormsError
from calculus.expr import Add, Const, Div, Expr, Mul, Neg, Pow, Sqrt, Var
from calculus.forms import Form, Space

_ARITY = {"neg": 1, "sqrt": 1, "div": 2}


def expr_from_json(payload: Any) -> Expr:
    if not isinstance(payload, dict):
        msg = f"expression must be a JSON object, got {type(payload).__name__}"
        raise CodecError(msg)
    if "const" in payload:
        value = payload["const"]
        if isinstance(value, bool) or not isinstance(value, int | float):
            msg = f"const must be a number, got {value!r}"
            raise CodecError(msg)
        return Const(value)
    if "var" in payload:
        index = payload["var"]
        if isinstance(index, bool) or not isinstance(index, int):
            msg = f"var must be an integer index, got {index!r}"
            raise CodecError(msg)
        try:
            return Var(index)
        except FormsError as exc:
            raise CodecError(str(exc)) from exc
    op = payload.get("op")
    if op == "pow":
        exp = payload.get("exp")
        if isinstance(exp, bool) or not isinstance(exp, int):
            msg = f"pow exponent must be an integer, got {exp!r}"
            raise CodecError(msg)
        if "base" not in payload:
            raise CodecError("pow needs a base")
        return Pow(expr_from_json(payload["base"]), exp)
    args = payload.get("args")
    if not isinstance(args, list) or not args:
        msg = f"operation {op!r} needs a non-empty args list"
        raise CodecError(msg)
    children = [expr_from_json(arg) for arg in args]
    expected = _ARITY.get(op)
    if expected is not None and len(children) != expected:
        msg = f"{op} takes {expected} argument(s), got {len(children)}"
        raise CodecError(msg)
    match op:
        case "add":
            return Add(tuple(children))
        case "mul":
            return Mul(tuple(children))
        case "neg":
            return Neg(children[0])
        case "sqrt":
            return Sqrt(children[0])
        case "div":
            return Div(children[0], children[1])
    msg = f"unknown expression payload: {payload!r}"
    raise CodecError(msg)


def expr_to_json(expr: Expr) -> dict[str, Any]:
    if isinstance(expr, Const):
        return {"const": expr.value}
    if isinstance(expr, Var):
        return {"var": expr.index}
    if isinstance(expr, Pow):
        return {"op": "pow", "base": expr_to_json(expr.base), "exp": expr.exp}
    return {"op": expr.kind, "args": [expr_to_json(child) for child in expr.children]}


class TermPayload(BaseModel):
    indices: list[int]
    coeff: dict[str, Any]


class FormPayload(BaseModel):
    degree: int = Field(ge=0)
    dim: int = Field(ge=1)
    space: Space = Space.AMBIENT
    terms: list[TermPayload] = Field(default_factory=list)


def form_from_json(payload: Any) -> Form:
    try:
        spec = FormPayload.model_validate(payload)
    except ValidationError as exc:
        msg = f"invalid form payload: {exc.errors()[0]['msg']}"
        raise CodecError(msg) from exc
    raw = [(term.indices, expr_from_json(term.coeff)) for term in spec.terms]
    try:
        return Form.canonicalize(spec.degree, spec.dim, spec.space, raw)
    except FormsError as exc:
        raise CodecError(str(exc)) from exc


def form_to_json(form: Form) -> dict[str, Any]:
    return FormPayload(
        degree=form.degree,
        dim=form.dim,
        space=form.space,
        terms=[
            TermPayload(indices=list(index), coeff=expr_to_json(coeff))
            for index, coeff in form.terms.items()
        ],
    ).model_dump(mode="json")
