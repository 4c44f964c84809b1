"""Exactly-differentiable scalar expressions over m real variables.

Expressions are immutable DAG nodes over the variables x^0..x^{m-1}. The smart
constructors (``add``, ``mul``, ``div``, ...) fold constants and drop neutral
elements; correctness never depends on that folding, it only keeps trees small.
Partial derivatives are cached on the node that was differentiated, so a
derivative taken twice is built once and shared by every expression that
contains the node. Evaluation walks the DAG once per call with a memo keyed by
node identity.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Iterable, Sequence
from typing import ClassVar

import numpy as np

from calculus.errors import ArityError, DomainError

Number = int | float
Value = float | np.ndarray
Points = np.ndarray | Sequence[Sequence[float]]


class Expr:
    """Base node. Subclasses are treated as immutable after construction."""

    __slots__ = ("_partials", "free_vars")
    kind: ClassVar[str] = ""

    def __init__(self, free_vars: frozenset[int]) -> None:
        self._partials: dict[int, Expr] = {}
        self.free_vars = free_vars

    @property
    def children(self) -> tuple[Expr, ...]:
        return ()

    def rebuild(self, children: Sequence[Expr]) -> Expr:
        """Return the node rebuilt through the smart constructors."""
        return self

    def _derivative(self, k: int) -> Expr:
        raise NotImplementedError

    def _apply(self, columns: Sequence[np.ndarray], values: Sequence[Value]) -> Value:
        raise NotImplementedError

    def diff(self, k: int) -> Expr:
        return differentiate(self, k)

    def __add__(self, other: Expr | Number) -> Expr:
        return add(self, as_expr(other))

    def __radd__(self, other: Number) -> Expr:
        return add(as_expr(other), self)

    def __sub__(self, other: Expr | Number) -> Expr:
        return add(self, neg(as_expr(other)))

    def __rsub__(self, other: Number) -> Expr:
        return add(as_expr(other), neg(self))

    def __mul__(self, other: Expr | Number) -> Expr:
        return mul(self, as_expr(other))

    def __rmul__(self, other: Number) -> Expr:
        return mul(as_expr(other), self)

    def __truediv__(self, other: Expr | Number) -> Expr:
        return div(self, as_expr(other))

    def __rtruediv__(self, other: Number) -> Expr:
        return div(as_expr(other), self)

    def __neg__(self) -> Expr:
        return neg(self)

    def __pow__(self, exponent: int) -> Expr:
        return power(self, exponent)

    def __repr__(self) -> str:
        return render(self)


def _partial(node: Expr, k: int) -> Expr:
    if k not in node.free_vars:
        return ZERO
    return node._partials[k]


def _union(nodes: Iterable[Expr]) -> frozenset[int]:
    return frozenset().union(*(node.free_vars for node in nodes))


class Const(Expr):
    __slots__ = ("value",)
    kind = "const"

    def __init__(self, value: Number) -> None:
        super().__init__(frozenset())
        self.value = float(value)

    def rebuild(self, children: Sequence[Expr]) -> Expr:
        return const(self.value)

    def _derivative(self, k: int) -> Expr:
        return ZERO

    def _apply(self, columns: Sequence[np.ndarray], values: Sequence[Value]) -> Value:
        return self.value


class Var(Expr):
    __slots__ = ("index",)
    kind = "var"

    def __init__(self, index: int) -> None:
        if index < 0:
            msg = f"variable index must be non-negative, got {index}"
            raise ArityError(msg)
        super().__init__(frozenset((index,)))
        self.index = index

    def _derivative(self, k: int) -> Expr:
        return ONE if k == self.index else ZERO

    def _apply(self, columns: Sequence[np.ndarray], values: Sequence[Value]) -> Value:
        if self.index >= len(columns):
            msg = f"variable x{self.index} needs {self.index + 1} coordinates, got {len(columns)}"
            raise ArityError(msg)
        return columns[self.index]


class Add(Expr):
    __slots__ = ("args",)
    kind = "add"

    def __init__(self, args: tuple[Expr, ...]) -> None:
        super().__init__(_union(args))
        self.args = args

    @property
    def children(self) -> tuple[Expr, ...]:
        return self.args

    def rebuild(self, children: Sequence[Expr]) -> Expr:
        return add(*children)

    def _derivative(self, k: int) -> Expr:
        return add(*(_partial(arg, k) for arg in self.args))

    def _apply(self, columns: Sequence[np.ndarray], values: Sequence[Value]) -> Value:
        total = values[0]
        for value in values[1:]:
            total = total + value
        return total


class Mul(Expr):
    __slots__ = ("args",)
    kind = "mul"

    def __init__(self, args: tuple[Expr, ...]) -> None:
        super().__init__(_union(args))
        self.args = args

    @property
    def children(self) -> tuple[Expr, ...]:
        return self.args

    def rebuild(self, children: Sequence[Expr]) -> Expr:
        return mul(*children)

    def _derivative(self, k: int) -> Expr:
        terms = []
        for i, arg in enumerate(self.args):
            if k not in arg.free_vars:
                continue
            terms.append(mul(*self.args[:i], arg._partials[k], *self.args[i + 1 :]))
        return add(*terms)

    def _apply(self, columns: Sequence[np.ndarray], values: Sequence[Value]) -> Value:
        total = values[0]
        for value in values[1:]:
            total = total * value
        return total


class Neg(Expr):
    __slots__ = ("arg",)
    kind = "neg"

    def __init__(self, arg: Expr) -> None:
        super().__init__(arg.free_vars)
        self.arg = arg

    @property
    def children(self) -> tuple[Expr, ...]:
        return (self.arg,)

    def rebuild(self, children: Sequence[Expr]) -> Expr:
        return neg(children[0])

    def _derivative(self, k: int) -> Expr:
        return neg(_partial(self.arg, k))

    def _apply(self, columns: Sequence[np.ndarray], values: Sequence[Value]) -> Value:
        return -values[0]


class Div(Expr):
    __slots__ = ("den", "num")
    kind = "div"

    def __init__(self, num: Expr, den: Expr) -> None:
        super().__init__(num.free_vars | den.free_vars)
        self.num = num
        self.den = den

    @property
    def children(self) -> tuple[Expr, ...]:
        return (self.num, self.den)

    def rebuild(self, children: Sequence[Expr]) -> Expr:
        return div(children[0], children[1])

    def _derivative(self, k: int) -> Expr:
        terms = []
        if k in self.num.free_vars:
            terms.append(div(self.num._partials[k], self.den))
        if k in self.den.free_vars:
            terms.append(neg(div(mul(self.num, self.den._partials[k]), power(self.den, 2))))
        return add(*terms)

    def _apply(self, columns: Sequence[np.ndarray], values: Sequence[Value]) -> Value:
        num, den = values
        if np.any(np.asarray(den) == 0.0):
            raise DomainError("zero denominator", render(self.den))
        return num / den


class Pow(Expr):
    """Integer power; negative exponents require a non-zero base."""

    __slots__ = ("base", "exp")
    kind = "pow"

    def __init__(self, base: Expr, exp: int) -> None:
        super().__init__(base.free_vars)
        self.base = base
        self.exp = exp

    @property
    def children(self) -> tuple[Expr, ...]:
        return (self.base,)

    def rebuild(self, children: Sequence[Expr]) -> Expr:
        return power(children[0], self.exp)

    def _derivative(self, k: int) -> Expr:
        return mul(const(self.exp), power(self.base, self.exp - 1), _partial(self.base, k))

    def _apply(self, columns: Sequence[np.ndarray], values: Sequence[Value]) -> Value:
        base = values[0]
        if self.exp < 0 and np.any(np.asarray(base) == 0.0):
            raise DomainError("zero base under negative power", render(self.base))
        return base**self.exp


class Sqrt(Expr):
    __slots__ = ("arg",)
    kind = "sqrt"

    def __init__(self, arg: Expr) -> None:
        super().__init__(arg.free_vars)
        self.arg = arg

    @property
    def children(self) -> tuple[Expr, ...]:
        return (self.arg,)

    def rebuild(self, children: Sequence[Expr]) -> Expr:
        return sqrt(children[0])

    def _derivative(self, k: int) -> Expr:
        return div(_partial(self.arg, k), mul(TWO, self))

    def _apply(self, columns: Sequence[np.ndarray], values: Sequence[Value]) -> Value:
        arg = values[0]
        if np.any(np.asarray(arg) < 0.0):
            raise DomainError("negative square-root argument", render(self.arg))
        return np.sqrt(arg)


ZERO = Const(0.0)
ONE = Const(1.0)
TWO = Const(2.0)
MINUS_ONE = Const(-1.0)

_VARS: dict[int, Var] = {}


def as_expr(value: Expr | Number) -> Expr:
    if isinstance(value, Expr):
        return value
    return const(value)


def is_zero(expr: Expr) -> bool:
    return isinstance(expr, Const) and expr.value == 0.0


def const(value: Number) -> Const:
    value = float(value)
    if value == 0.0:
        return ZERO
    if value == 1.0:
        return ONE
    return Const(value)


def var(index: int) -> Var:
    node = _VARS.get(index)
    if node is None:
        node = _VARS[index] = Var(index)
    return node


def add(*terms: Expr) -> Expr:
    flat: list[Expr] = []
    total = 0.0
    for term in terms:
        for part in term.args if isinstance(term, Add) else (term,):
            if isinstance(part, Const):
                total += part.value
            else:
                flat.append(part)
    if total != 0.0:
        flat.append(Const(total))
    if not flat:
        return ZERO
    if len(flat) == 1:
        return flat[0]
    return Add(tuple(flat))


def _collect_factors(node: Expr, flat: list[Expr]) -> float:
    if isinstance(node, Const):
        return node.value
    if isinstance(node, Neg):
        return -_collect_factors(node.arg, flat)
    if isinstance(node, Mul):
        coeff = 1.0
        for arg in node.args:
            coeff *= _collect_factors(arg, flat)
        return coeff
    flat.append(node)
    return 1.0


def mul(*factors: Expr) -> Expr:
    flat: list[Expr] = []
    coeff = 1.0
    for factor in factors:
        coeff *= _collect_factors(factor, flat)
    if coeff == 0.0 or not flat:
        return const(coeff)
    body = flat[0] if len(flat) == 1 else Mul(tuple(flat))
    if coeff == 1.0:
        return body
    if coeff == -1.0:
        return Neg(body)
    return Mul((Const(coeff), *flat))


def neg(arg: Expr) -> Expr:
    if isinstance(arg, Const):
        return const(-arg.value)
    if isinstance(arg, Neg):
        return arg.arg
    return mul(MINUS_ONE, arg)


def div(num: Expr, den: Expr) -> Expr:
    if is_zero(num):
        return ZERO
    if isinstance(den, Const) and den.value != 0.0:
        return mul(const(1.0 / den.value), num)
    return Div(num, den)


def power(base: Expr, exponent: int) -> Expr:
    if isinstance(exponent, float) and exponent.is_integer():
        exponent = int(exponent)
    if not isinstance(exponent, int):
        msg = f"power exponent must be an integer constant, got {exponent!r}"
        raise TypeError(msg)
    if exponent == 0:
        return ONE
    if exponent == 1:
        return base
    if isinstance(base, Const):
        if base.value == 0.0 and exponent < 0:
            return Pow(base, exponent)
        return const(base.value**exponent)
    if isinstance(base, Pow):
        return power(base.base, base.exp * exponent)
    if isinstance(base, Sqrt) and exponent % 2 == 0:
        return power(base.arg, exponent // 2)
    if isinstance(base, Neg) and exponent % 2 == 0:
        return power(base.arg, exponent)
    return Pow(base, exponent)


def sqrt(arg: Expr) -> Expr:
    if isinstance(arg, Const) and arg.value >= 0.0:
        return const(math.sqrt(arg.value))
    return Sqrt(arg)


def differentiate(expr: Expr, k: int) -> Expr:
    """Return the symbolic partial derivative of ``expr`` with respect to x^k."""
    if k < 0:
        msg = f"variable index must be non-negative, got {k}"
        raise ArityError(msg)
    if k not in expr.free_vars:
        return ZERO
    stack = [expr]
    while stack:
        node = stack[-1]
        if k in node._partials:
            stack.pop()
            continue
        pending = [
            child
            for child in node.children
            if k in child.free_vars and k not in child._partials
        ]
        if pending:
            stack.extend(pending)
            continue
        stack.pop()
        node._partials[k] = node._derivative(k)
    return expr._partials[k]


def _rebuild(root: Expr, on_var: Callable[[Var], Expr], memo: dict[int, Expr]) -> Expr:
    stack = [root]
    while stack:
        node = stack[-1]
        if id(node) in memo:
            stack.pop()
            continue
        pending = [child for child in node.children if id(child) not in memo]
        if pending:
            stack.extend(pending)
            continue
        stack.pop()
        if isinstance(node, Var):
            memo[id(node)] = on_var(node)
        else:
            memo[id(node)] = node.rebuild([memo[id(child)] for child in node.children])
    return memo[id(root)]


def simplify(expr: Expr) -> Expr:
    """Constant folding and zero/one elimination through the smart constructors."""
    return _rebuild(expr, lambda node: var(node.index), {})


class Substitution:
    """Composition x^k -> replacements[k], memoised across every call.

    Reusing one instance for all coefficients of a form keeps shared
    subexpressions shared after substitution, which in turn keeps their
    cached derivatives shared.
    """

    def __init__(self, replacements: Sequence[Expr]) -> None:
        self.replacements = tuple(replacements)
        # Keys are ids of source nodes; the sources are kept alive alongside.
        self._memo: dict[int, Expr] = {}
        self._sources: list[Expr] = []

    def _on_var(self, node: Var) -> Expr:
        if node.index >= len(self.replacements):
            msg = (
                f"substitution defines {len(self.replacements)} variables, "
                f"expression uses x{node.index}"
            )
            raise ArityError(msg)
        return self.replacements[node.index]

    def __call__(self, expr: Expr) -> Expr:
        self._sources.append(expr)
        return _rebuild(expr, self._on_var, self._memo)


def substitute(expr: Expr, replacements: Sequence[Expr]) -> Expr:
    return Substitution(replacements)(expr)


def _evaluate_node(root: Expr, columns: Sequence[np.ndarray], memo: dict[int, Value]) -> Value:
    stack = [root]
    while stack:
        node = stack[-1]
        if id(node) in memo:
            stack.pop()
            continue
        pending = [child for child in node.children if id(child) not in memo]
        if pending:
            stack.extend(pending)
            continue
        stack.pop()
        memo[id(node)] = node._apply(columns, [memo[id(child)] for child in node.children])
    return memo[id(root)]


def evaluate_batch(
    exprs: Sequence[Expr], points: Points, *, dim: int | None = None
) -> np.ndarray:
    """Evaluate every expression at every point; returns shape (len(exprs), len(points)).

    All expressions share one memo, so subexpressions common to several of
    them are computed once. With ``dim`` set, every point must carry exactly
    that many coordinates.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if dim is not None and pts.shape[1] != dim:
        msg = f"points have {pts.shape[1]} coordinates, expected {dim}"
        raise ArityError(msg)
    count = pts.shape[0]
    columns = tuple(np.ascontiguousarray(column) for column in pts.T)
    memo: dict[int, Value] = {}
    out = np.empty((len(exprs), count))
    for row, expr in enumerate(exprs):
        out[row] = np.broadcast_to(_evaluate_node(expr, columns, memo), (count,))
    return out


def evaluate(expr: Expr, point: Sequence[float]) -> float:
    return float(evaluate_batch([expr], [list(point)])[0, 0])


def finite_difference(expr: Expr, k: int, point: Sequence[float], step: float = 1e-6) -> float:
    """Central difference of ``expr`` along x^k."""
    forward = list(point)
    backward = list(point)
    forward[k] += step
    backward[k] -= step
    values = evaluate_batch([expr], [forward, backward])[0]
    return float((values[0] - values[1]) / (2.0 * step))


def homogeneous_degree(expr: Expr) -> int | None:
    """Degree of a homogeneous polynomial, or None for anything else."""
    memo: dict[int, int | None] = {}

    def visit(node: Expr) -> int | None:
        key = id(node)
        if key in memo:
            return memo[key]
        result: int | None
        if isinstance(node, Const):
            result = 0
        elif isinstance(node, Var):
            result = 1
        elif isinstance(node, Neg):
            result = visit(node.arg)
        elif isinstance(node, Add):
            degrees = {visit(arg) for arg in node.args}
            result = degrees.pop() if len(degrees) == 1 else None
        elif isinstance(node, Mul):
            degrees = [visit(arg) for arg in node.args]
            result = None if None in degrees else sum(degrees)  # type: ignore[arg-type]
        elif isinstance(node, Pow) and node.exp > 0:
            inner = visit(node.base)
            result = None if inner is None else inner * node.exp
        else:
            result = None
        memo[key] = result
        return result

    return visit(expr)


def node_count(exprs: Expr | Iterable[Expr]) -> int:
    """Number of distinct DAG nodes reachable from ``exprs``."""
    roots = [exprs] if isinstance(exprs, Expr) else list(exprs)
    seen: set[int] = set()
    stack = list(roots)
    while stack:
        node = stack.pop()
        if id(node) in seen:
            continue
        seen.add(id(node))
        stack.extend(node.children)
    return len(seen)


def render(expr: Expr, max_depth: int = 6) -> str:
    """Short human-readable text; subtrees deeper than ``max_depth`` are elided."""

    def visit(node: Expr, depth: int) -> str:
        if isinstance(node, Const):
            return f"{node.value:g}"
        if isinstance(node, Var):
            return f"x{node.index}"
        if depth >= max_depth:
            return "..."
        if isinstance(node, Add):
            return "(" + " + ".join(visit(arg, depth + 1) for arg in node.args) + ")"
        if isinstance(node, Mul):
            return "*".join(visit(arg, depth + 1) for arg in node.args)
        if isinstance(node, Neg):
            return f"-({visit(node.arg, depth + 1)})"
        if isinstance(node, Div):
            return f"({visit(node.num, depth + 1)} / {visit(node.den, depth + 1)})"
        if isinstance(node, Pow):
            return f"({visit(node.base, depth + 1)})^{node.exp}"
        if isinstance(node, Sqrt):
            return f"sqrt({visit(node.arg, depth + 1)})"
        return f"<{node.kind}>"

    text = visit(expr, 0)
    return text if len(text) <= 240 else text[:237] + "..."
