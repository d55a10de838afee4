"""Small, safe arithmetic expression evaluator.

Used to parse polynomials, matrices, exact points and the templated table
records. Only literals, whitelisted names/functions and arithmetic are
allowed; anything else raises ``ExpressionError``.
"""

from __future__ import annotations

import ast
import operator
from fractions import Fraction
from typing import Any, Callable, Mapping


class ExpressionError(ValueError):
    pass


def _div(a, b):
    if isinstance(a, (int, Fraction)) and isinstance(b, (int, Fraction)):
        if b == 0:
            raise ExpressionError("division by zero")
        return Fraction(a) / b
    return a / b


_BINOPS: dict[type, Callable[[Any, Any], Any]] = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: _div,
    ast.Pow: operator.pow,
    ast.Mod: operator.mod,
    ast.FloorDiv: operator.floordiv,
}

_CMPOPS: dict[type, Callable[[Any, Any], bool]] = {
    ast.Eq: operator.eq,
    ast.NotEq: operator.ne,
    ast.Lt: operator.lt,
    ast.LtE: operator.le,
    ast.Gt: operator.gt,
    ast.GtE: operator.ge,
}


def evaluate(
    text: str,
    names: Mapping[str, Any] | None = None,
    funcs: Mapping[str, Callable[..., Any]] | None = None,
    div: Callable[[Any, Any], Any] | None = None,
) -> Any:
    names = dict(names or {})
    funcs = dict(funcs or {})
    binops = dict(_BINOPS)
    if div is not None:
        binops[ast.Div] = div
    try:
        tree = ast.parse(text.strip(), mode="eval")
    except SyntaxError as exc:
        raise ExpressionError(f"cannot parse {text!r}: {exc.msg}") from None

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant):
            if not isinstance(node.value, (int, float)):
                raise ExpressionError(f"unsupported literal {node.value!r}")
            return node.value
        if isinstance(node, ast.Name):
            if node.id not in names:
                raise ExpressionError(f"unknown name {node.id!r}")
            return names[node.id]
        if isinstance(node, ast.UnaryOp):
            val = ev(node.operand)
            if isinstance(node.op, ast.USub):
                return -val
            if isinstance(node.op, ast.UAdd):
                return val
            if isinstance(node.op, ast.Not):
                return not val
            raise ExpressionError("unsupported unary operator")
        if isinstance(node, ast.BinOp):
            op = binops.get(type(node.op))
            if op is None:
                raise ExpressionError("unsupported binary operator")
            return op(ev(node.left), ev(node.right))
        if isinstance(node, ast.Compare):
            left = ev(node.left)
            for op_node, comp in zip(node.ops, node.comparators):
                right = ev(comp)
                op = _CMPOPS.get(type(op_node))
                if op is None or not op(left, right):
                    return False
                left = right
            return True
        if isinstance(node, ast.BoolOp):
            vals = [ev(v) for v in node.values]
            return all(vals) if isinstance(node.op, ast.And) else any(vals)
        if isinstance(node, ast.IfExp):
            return ev(node.body) if ev(node.test) else ev(node.orelse)
        if isinstance(node, ast.Call):
            if not isinstance(node.func, ast.Name) or node.func.id not in funcs:
                raise ExpressionError("unknown function")
            if node.keywords:
                raise ExpressionError("keyword arguments not allowed")
            return funcs[node.func.id](*[ev(a) for a in node.args])
        if isinstance(node, (ast.Tuple, ast.List)):
            return [ev(e) for e in node.elts]
        raise ExpressionError(f"unsupported syntax: {type(node).__name__}")

    try:
        return ev(tree)
    except ExpressionError:
        raise
    except (ArithmeticError, TypeError, ValueError) as exc:
        raise ExpressionError(f"cannot evaluate {text!r}: {exc}") from None
