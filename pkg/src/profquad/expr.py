"""Tiny expression language for integrands.

Arithmetic (``+ - * / **``, ``^`` as a synonym of ``**``), parentheses, the
variable ``x``, the constants ``pi`` and ``e`` and the functions
``sin cos exp log sqrt atan sinh cosh``. Expressions are parsed with
:mod:`ast` and checked node by node; nothing else is ever evaluated.
"""

import ast
import math
import operator

FUNCTIONS = {
    "sin": math.sin,
    "cos": math.cos,
    "exp": math.exp,
    "log": math.log,
    "sqrt": math.sqrt,
    "atan": math.atan,
    "sinh": math.sinh,
    "cosh": math.cosh,
}
CONSTANTS = {"pi": math.pi, "e": math.e}
VARIABLE = "x"

_BINOPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.Pow: operator.pow,
}
_UNOPS = {ast.UAdd: operator.pos, ast.USub: operator.neg}


class ExpressionError(ValueError):
    """The text is not a valid expression of the language."""


def _build(node):
    # compile the checked tree into nested closures taking x
    if isinstance(node, ast.Expression):
        return _build(node.body)
    if isinstance(node, ast.Constant):
        if isinstance(node.value, bool) or not isinstance(node.value, (int, float)):
            raise ExpressionError(f"unsupported literal {node.value!r}")
        c = float(node.value)
        return lambda x: c
    if isinstance(node, ast.Name):
        if node.id == VARIABLE:
            return lambda x: x
        if node.id in CONSTANTS:
            c = CONSTANTS[node.id]
            return lambda x: c
        raise ExpressionError(f"unknown name {node.id!r}")
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        op = _BINOPS[type(node.op)]
        lhs, rhs = _build(node.left), _build(node.right)
        return lambda x: op(lhs(x), rhs(x))
    if isinstance(node, ast.UnaryOp) and type(node.op) in _UNOPS:
        op = _UNOPS[type(node.op)]
        arg = _build(node.operand)
        return lambda x: op(arg(x))
    if isinstance(node, ast.Call):
        if not isinstance(node.func, ast.Name) or node.func.id not in FUNCTIONS:
            name = getattr(node.func, "id", ast.dump(node.func))
            raise ExpressionError(f"unknown function {name!r}")
        if node.keywords or len(node.args) != 1:
            raise ExpressionError(f"{node.func.id}() takes exactly one argument")
        fn = FUNCTIONS[node.func.id]
        arg = _build(node.args[0])
        return lambda x: fn(arg(x))
    raise ExpressionError(f"unsupported syntax: {type(node).__name__}")


def compile_expression(text):
    """Return a scalar callable ``f(x) -> float`` for the expression."""
    if not isinstance(text, str) or not text.strip():
        raise ExpressionError("empty expression")
    try:
        tree = ast.parse(text.replace("^", "**").strip(), mode="eval")
    except SyntaxError as exc:
        raise ExpressionError(f"cannot parse {text!r}: {exc.msg}") from None
    body = _build(tree)

    def f(x):
        return float(body(float(x)))

    f.expression = text
    return f


def evaluate(text, x):
    return compile_expression(text)(x)
