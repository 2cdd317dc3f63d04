"""Parsing of small arithmetic expressions into exact algebraic objects.

Expressions use ``+ - * /``, ``^`` (or ``**``) with non-negative integer
exponents, parentheses, integer literals and a fixed set of variable names.
Python's :mod:`ast` does the tokenizing; only a whitelist of nodes is accepted.
"""
from __future__ import annotations

import ast
from fractions import Fraction
from typing import Callable, Mapping

from .poly import BiPoly, Poly, RationalFunction


class ExpressionError(ValueError):
    def __init__(self, message: str, column: int | None = None):
        super().__init__(message)
        self.column = column


def _parse(text: str) -> ast.expr:
    src = text.replace("^", "**")
    try:
        return ast.parse(src.strip(), mode="eval").body
    except SyntaxError as exc:
        off = None if exc.offset is None else exc.offset - 1
        raise ExpressionError(f"syntax error in expression {text!r}",
                              column=_source_column(text, off)) from None


def _source_column(text: str, offset):
    """1-based column in ``text`` of an offset into the parsed source, which
    is stripped and has every ``^`` widened to ``**``."""
    if offset is None:
        return None
    lead = len(text) - len(text.lstrip())
    i = lead
    while offset > 0 and i < len(text):
        offset -= 2 if text[i] == "^" else 1
        i += 1
    return i + 1


def evaluate(text: str, names: Mapping[str, object],
             functions: Mapping[str, Callable] | None = None,
             number: Callable[[int], object] = Fraction):
    """Evaluate ``text`` over an algebra given by ``names``/``functions``.

    ``number`` lifts integer literals into the algebra; division is whatever
    ``/`` means on the algebra objects.
    """
    functions = functions or {}

    def walk(node):
        col = _source_column(text, getattr(node, "col_offset", None))
        if isinstance(node, ast.Constant):
            if isinstance(node.value, bool) or not isinstance(node.value, int):
                raise ExpressionError(f"only integer literals allowed, got {node.value!r}", col)
            return number(node.value)
        if isinstance(node, ast.Name):
            if node.id not in names:
                raise ExpressionError(f"unknown name {node.id!r}", col)
            return names[node.id]
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = walk(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                e = node.right
                if isinstance(e, ast.UnaryOp) or not (isinstance(e, ast.Constant)
                                                      and isinstance(e.value, int)):
                    raise ExpressionError("exponent must be a non-negative integer literal", col)
                return walk(node.left) ** e.value
            left, right = walk(node.left), walk(node.right)
            if isinstance(node.op, ast.Add):
                return left + right
            if isinstance(node.op, ast.Sub):
                return left - right
            if isinstance(node.op, ast.Mult):
                return left * right
            if isinstance(node.op, ast.Div):
                try:
                    return left / right
                except ZeroDivisionError:
                    zcol = _source_column(text, getattr(node.right, "col_offset", None))
                    raise ExpressionError("division by zero", zcol) from None
                except ValueError as exc:
                    raise ExpressionError(str(exc), col) from None
        if isinstance(node, ast.Call) and isinstance(node.func, ast.Name):
            fn = functions.get(node.func.id)
            if fn is None or len(node.args) != 1 or node.keywords:
                raise ExpressionError(f"unknown function {node.func.id!r}", col)
            return fn(walk(node.args[0]))
        raise ExpressionError(f"unsupported syntax: {ast.dump(node)[:40]}", col)

    return walk(_parse(text))


def parse_rational(text: str) -> Fraction:
    """A rational written as an expression, e.g. ``-3/4`` or ``1/7^4``."""
    return evaluate(text, {})


def parse_bipoly(text: str, xname: str = "x", wname: str = "w") -> BiPoly:
    return evaluate(text, {xname: BiPoly.x(), wname: BiPoly.w()},
                    number=lambda n: BiPoly({(0, 0): n}))


def parse_ratfunc(text: str, var: str = "p") -> RationalFunction:
    return evaluate(text, {var: RationalFunction(Poly.x())},
                    number=lambda n: RationalFunction(n))


def parse_rational_list(text: str) -> list:
    items = [t.strip() for t in text.split(",")]
    if items == [""]:
        return []
    return [parse_rational(t) for t in items]


__all__ = [
    "ExpressionError", "evaluate", "parse_rational", "parse_bipoly",
    "parse_ratfunc", "parse_rational_list",
]
