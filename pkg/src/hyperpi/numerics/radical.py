"""Nested-radical expressions over Q and their rigorous evaluation."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from ..errors import NumericalError
from ..exact.parse import evaluate
from .ball import BigReal


class RadicalExpr:
    """Expression tree with rational leaves and nodes + - * / sqrt.

    Operations on two leaves fold to a leaf, so a purely rational expression
    always parses to a single :class:`Leaf`.
    """

    def _wrap(self, other):
        if isinstance(other, RadicalExpr):
            return other
        if isinstance(other, (int, Fraction)):
            return Leaf(Fraction(other))
        return NotImplemented

    def _binop(self, op: str, other, swap: bool = False):
        other = self._wrap(other)
        if other is NotImplemented:
            return other
        left, right = (other, self) if swap else (self, other)
        if isinstance(left, Leaf) and isinstance(right, Leaf):
            a, b = left.value, right.value
            if op == "/" and b == 0:
                raise ZeroDivisionError("division by zero in radical expression")
            if op == "+":
                return Leaf(a + b)
            if op == "-":
                return Leaf(a - b)
            return Leaf(a * b if op == "*" else a / b)
        return BinOp(op, left, right)

    def __add__(self, other):
        return self._binop("+", other)

    def __radd__(self, other):
        return self._binop("+", other, swap=True)

    def __sub__(self, other):
        return self._binop("-", other)

    def __rsub__(self, other):
        return self._binop("-", other, swap=True)

    def __mul__(self, other):
        return self._binop("*", other)

    def __rmul__(self, other):
        return self._binop("*", other, swap=True)

    def __truediv__(self, other):
        return self._binop("/", other)

    def __rtruediv__(self, other):
        return self._binop("/", other, swap=True)

    def __neg__(self):
        if isinstance(self, Leaf):
            return Leaf(-self.value)
        return Neg(self)

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not part of the grammar")
        result = Leaf(Fraction(1))
        for _ in range(k):
            result = result * self
        return result


@dataclass(frozen=True, eq=True)
class Leaf(RadicalExpr):
    value: Fraction

    def __str__(self) -> str:
        return _fmt(self)[0]


@dataclass(frozen=True, eq=True)
class Neg(RadicalExpr):
    arg: RadicalExpr

    def __str__(self) -> str:
        return _fmt(self)[0]


@dataclass(frozen=True, eq=True)
class Sqrt(RadicalExpr):
    arg: RadicalExpr

    def __str__(self) -> str:
        return _fmt(self)[0]


@dataclass(frozen=True, eq=True)
class BinOp(RadicalExpr):
    op: str
    left: RadicalExpr
    right: RadicalExpr

    def __str__(self) -> str:
        return _fmt(self)[0]


_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def _fmt(e: RadicalExpr):
    """Text with minimal parentheses, plus its binding strength; parsing the
    text rebuilds the same tree."""
    if isinstance(e, Leaf):
        v = e.value
        if v.denominator != 1:
            return str(v), 2
        return str(v), 4 if v >= 0 else 3
    if isinstance(e, Neg):
        s, p = _fmt(e.arg)
        return ("-" + (s if p >= 3 else f"({s})")), 3
    if isinstance(e, Sqrt):
        return f"sqrt({_fmt(e.arg)[0]})", 4
    p = _PREC[e.op]
    ls, lp = _fmt(e.left)
    rs, rp = _fmt(e.right)
    if lp < p:
        ls = f"({ls})"
    if rp <= p:
        rs = f"({rs})"
    sep = " " if p == 1 else ""
    return f"{ls}{sep}{e.op}{sep}{rs}", p


def rsqrt(e) -> RadicalExpr:
    if not isinstance(e, RadicalExpr):
        e = Leaf(Fraction(e))
    return Sqrt(e)


def parse_radical(text: str) -> RadicalExpr:
    """Parse e.g. ``(1 - sqrt(45 - 18*sqrt(6)))/2``."""
    return evaluate(text, {}, functions={"sqrt": rsqrt}, number=lambda n: Leaf(Fraction(n)))


def parse_number(text: str) -> Union[Fraction, RadicalExpr]:
    """A rational when the expression has no radicals, else the expression tree."""
    e = parse_radical(text)
    return e.value if isinstance(e, Leaf) else e


def _eval(e: RadicalExpr, prec: int) -> BigReal:
    if isinstance(e, Leaf):
        return BigReal.exact(e.value, prec)
    if isinstance(e, Neg):
        return -_eval(e.arg, prec)
    if isinstance(e, Sqrt):
        v = _eval(e.arg, prec)
        if v.is_exact() and v.man == 0:
            return v
        if not v.is_positive():
            raise NumericalError(f"square root of a non-positive enclosure in {e}")
        return v.sqrt()
    if isinstance(e, BinOp):
        a, b = _eval(e.left, prec), _eval(e.right, prec)
        if e.op == "+":
            return a + b
        if e.op == "-":
            return a - b
        if e.op == "*":
            return a * b
        return a / b
    raise TypeError(f"not a radical expression: {e!r}")


def radical_eval(e, prec: int) -> BigReal:
    """Enclosure of ``e`` with radius at most ``2**-prec * max(1, |e|)``.

    Working precision is raised until the target is met, so cancellation
    inside the tree (as in 1 - sqrt(45 - 18 sqrt 6)) is absorbed.
    """
    if isinstance(e, (int, Fraction)):
        e = Leaf(Fraction(e))
    target = Fraction(1, 1 << prec)
    wp = prec + 32
    for _ in range(12):
        v = _eval(e, wp)
        if v.rad <= target * max(1, v.mig()):
            return v
        wp *= 2
    raise NumericalError(f"could not evaluate {e} to {prec} bits")
