"""Truncated formal power series with exact rational coefficients.

A :class:`TruncatedSeries` of order ``N`` stores ``c_0 .. c_N`` and stands for
``c_0 + ... + c_N x^N + O(x^(N+1))``. Every operation returns the order up to
which its result is fully determined by its inputs.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Tuple

from ..errors import SeedError, SeriesError, SingularBranchError


class TruncatedSeries:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable, order: int | None = None):
        cs = [c if isinstance(c, Fraction) else Fraction(c) for c in coeffs]
        if order is None:
            if not cs:
                raise SeriesError("a series needs at least one coefficient or an order")
            order = len(cs) - 1
        if order < 0:
            raise SeriesError("negative truncation order")
        if len(cs) > order + 1:
            cs = cs[: order + 1]
        else:
            cs.extend([Fraction(0)] * (order + 1 - len(cs)))
        self.coeffs: Tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def zero(cls, order: int) -> "TruncatedSeries":
        return cls([], order)

    @classmethod
    def one(cls, order: int) -> "TruncatedSeries":
        return cls([1], order)

    @classmethod
    def x(cls, order: int) -> "TruncatedSeries":
        return cls([0, 1], order)

    @classmethod
    def from_poly(cls, P, order: int) -> "TruncatedSeries":
        return cls(P.coeffs[: order + 1], order)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __len__(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, n):
        return self.coeffs[n]

    def __iter__(self):
        return iter(self.coeffs)

    def __eq__(self, other) -> bool:
        """Equal coefficients on the common order (the only checkable claim)."""
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        n = min(self.order, other.order)
        return self.coeffs[: n + 1] == other.coeffs[: n + 1]

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"TruncatedSeries([{', '.join(map(str, self.coeffs))}], order={self.order})"

    def __str__(self) -> str:
        terms = []
        for n, c in enumerate(self.coeffs):
            if c:
                mono = "" if n == 0 else ("x" if n == 1 else f"x^{n}")
                if n and abs(c) == 1:
                    terms.append(("-" if c < 0 else "+") + mono)
                else:
                    terms.append(f"{'-' if c < 0 else '+'}{abs(c)}{'*' + mono if mono else ''}")
        body = " ".join(terms).lstrip("+") if terms else "0"
        return f"{body} + O(x^{self.order + 1})"

    def with_order(self, order: int) -> "TruncatedSeries":
        """Truncate, or pad with zeros (the caller vouches for the padding)."""
        return TruncatedSeries(self.coeffs, order)

    def valuation(self) -> int | None:
        """Index of the first nonzero coefficient; None when all known ones vanish."""
        for n, c in enumerate(self.coeffs):
            if c:
                return n
        return None

    def is_zero(self) -> bool:
        return self.valuation() is None

    def _coerce(self, other) -> "TruncatedSeries":
        if isinstance(other, TruncatedSeries):
            return other
        if isinstance(other, (int, Fraction)):
            return TruncatedSeries([other], self.order)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        n = min(self.order, other.order)
        return TruncatedSeries((a + b for a, b in zip(self.coeffs, other.coeffs)), n)

    __radd__ = __add__

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries((-c for c in self.coeffs), self.order)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return TruncatedSeries((c * other for c in self.coeffs), self.order)
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        n = min(self.order, other.order)
        a, b = self.coeffs, other.coeffs
        out = [Fraction(0)] * (n + 1)
        for i in range(n + 1):
            ai = a[i]
            if ai:
                for j in range(n + 1 - i):
                    bj = b[j]
                    if bj:
                        out[i + j] += ai * bj
        return TruncatedSeries(out, n)

    __rmul__ = __mul__

    def inverse(self) -> "TruncatedSeries":
        c0 = self.coeffs[0]
        if c0 == 0:
            raise SeriesError("cannot invert a series with zero constant term")
        n = self.order
        inv = [Fraction(0)] * (n + 1)
        inv[0] = 1 / c0
        for k in range(1, n + 1):
            s = sum((self.coeffs[j] * inv[k - j] for j in range(1, k + 1) if self.coeffs[j]),
                    Fraction(0))
            inv[k] = -s / c0
        return TruncatedSeries(inv, n)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("series division by zero")
            return self * (1 / Fraction(other))
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, k: int) -> "TruncatedSeries":
        if k < 0:
            return self.inverse() ** (-k)
        result, base = TruncatedSeries.one(self.order), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def shift_up(self, k: int) -> "TruncatedSeries":
        """Multiply by x**k; the result is known k orders further."""
        return TruncatedSeries([0] * k + list(self.coeffs), self.order + k)

    def shift_down(self, k: int) -> "TruncatedSeries":
        """Divide by x**k. The first k coefficients must vanish."""
        if any(self.coeffs[:k]):
            raise SeriesError(f"series is not divisible by x^{k}")
        if k > self.order:
            raise SeriesError("not enough known coefficients to divide")
        return TruncatedSeries(self.coeffs[k:], self.order - k)

    def deriv(self) -> "TruncatedSeries":
        if self.order == 0:
            raise SeriesError("derivative of an order-0 series carries no information")
        return TruncatedSeries((n * c for n, c in enumerate(self.coeffs) if n), self.order - 1)

    def theta(self) -> "TruncatedSeries":
        """Euler operator x d/dx; exact to the same order."""
        return TruncatedSeries((n * c for n, c in enumerate(self.coeffs)), self.order)

    def __call__(self, v):
        """Evaluate the known polynomial part at v (no tail claim)."""
        acc = self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            acc = acc * v + c
        return acc

    def compose(self, g: "TruncatedSeries") -> "TruncatedSeries":
        return series_compose(self, g)

    def reversion(self) -> "TruncatedSeries":
        return series_reversion(self)


def series_add(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    return f + g


def series_mul(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    return f * g


def series_div(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    return f / g


def series_compose(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    """``f(g(x))`` for ``g(0) = 0``.

    If g has valuation v, the unknown tail of f only enters at
    ``x**(v*(f.order+1))``, so the result can be known beyond ``f.order``.
    """
    if g.coeffs[0] != 0:
        raise SeriesError("inner series of a composition must have zero constant term")
    v = g.valuation()
    if v is None:
        return TruncatedSeries([f.coeffs[0]], g.order)
    n = min(g.order, v * (f.order + 1) - 1)
    g = g.with_order(n)
    acc = TruncatedSeries([f.coeffs[-1]], n)
    for c in reversed(f.coeffs[:-1]):
        acc = acc * g + c
    return acc


def series_reversion(f: TruncatedSeries) -> TruncatedSeries:
    """Compositional inverse g with ``f(g(x)) = x``, by Newton doubling."""
    if f.order < 1 or f.coeffs[0] != 0 or f.coeffs[1] == 0:
        raise SeriesError("reversion needs f(0) = 0 and f'(0) != 0")
    N = f.order
    fp = f.deriv()
    g = TruncatedSeries([0, 1 / f.coeffs[1]], min(1, N))
    known = 1
    while known < N:
        known = min(2 * known, N)
        g = g.with_order(known)
        x = TruncatedSeries.x(known)
        residual = series_compose(f.with_order(known), g) - x
        g = g - residual / series_compose(fp.with_order(known), g)
    return g.with_order(N)


def series_newton_root(P, seed: TruncatedSeries, N: int) -> TruncatedSeries:
    """Lift a branch ``W`` of ``P(x, W(x)) = 0`` from a seed segment.

    The seed is trusted through ``seed.order``. ``dP/dw`` along the branch may
    vanish at x = 0 to some order k (as it does for branches starting at a
    multiple point of the fibre over 0); the lift is unique provided the seed
    carries more than k coefficients. Each Newton step takes m correct
    coefficients to 2m - k, and the result is checked exactly at the end.
    """
    m = seed.order + 1
    Pw = P.diff_w()
    pw_seed = Pw.eval_series(seed, seed.order)
    k = pw_seed.valuation()
    if k is None:
        raise SingularBranchError(
            "dP/dw vanishes along the seed to its full order; branch is singular "
            "or the seed is too short")
    residual = P.eval_series(seed, m + k - 1)
    if not residual.is_zero():
        raise SeedError(
            f"seed is not a root to its order: residual starts at x^{residual.valuation()}, "
            f"needed x^{m + k}")
    W = seed
    while m < N + 1:
        target = min(2 * m - k, N + 1)
        work = target + k - 1
        Wp = W.with_order(work)
        num = P.eval_series(Wp, work).shift_down(k)
        den = Pw.eval_series(Wp, work).shift_down(k)
        delta = (num / den).with_order(target - 1)
        W = W.with_order(target - 1) - delta
        m = target
    W = W.with_order(N)
    check = P.eval_series(W, N + k)
    if not check.is_zero():
        raise SeedError("Newton lifting failed its final residual check")
    return W

