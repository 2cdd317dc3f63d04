"""Univariate and bivariate polynomials, and rational functions, over Q.

Coefficients are :class:`fractions.Fraction`. All objects are immutable.
Evaluation methods are generic: they work for any value type that supports
``+``, ``*`` with Fractions (Fraction, :class:`BigReal`, mpmath numbers,
:class:`TruncatedSeries`).
"""
from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, Mapping, Tuple

Number = (int, Fraction)


def _frac(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    raise TypeError(f"expected an exact rational, got {type(c).__name__}")


class Poly:
    """Dense univariate polynomial, coefficients stored low degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [_frac(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: Tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def x(cls) -> "Poly":
        return cls([0, 1])

    @classmethod
    def const(cls, c) -> "Poly":
        return cls([c])

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __getitem__(self, i: int) -> Fraction:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    def __eq__(self, other) -> bool:
        if isinstance(other, Number):
            other = Poly([other])
        return isinstance(other, Poly) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"Poly({[str(c) for c in self.coeffs]})"

    def __str__(self) -> str:
        return format_univariate(self, "x")

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            return other
        if isinstance(other, Number):
            return Poly([other])
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(self[i] + other[i] for i in range(n))

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(-c for c in self.coeffs)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self.coeffs or not other.coeffs:
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result, base = Poly([1]), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, c) -> "Poly":
        c = _frac(c)
        return Poly(c * a for a in self.coeffs)

    def divmod(self, other: "Poly") -> Tuple["Poly", "Poly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return Poly(), self
        quot = [Fraction(0)] * (dq + 1)
        lead = other.coeffs[-1]
        for k in range(dq, -1, -1):
            c = rem[k + len(other.coeffs) - 1] / lead
            quot[k] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] -= c * b
        return Poly(quot), Poly(rem[: len(other.coeffs) - 1])

    __divmod__ = divmod

    def __floordiv__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[1]

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self.scale(1 / self.lead())

    def deriv(self) -> "Poly":
        return Poly(i * c for i, c in enumerate(self.coeffs) if i)

    def __call__(self, v):
        """Horner evaluation at any ring element ``v``."""
        if not self.coeffs:
            return Fraction(0) * v if not isinstance(v, Number) else Fraction(0)
        acc = self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            acc = acc * v + c
        if isinstance(acc, Fraction) and not isinstance(v, Number):
            # constant polynomial at a non-rational point
            return v * 0 + acc
        return acc


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd over Q; monic remainders keep coefficient growth in check."""
    a, b = a.monic(), b.monic()
    while not b.is_zero():
        a, b = b, (a % b).monic()
    return a


class RationalFunction:
    """Quotient of two polynomials, kept in lowest terms with monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, *, reduce: bool = True):
        num = num if isinstance(num, Poly) else Poly([num])
        den = Poly([1]) if den is None else (den if isinstance(den, Poly) else Poly([den]))
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            num, den = Poly(), Poly([1])
        elif reduce and den.degree > 0:
            g = poly_gcd(num, den)
            if g.degree > 0:
                num, den = num // g, den // g
        lc = den.lead()
        if lc != 1:
            num, den = num.scale(1 / lc), den.scale(1 / lc)
        self.num: Poly = num
        self.den: Poly = den

    @classmethod
    def var(cls) -> "RationalFunction":
        return cls(Poly.x())

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def _coerce(self, other):
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, Poly) or isinstance(other, Number):
            return RationalFunction(other)
        return NotImplemented

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.den == other.den:
            return RationalFunction(self.num + other.num, self.den)
        return RationalFunction(self.num * other.den + other.num * self.den,
                                self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "RationalFunction":
        return RationalFunction(-self.num, self.den, reduce=False)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, k: int) -> "RationalFunction":
        if k < 0:
            return RationalFunction(1) / (self ** (-k))
        return RationalFunction(self.num ** k, self.den ** k, reduce=False)

    def deriv(self) -> "RationalFunction":
        return RationalFunction(self.num.deriv() * self.den - self.num * self.den.deriv(),
                                self.den * self.den)

    def __call__(self, v):
        return self.num(v) / self.den(v)

    def expand(self, order: int):
        """Taylor expansion at 0 through ``x**order``."""
        from .series import TruncatedSeries

        if self.den[0] == 0:
            raise ZeroDivisionError("rational function has a pole at 0")
        return (TruncatedSeries.from_poly(self.num, order)
                / TruncatedSeries.from_poly(self.den, order))

    def __repr__(self) -> str:
        return f"RationalFunction({self.num!r}, {self.den!r})"

    def to_str(self, var: str = "p") -> str:
        n = format_univariate(self.num, var)
        if self.den == Poly([1]):
            return n
        return f"({n})/({format_univariate(self.den, var)})"

    __str__ = to_str


def ratfunc_expand(R: RationalFunction, order: int):
    return R.expand(order)


class BiPoly:
    """Sparse polynomial in (x, w): ``{(i, j): c}`` means ``c * x**i * w**j``."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Tuple[int, int], object] | None = None):
        clean: Dict[Tuple[int, int], Fraction] = {}
        for (i, j), c in (terms or {}).items():
            if i < 0 or j < 0:
                raise ValueError("negative exponent in BiPoly")
            c = _frac(c)
            if c:
                clean[(i, j)] = clean.get((i, j), Fraction(0)) + c
                if not clean[(i, j)]:
                    del clean[(i, j)]
        self.terms: Dict[Tuple[int, int], Fraction] = clean

    @classmethod
    def x(cls) -> "BiPoly":
        return cls({(1, 0): 1})

    @classmethod
    def w(cls) -> "BiPoly":
        return cls({(0, 1): 1})

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def deg_x(self) -> int:
        return max((i for i, _ in self.terms), default=-1)

    @property
    def deg_w(self) -> int:
        return max((j for _, j in self.terms), default=-1)

    def __eq__(self, other) -> bool:
        if isinstance(other, Number):
            other = BiPoly({(0, 0): other})
        return isinstance(other, BiPoly) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def _coerce(self, other):
        if isinstance(other, BiPoly):
            return other
        if isinstance(other, Number):
            return BiPoly({(0, 0): other})
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, Fraction(0)) + c
        return BiPoly(out)

    __radd__ = __add__

    def __neg__(self) -> "BiPoly":
        return BiPoly({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: Dict[Tuple[int, int], Fraction] = {}
        for (i1, j1), c1 in self.terms.items():
            for (i2, j2), c2 in other.terms.items():
                k = (i1 + i2, j1 + j2)
                out[k] = out.get(k, Fraction(0)) + c1 * c2
        return BiPoly(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, BiPoly):
            if other.is_zero():
                raise ZeroDivisionError("division of a BiPoly by zero")
            if set(other.terms) != {(0, 0)}:
                raise ValueError("BiPoly can only be divided by a constant")
            other = other.terms[(0, 0)]
        other = _frac(other)
        return BiPoly({k: c / other for k, c in self.terms.items()})

    def __pow__(self, k: int) -> "BiPoly":
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result, base = BiPoly({(0, 0): 1}), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def diff_x(self) -> "BiPoly":
        return BiPoly({(i - 1, j): i * c for (i, j), c in self.terms.items() if i})

    def diff_w(self) -> "BiPoly":
        return BiPoly({(i, j - 1): j * c for (i, j), c in self.terms.items() if j})

    def w_coefficients(self) -> list:
        """List of :class:`Poly` in x, indexed by the power of w."""
        rows: Dict[int, Dict[int, Fraction]] = {}
        for (i, j), c in self.terms.items():
            rows.setdefault(j, {})[i] = c
        out = []
        for j in range(self.deg_w + 1):
            row = rows.get(j, {})
            out.append(Poly(row.get(i, 0) for i in range(max(row, default=-1) + 1)))
        return out

    def __call__(self, x, w):
        """Evaluate at a point; Horner in x for each power of w, then in w."""
        rows = self.w_coefficients()
        if not rows:
            return Fraction(0)
        acc = rows[-1](x)
        for row in reversed(rows[:-1]):
            acc = acc * w + row(x)
        return acc

    def eval_series(self, W, order: int):
        """``P(x, W(x))`` as a truncated series through ``x**order``."""
        from .series import TruncatedSeries

        W = W.with_order(order)
        rows = [TruncatedSeries.from_poly(r, order) for r in self.w_coefficients()]
        if not rows:
            return TruncatedSeries.zero(order)
        acc = rows[-1]
        for row in reversed(rows[:-1]):
            acc = acc * W + row
        return acc

    def substitute(self, X: RationalFunction, W: RationalFunction) -> RationalFunction:
        """``P(X(p), W(p))`` as an exact rational function of p.

        Uses one common denominator ``den(X)**deg_x * den(W)**deg_w`` so that no
        intermediate gcd reductions are needed.
        """
        if self.is_zero():
            return RationalFunction(0)
        dx, dw = self.deg_x, self.deg_w
        a, b, c, d = X.num, X.den, W.num, W.den
        apow = [Poly([1])]
        bpow = [Poly([1])]
        for _ in range(dx):
            apow.append(apow[-1] * a)
            bpow.append(bpow[-1] * b)
        cpow = [Poly([1])]
        dpow = [Poly([1])]
        for _ in range(dw):
            cpow.append(cpow[-1] * c)
            dpow.append(dpow[-1] * d)
        num = Poly()
        for (i, j), coef in self.terms.items():
            num = num + (apow[i] * bpow[dx - i] * cpow[j] * dpow[dw - j]).scale(coef)
        return RationalFunction(num, bpow[dx] * dpow[dw])

    def __repr__(self) -> str:
        return f"BiPoly({self.to_str()!r})"

    def to_str(self, xname: str = "x", wname: str = "w") -> str:
        """Expanded sum of ``c*x^i*w^j`` monomials, w-degree descending."""
        if not self.terms:
            return "0"
        parts = []
        for (i, j) in sorted(self.terms, key=lambda k: (-k[1], -k[0])):
            parts.append(_monomial(self.terms[(i, j)], [(xname, i), (wname, j)]))
        return _join_terms(parts)

    __str__ = to_str


def bipoly_substitute(P: BiPoly, X: RationalFunction, W: RationalFunction) -> RationalFunction:
    return P.substitute(X, W)


def _monomial(c: Fraction, powers) -> str:
    factors = [f"{v}^{e}" if e > 1 else v for v, e in powers if e]
    sign = "-" if c < 0 else "+"
    mag = abs(c)
    if not factors:
        return f"{sign}{mag}"
    if mag == 1:
        return sign + "*".join(factors)
    return f"{sign}{mag}*" + "*".join(factors)


def _join_terms(parts) -> str:
    s = " ".join(p[0] + " " + p[1:] for p in parts)
    s = s[2:] if s.startswith("+ ") else "-" + s[2:]
    return s


def format_univariate(P: Poly, var: str) -> str:
    if P.is_zero():
        return "0"
    parts = [_monomial(c, [(var, i)]) for i, c in reversed(list(enumerate(P.coeffs))) if c]
    return _join_terms(parts)
