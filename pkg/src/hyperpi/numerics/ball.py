"""Midpoint-radius ("ball") arithmetic on binary floating-point numbers.

A :class:`BigReal` is ``mid ± rad`` with ``mid = man * 2**exp`` carried to
``prec`` bits and ``rad = rman * 2**rexp`` kept to ``RAD_BITS`` bits, always
rounded up. Every operation returns a ball containing every possible result
for inputs drawn from the operand balls, including its own rounding error.
"""
from __future__ import annotations

import math
from decimal import ROUND_CEILING, Context, Decimal
from fractions import Fraction

from ..errors import NumericalError

RAD_BITS = 30


def _rad_up(m: int, e: int):
    """Round the non-negative dyadic m*2^e up to RAD_BITS bits."""
    if m == 0:
        return 0, 0
    s = m.bit_length() - RAD_BITS
    if s > 0:
        m = (m >> s) + 1
        e += s
    return m, e


def _rad_down(m: int, e: int):
    if m <= 0:
        return 0, 0
    s = m.bit_length() - RAD_BITS
    if s > 0:
        m >>= s
        e += s
    return m, e


def _align_add(m1: int, e1: int, m2: int, e2: int):
    if e1 <= e2:
        return m1 + (m2 << (e2 - e1)), e1
    return (m1 << (e1 - e2)) + m2, e2


def _dy_add_up(a, b):
    if a[0] == 0:
        return b
    if b[0] == 0:
        return a
    return _rad_up(*_align_add(a[0], a[1], b[0], b[1]))


def _dy_mul_up(a, b):
    return _rad_up(a[0] * b[0], a[1] + b[1])


def _dy_div_up(a, b):
    """Upper bound for a/b, b > 0."""
    if a[0] == 0:
        return 0, 0
    k = RAD_BITS + 2 + b[0].bit_length() - a[0].bit_length()
    if k >= 0:
        q = -((-(a[0] << k)) // b[0])
    else:
        q = -((-a[0]) // (b[0] << -k))
    return _rad_up(q, a[1] - b[1] - k)


def _dy_to_fraction(m: int, e: int) -> Fraction:
    return Fraction(m << e) if e >= 0 else Fraction(m, 1 << -e)


def _fraction_to_dyadic(q: Fraction, prec: int):
    """(man, exp, exact) with man*2^exp the nearest prec-bit value to q."""
    n, d = q.numerator, q.denominator
    if n == 0:
        return 0, 0, True
    if d & (d - 1) == 0 and abs(n).bit_length() <= prec:
        return n, -(d.bit_length() - 1), True
    k = prec - (abs(n).bit_length() - d.bit_length()) + 1
    if k >= 0:
        num, den = n << k, d
    else:
        num, den = n, d << -k
    man, r = divmod(num, den)
    if 2 * r >= den:
        man += 1
    return man, -k, False


class BigReal:
    """A real number enclosed in a ball ``mid ± rad``."""

    __slots__ = ("man", "exp", "rman", "rexp", "prec")

    def __init__(self, man: int = 0, exp: int = 0, rman: int = 0, rexp: int = 0,
                 prec: int = 128):
        if rman < 0:
            raise ValueError("radius must be non-negative")
        self.man, self.exp = man, exp
        self.rman, self.rexp = _rad_up(rman, rexp)
        self.prec = prec

    # construction ----------------------------------------------------------

    @classmethod
    def _rounded(cls, man: int, exp: int, rad, prec: int) -> "BigReal":
        """Round an exact midpoint to prec bits, folding the error into rad."""
        bl = abs(man).bit_length()
        if bl > prec:
            s = bl - prec
            inexact = abs(man) & ((1 << s) - 1)
            half = 1 << (s - 1)
            man = (man + half) >> s if man >= 0 else -((-man + half) >> s)
            exp += s
            if inexact:
                rad = _dy_add_up(rad, (1, exp - 1))
        return cls(man, exp, rad[0], rad[1], prec)

    @classmethod
    def exact(cls, value, prec: int = 128) -> "BigReal":
        """Ball around an int or Fraction; radius is the rounding error only."""
        if isinstance(value, BigReal):
            return value
        if isinstance(value, float):
            value = Fraction(value)
        value = Fraction(value)
        man, exp, is_exact = _fraction_to_dyadic(value, prec)
        rad = (0, 0) if is_exact else (1, exp - 1)
        return cls(man, exp, rad[0], rad[1], prec)

    @classmethod
    def from_interval(cls, lo: Fraction, hi: Fraction, prec: int = 128) -> "BigReal":
        if lo > hi:
            raise ValueError("empty interval")
        mid = cls.exact((lo + hi) / 2, prec)
        return mid.add_error((hi - lo) / 2)

    def add_error(self, err) -> "BigReal":
        """Widen the radius by a non-negative rational bound."""
        err = Fraction(err)
        if err < 0:
            raise ValueError("error bound must be non-negative")
        if err == 0:
            return self
        m, e, _ = _fraction_to_dyadic(err, RAD_BITS + 2)
        m, e = _rad_up(m + 1, e)
        r = _dy_add_up((self.rman, self.rexp), (m, e))
        return BigReal(self.man, self.exp, r[0], r[1], self.prec)

    def with_prec(self, prec: int) -> "BigReal":
        return BigReal._rounded(self.man, self.exp, (self.rman, self.rexp), prec) \
            if prec < self.prec else BigReal(self.man, self.exp, self.rman, self.rexp, prec)

    # inspection ------------------------------------------------------------

    @property
    def mid(self) -> Fraction:
        return _dy_to_fraction(self.man, self.exp)

    @property
    def rad(self) -> Fraction:
        return _dy_to_fraction(self.rman, self.rexp)

    def lower(self) -> Fraction:
        return self.mid - self.rad

    def upper(self) -> Fraction:
        return self.mid + self.rad

    def _abs_up(self):
        m, e = _rad_up(abs(self.man), self.exp)
        return _dy_add_up((m, e), (self.rman, self.rexp))

    def _abs_lo(self):
        """Lower bound of |x| over the ball as a dyadic (0 if the ball hits 0)."""
        m, e = _align_add(abs(self.man), self.exp, -self.rman, self.rexp)
        return _rad_down(m, e)

    def mag(self) -> Fraction:
        """Upper bound for |x|."""
        return _dy_to_fraction(*self._abs_up())

    def mig(self) -> Fraction:
        """Lower bound for |x| (0 if the ball contains 0)."""
        return _dy_to_fraction(*self._abs_lo())

    def contains(self, value) -> bool:
        if isinstance(value, BigReal):
            return self.lower() <= value.lower() and value.upper() <= self.upper()
        return self.lower() <= Fraction(value) <= self.upper()

    def overlaps(self, other: "BigReal") -> bool:
        return self.lower() <= other.upper() and other.lower() <= self.upper()

    def contains_zero(self) -> bool:
        return self._abs_lo()[0] == 0

    def is_positive(self) -> bool:
        return self.man > 0 and not self.contains_zero()

    def is_negative(self) -> bool:
        return self.man < 0 and not self.contains_zero()

    def is_exact(self) -> bool:
        return self.rman == 0

    def rad_log2(self) -> float:
        """log2 of the radius (-inf for exact balls)."""
        if self.rman == 0:
            return float("-inf")
        return math.log2(self.rman) + self.rexp

    def __float__(self) -> float:
        return float(self.mid)

    def __repr__(self) -> str:
        return f"BigReal({self.to_decimal(20)} +/- {self.rad_str()}, prec={self.prec})"

    def to_decimal(self, places: int) -> str:
        """Midpoint rounded to ``places`` decimals."""
        q = self.mid * 10 ** places
        n = (q.numerator * 2 + q.denominator) // (2 * q.denominator)
        sign = "-" if n < 0 else ""
        s = str(abs(n)).rjust(places + 1, "0")
        if places == 0:
            return sign + s
        return f"{sign}{s[:-places]}.{s[-places:]}"

    def rad_str(self, digits: int = 2) -> str:
        """Radius rounded up, in scientific notation."""
        if self.rman == 0:
            return "0"
        ctx = Context(prec=digits, rounding=ROUND_CEILING, Emin=-10**9, Emax=10**9)
        if self.rexp >= 0:
            r = ctx.plus(Decimal(self.rman << self.rexp))
        else:
            r = ctx.divide(Decimal(self.rman), Decimal(1 << -self.rexp))
        return f"{r:.{digits - 1}E}"

    def __str__(self) -> str:
        return f"{self.to_decimal(20)} +/- {self.rad_str()}"

    # arithmetic ------------------------------------------------------------

    def _coerce(self, other) -> "BigReal":
        if isinstance(other, BigReal):
            return other
        if isinstance(other, (int, Fraction)):
            return BigReal.exact(other, self.prec)
        return NotImplemented

    def __neg__(self) -> "BigReal":
        return BigReal(-self.man, self.exp, self.rman, self.rexp, self.prec)

    def __pos__(self) -> "BigReal":
        return self

    def __abs__(self) -> "BigReal":
        if self.man >= 0:
            return self
        return -self

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        prec = max(self.prec, other.prec)
        man, exp = _align_add(self.man, self.exp, other.man, other.exp)
        rad = _dy_add_up((self.rman, self.rexp), (other.rman, other.rexp))
        return BigReal._rounded(man, exp, rad, prec)

    __radd__ = __add__

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
        prec = max(self.prec, other.prec)
        man, exp = self.man * other.man, self.exp + other.exp
        r1, r2 = (self.rman, self.rexp), (other.rman, other.rexp)
        rad = (0, 0)
        if r1[0] or r2[0]:
            a1 = _rad_up(abs(self.man), self.exp)
            a2 = _rad_up(abs(other.man), other.exp)
            rad = _dy_add_up(_dy_mul_up(a1, r2), _dy_mul_up(a2, r1))
            rad = _dy_add_up(rad, _dy_mul_up(r1, r2))
        return BigReal._rounded(man, exp, rad, prec)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        lo = other._abs_lo()
        if lo[0] == 0:
            raise NumericalError("division by a ball containing zero")
        prec = max(self.prec, other.prec)
        xm, ym = self.man, other.man
        if xm == 0:
            man, exp, err = 0, 0, (0, 0)
        else:
            k = prec + 2 + abs(ym).bit_length() - abs(xm).bit_length()
            if k >= 0:
                q, r = divmod(xm << k, ym)
            else:
                q, r = divmod(xm, ym << -k)
            man, exp = q, self.exp - other.exp - k
            err = (1, exp) if r else (0, 0)
        rad = err
        if self.rman or other.rman:
            ax = _rad_up(abs(xm), self.exp)
            ay = _rad_up(abs(ym), other.exp)
            ay_lo = _rad_down(abs(ym), other.exp)
            num = _dy_add_up(_dy_mul_up((self.rman, self.rexp), ay),
                             _dy_mul_up(ax, (other.rman, other.rexp)))
            den_m, den_e = lo[0] * ay_lo[0], lo[1] + ay_lo[1]
            rad = _dy_add_up(rad, _dy_div_up(num, (den_m, den_e)))
        return BigReal._rounded(man, exp, rad, prec)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other / self

    def __pow__(self, k: int) -> "BigReal":
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return 1 / (self ** (-k))
        result = BigReal(1, 0, 0, 0, self.prec)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def sqrt(self) -> "BigReal":
        if self.man == 0 and self.rman == 0:
            return self
        lo = self._abs_lo()
        if self.man <= 0 or lo[0] == 0:
            raise NumericalError("square root of a ball that reaches zero or below")
        prec = self.prec
        # isqrt of man * 2^(exp + 2t) with exp + 2t even and enough bits
        t = max(0, prec + 2 - abs(self.man).bit_length() // 2)
        e = self.exp - 2 * t
        m = self.man << (2 * t)
        if e % 2:
            m <<= 1
            e -= 1
        s = math.isqrt(m)
        exp = e // 2
        err = (0, 0) if s * s == m else (1, exp)
        rad = err
        if self.rman:
            # |sqrt(x) - sqrt(mid)| <= r / sqrt(lo)
            lm, le = lo
            if le % 2:
                lm <<= 1
                le -= 1
            pad = 2 * RAD_BITS
            root_lo = (math.isqrt(lm << pad), (le - pad) // 2)
            rad = _dy_add_up(rad, _dy_div_up((self.rman, self.rexp), root_lo))
        return BigReal._rounded(s, exp, rad, prec)

    def union(self, other: "BigReal") -> "BigReal":
        lo = min(self.lower(), other.lower())
        hi = max(self.upper(), other.upper())
        return BigReal.from_interval(lo, hi, max(self.prec, other.prec))

    def intersect(self, other: "BigReal") -> "BigReal":
        lo = max(self.lower(), other.lower())
        hi = min(self.upper(), other.upper())
        if lo > hi:
            raise NumericalError("balls do not intersect")
        return BigReal.from_interval(lo, hi, max(self.prec, other.prec))


def sqrt(x) -> BigReal:
    if not isinstance(x, BigReal):
        x = BigReal.exact(x)
    return x.sqrt()
