"""Certified real root refinement: bisection, then interval Newton."""
from __future__ import annotations

from fractions import Fraction
from typing import Callable, Tuple, Union

from ..errors import NumericalError
from ..exact.poly import Poly
from .ball import BigReal

BallFn = Callable[[BigReal], BigReal]


def _as_functions(f) -> Tuple[BallFn, BallFn]:
    if isinstance(f, Poly):
        df = f.deriv()
        return (lambda x: f(x)), (lambda x: df(x))
    if isinstance(f, tuple) and len(f) == 2:
        return f
    raise TypeError("f must be a Poly or a (function, derivative) pair")


def _sign_at(fn: BallFn, x: Fraction, prec: int) -> int:
    v = fn(BigReal.exact(x, prec))
    if v.is_positive():
        return 1
    if v.is_negative():
        return -1
    return 0


def refine_real_root(f: Union[Poly, Tuple[BallFn, BallFn]], bracket, prec: int) -> BigReal:
    """Enclosure of a root of f in ``bracket`` with radius at most ``2**(1 - prec)``.

    ``f`` is either an exact :class:`Poly` or a pair of ball functions
    ``(f, f')``. The endpoints must have strictly opposite signs.
    """
    fn, dfn = _as_functions(f)
    lo, hi = (Fraction(v) for v in bracket)
    if lo > hi:
        lo, hi = hi, lo
    wp = prec + 32
    s_lo, s_hi = _sign_at(fn, lo, wp), _sign_at(fn, hi, wp)
    if s_lo == 0 and s_hi == 0:
        raise NumericalError("sign of f at the bracket ends is undetermined")
    if s_lo == 0:
        return BigReal.exact(lo, wp) if fn(BigReal.exact(lo, wp)).is_exact() else _newton(
            fn, dfn, lo, hi, prec)
    if s_hi == 0:
        return BigReal.exact(hi, wp) if fn(BigReal.exact(hi, wp)).is_exact() else _newton(
            fn, dfn, lo, hi, prec)
    if s_lo == s_hi:
        raise NumericalError("f does not change sign over the bracket")
    # bisect until the derivative is bounded away from zero on the bracket
    for _ in range(4 * wp):
        box = BigReal.from_interval(lo, hi, wp)
        if not dfn(box).contains_zero():
            break
        mid = (lo + hi) / 2
        s_mid = _sign_at(fn, mid, wp)
        if s_mid == 0:
            if hi - lo <= Fraction(1, 1 << prec):
                return box
            # undecided sign: the root is within rounding of mid; Newton settles it
            break
        if s_mid == s_lo:
            lo = mid
        else:
            hi = mid
    return _newton(fn, dfn, lo, hi, prec)


def _newton(fn: BallFn, dfn: BallFn, lo: Fraction, hi: Fraction, prec: int) -> BigReal:
    target = Fraction(2, 1 << prec)
    wp = prec + 32
    box = BigReal.from_interval(lo, hi, wp)
    for _ in range(200):
        if box.rad <= target:
            return box
        d = dfn(box)
        if d.contains_zero():
            raise NumericalError("derivative enclosure contains zero; root not isolated")
        m = BigReal.exact(box.mid, wp)
        step = fn(m) / d
        new = m - step
        if not new.overlaps(box):
            raise NumericalError("interval Newton step left the bracket: no root there")
        new = new.intersect(box)
        if new.rad > box.rad / 2:
            wp *= 2
        box = new
    raise NumericalError("interval Newton did not converge")
