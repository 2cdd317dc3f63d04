"""Generalized hypergeometric series mFm-1: coefficients, ODE, rigorous sums."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Tuple, Union

from .errors import DivergenceError, SeriesError
from .exact.series import TruncatedSeries
from .numerics.accel import alt_accel_sum, cvz_terms_needed
from .numerics.ball import BigReal
from .numerics.radical import RadicalExpr, radical_eval

GEOMETRIC = "geometric-tail"
ACCELERATED = "alternating-acceleration"

Point = Union[Fraction, int, BigReal, RadicalExpr]


@dataclass(frozen=True)
class HypergeometricSpec:
    """Upper parameters a_1..a_m and lower parameters b_2..b_m.

    The implicit extra lower parameter 1 (the ``n!``) is not listed.
    """

    upper: Tuple[Fraction, ...]
    lower: Tuple[Fraction, ...]

    def __post_init__(self):
        up = tuple(Fraction(a) for a in self.upper)
        lo = tuple(Fraction(b) for b in self.lower)
        object.__setattr__(self, "upper", up)
        object.__setattr__(self, "lower", lo)
        if len(up) != len(lo) + 1:
            raise ValueError(
                f"need one more upper than lower parameter, got {len(up)} and {len(lo)}")
        for b in lo:
            if b <= 0 and b.denominator == 1:
                raise ValueError(f"lower parameter {b} is zero or a negative integer")

    @property
    def m(self) -> int:
        return len(self.upper)

    def ratio(self, n: int) -> Fraction:
        """c_{n+1} / c_n."""
        num = Fraction(1)
        for a in self.upper:
            num *= a + n
        den = Fraction(n + 1)
        for b in self.lower:
            den *= b + n
        return num / den

    def terminates_at(self) -> int | None:
        """Largest n with c_n possibly nonzero, for polynomial cases."""
        ends = [-a for a in self.upper if a <= 0 and a.denominator == 1]
        return int(min(ends)) if ends else None

    def __str__(self) -> str:
        up = ", ".join(map(str, self.upper))
        lo = ", ".join(map(str, self.lower))
        return f"{self.m}F{self.m - 1}({up}; {lo})"


def coeff(spec: HypergeometricSpec, n: int) -> Fraction:
    if n < 0:
        raise ValueError("coefficient index must be non-negative")
    c = Fraction(1)
    for k in range(n):
        c *= spec.ratio(k)
    return c


def coeff_list(spec: HypergeometricSpec, N: int) -> List[Fraction]:
    out = [Fraction(1)]
    for k in range(N):
        out.append(out[-1] * spec.ratio(k))
    return out


def coeffs_series(spec: HypergeometricSpec, N: int) -> TruncatedSeries:
    if N < 0:
        raise ValueError("series order must be non-negative")
    return TruncatedSeries(coeff_list(spec, N), N)


def ode_apply(spec: HypergeometricSpec, f: TruncatedSeries) -> TruncatedSeries:
    """Apply theta*prod(theta + b_j - 1) - x*prod(theta + a_j), theta = x d/dx.

    On x^n the first part multiplies by n*prod(n + b_j - 1); the second maps
    x^(n-1) to prod(n - 1 + a_j) x^n. Neither loses truncation order.
    """
    if f.order < spec.m + 1:
        raise SeriesError(f"ode_apply needs order >= {spec.m + 1}, got {f.order}")
    out = []
    for n in range(f.order + 1):
        left = Fraction(n)
        for b in spec.lower:
            left *= n + b - 1
        v = left * f[n]
        if n:
            right = Fraction(1)
            for a in spec.upper:
                right *= n - 1 + a
            v -= right * f[n - 1]
        out.append(v)
    return TruncatedSeries(out, f.order)


def check_ode(spec: HypergeometricSpec, N: int, f: TruncatedSeries | None = None) -> bool:
    """True iff the series (by default the coefficients of ``spec``) is annihilated to order N."""
    if f is None:
        f = coeffs_series(spec, N)
    return ode_apply(spec, f.with_order(min(N, f.order))).is_zero()


# -- evaluation -------------------------------------------------------------

def _ratio_bound(spec: HypergeometricSpec, xabs: Fraction, n: int) -> Fraction | None:
    """Bound on |t_{k+1}/t_k| valid for every k >= n, or None if n is too small.

    Pairs sorted upper parameters with sorted lower ones (including the 1 of
    n!); each factor (a+k)/(b+k) is monotone in k, so its sup over k >= n is
    max(1, (a+n)/(b+n)).
    """
    ups = sorted(spec.upper)
    lows = sorted(list(spec.lower) + [Fraction(1)])
    if any(a + n <= 0 for a in ups) or any(b + n <= 0 for b in lows):
        return None
    rho = xabs
    for a, b in zip(ups, lows):
        r = (a + n) / (b + n)
        if r > 1:
            rho *= r
    return rho


def _geometric_tails(spec, xabs: Fraction, n: int, tn_abs: Fraction):
    """Bounds for sum_{k>n} |t_k| and sum_{k>n} k|t_k|, or None."""
    if n < 1:
        return None
    rho = _ratio_bound(spec, xabs, n)
    if rho is None or rho >= 1:
        return None
    rho1 = rho * Fraction(n + 1, n)
    if rho1 >= 1:
        return None
    return tn_abs * rho / (1 - rho), n * tn_abs * rho1 / (1 - rho1)


def _as_point(x: Point, prec: int):
    if isinstance(x, RadicalExpr):
        return radical_eval(x, prec + 16)
    if isinstance(x, int):
        return Fraction(x)
    return x


def _exact_sums(spec, x: Fraction, prec: int):
    eps = Fraction(1, 1 << (prec + 4))
    stop = spec.terminates_at()
    s0 = s1 = Fraction(0)
    t = Fraction(1)
    xabs = abs(x)
    n = 0
    while True:
        s0 += t
        s1 += n * t
        if stop is not None and n >= stop:
            return s0, s1, Fraction(0), Fraction(0)
        tails = _geometric_tails(spec, xabs, n, abs(t))
        if tails is not None:
            scale = max(1, abs(s0), abs(s1))
            if tails[0] <= eps * scale and tails[1] <= eps * scale:
                return s0, s1, tails[0], tails[1]
        t = t * x * spec.ratio(n)
        n += 1


def _ball_sums(spec, x: BigReal, prec: int):
    wp = prec + 24
    eps = Fraction(1, 1 << (prec + 4))
    stop = spec.terminates_at()
    x = x.with_prec(wp) if x.prec < wp else x
    xabs = x.mag()
    s0 = BigReal.exact(1, wp)
    s1 = BigReal.exact(0, wp)
    t = BigReal.exact(1, wp)
    n = 0
    while True:
        if n:
            s0 = s0 + t
            s1 = s1 + t * n
        if stop is not None and n >= stop:
            return s0, s1
        tails = _geometric_tails(spec, xabs, n, t.mag())
        if tails is not None:
            scale = max(1, s0.mag(), s1.mag())
            if tails[0] <= eps * scale and tails[1] <= eps * scale:
                return s0.add_error(tails[0]), s1.add_error(tails[1])
        t = t * x * spec.ratio(n)
        n += 1


def _accelerated_sums(spec, sign: int, prec: int):
    """S0 and S1 at x = sign = -1 via alternating acceleration."""
    cs = coeff_list(spec, cvz_terms_needed(prec + 8) + 2)

    def c(k: int) -> Fraction:
        while len(cs) <= k:
            cs.append(cs[-1] * spec.ratio(len(cs) - 1))
        return cs[k]

    s0 = alt_accel_sum(lambda k: c(k) * sign ** k, prec + 8)
    # sum_{k>=1} k c_k (-1)^k = -sum_{j>=0} (j+1) c_{j+1} (-1)^j
    s1 = -alt_accel_sum(lambda j: (j + 1) * c(j + 1) * sign ** j, prec + 8)
    return s0, s1


def summation_method(x: Point) -> str:
    if isinstance(x, (int, Fraction)) and abs(Fraction(x)) == 1:
        return ACCELERATED
    return GEOMETRIC


def hyp_sums(spec: HypergeometricSpec, x: Point, prec: int) -> Tuple[BigReal, BigReal]:
    """Enclosures of ``sum c_n x^n`` and ``sum n c_n x^n`` in one pass.

    Exact rational x: partial sums are exact, rounded once, plus a rigorous
    geometric tail. x = -1: alternating acceleration (heuristic-rigorous).
    x = 1 and |x| > 1 are refused.
    """
    x = _as_point(x, prec)
    wp = prec + 16
    if isinstance(x, Fraction):
        if x == 0:
            return BigReal.exact(1, wp), BigReal.exact(0, wp)
        if abs(x) > 1:
            raise DivergenceError(f"|x| = {abs(x)} > 1: the series diverges")
        if x == 1:
            raise DivergenceError("x = 1 is on the boundary and not alternating; refused")
        if x == -1:
            if spec.terminates_at() is None:
                return _accelerated_sums(spec, -1, wp)
        s0, s1, e0, e1 = _exact_sums(spec, x, prec)
        return (BigReal.exact(s0, wp).add_error(e0), BigReal.exact(s1, wp).add_error(e1))
    if x.mag() >= 1:
        raise DivergenceError("enclosure of x reaches |x| = 1; use an exact x = -1 instead")
    return _ball_sums(spec, x, prec)


def evaluate(spec: HypergeometricSpec, x: Point, prec: int) -> BigReal:
    return hyp_sums(spec, x, prec)[0]


def evaluate_weighted(spec: HypergeometricSpec, a, b, x: Point, prec: int) -> BigReal:
    """Enclosure of ``(a + b x d/dx) F(x) = sum (a + b n) c_n x^n``."""
    size = max(abs(Fraction(a)) if not isinstance(a, BigReal) else a.mag(),
               abs(Fraction(b)) if not isinstance(b, BigReal) else b.mag(), 1)
    extra = size.numerator.bit_length() - size.denominator.bit_length() + 2
    s0, s1 = hyp_sums(spec, x, prec + max(extra, 0))
    return s0 * a + s1 * b


def parse_spec(upper: Iterable, lower: Iterable) -> HypergeometricSpec:
    return HypergeometricSpec(tuple(upper), tuple(lower))
