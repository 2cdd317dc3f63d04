"""Algebraic transformations F(x) = r(x) * G(y(x)) between hypergeometric series.

y and r are branches of implicit curves P(x, w) = 0 pinned by seed series;
an optional rational parametrization x(p), y(p), r(p) gives a second,
independent route to values and derivatives at a point.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Optional, Union

import mpmath

from .errors import BranchError, SeedError, SingularBranchError
from .exact.poly import BiPoly, Poly, RationalFunction
from .exact.series import TruncatedSeries, series_newton_root, series_reversion
from .hyper import HypergeometricSpec, check_ode, coeffs_series
from .numerics.ball import BigReal
from .numerics.radical import RadicalExpr, radical_eval

log = logging.getLogger(__name__)

Point = Union[Fraction, int, BigReal, RadicalExpr]


@dataclass(frozen=True)
class ImplicitCurve:
    P: BiPoly

    def __post_init__(self):
        if self.P.is_zero():
            raise ValueError("implicit curve polynomial is identically zero")

    @cached_property
    def Px(self) -> BiPoly:
        return self.P.diff_x()

    @cached_property
    def Pw(self) -> BiPoly:
        return self.P.diff_w()

    @cached_property
    def Pxx(self) -> BiPoly:
        return self.Px.diff_x()

    @cached_property
    def Pxw(self) -> BiPoly:
        return self.Px.diff_w()

    @cached_property
    def Pww(self) -> BiPoly:
        return self.Pw.diff_w()

    def __call__(self, x, w):
        return self.P(x, w)

    def __str__(self) -> str:
        return self.P.to_str()


@dataclass(frozen=True)
class RationalParametrization:
    X: RationalFunction
    Y: RationalFunction
    R: RationalFunction


@dataclass(frozen=True)
class AlgebraicTransformation:
    name: str
    source: HypergeometricSpec
    target: HypergeometricSpec
    curve_y: ImplicitCurve
    curve_r: ImplicitCurve
    seed_y: TruncatedSeries
    seed_r: TruncatedSeries
    param: Optional[RationalParametrization] = None
    p0: Optional[Union[Fraction, RadicalExpr]] = None

    @classmethod
    def identity(cls, spec: HypergeometricSpec, name: str = "identity") -> "AlgebraicTransformation":
        x, w = BiPoly.x(), BiPoly.w()
        p = RationalFunction(Poly.x())
        return cls(name, spec, spec, ImplicitCurve(w - x), ImplicitCurve(w - 1),
                   TruncatedSeries([0, 1]), TruncatedSeries([1]),
                   RationalParametrization(p, p, RationalFunction(1)))

    def check_invariants(self, order: int = 12) -> None:
        """Seeds lift on their curves and both specs satisfy their ODEs."""
        series_solution(self.curve_y, self.seed_y, order)
        series_solution(self.curve_r, self.seed_r, order)
        n = max(order, self.source.m + 1, self.target.m + 1)
        if not (check_ode(self.source, n) and check_ode(self.target, n)):
            raise ValueError(f"transformation {self.name}: a spec fails its ODE check")


@dataclass(frozen=True)
class TransformPointData:
    x0: BigReal
    y0: BigReal
    r0: BigReal
    dy_dx: BigReal
    dr_dx: BigReal
    route: str
    p0: Optional[BigReal] = None
    x0_exact: Optional[Fraction] = field(default=None, compare=False)


@lru_cache(maxsize=128)
def series_solution(curve: ImplicitCurve, seed: TruncatedSeries, N: int) -> TruncatedSeries:
    return series_newton_root(curve.P, seed, max(N, seed.order))


def series_identity_residual(T: AlgebraicTransformation, N: int) -> TruncatedSeries:
    """F - r * G(y) through x^N (identically zero when the identity holds)."""
    y = series_solution(T.curve_y, T.seed_y, N)
    r = series_solution(T.curve_r, T.seed_r, N)
    F = coeffs_series(T.source, N)
    G = coeffs_series(T.target, N)
    return (F - r * G.compose(y)).with_order(N)


def verify_series_identity(T: AlgebraicTransformation, N: int = 30) -> bool:
    """Exact comparison of both sides as power series modulo x^(N+1).

    A seed that is not a root of its curve defines no branch, so the identity
    is reported as not verified.
    """
    if N < 4:
        raise ValueError("series identity check needs N >= 4")
    try:
        res = series_identity_residual(T, N)
    except SeedError as exc:
        log.info("transformation %s: %s", T.name, exc)
        return False
    return res.is_zero()


def verify_param_consistency(T: AlgebraicTransformation, order: int = 10) -> bool:
    """Both substitutions vanish identically and the parametrized branches
    expanded in x agree with the lifted seed branches to ``order``."""
    if T.param is None:
        raise ValueError(f"transformation {T.name} has no parametrization")
    X, Y, R = T.param.X, T.param.Y, T.param.R
    if not T.curve_y.P.substitute(X, Y).is_zero():
        return False
    if not T.curve_r.P.substitute(X, R).is_zero():
        return False
    try:
        xs = X.expand(order)
        p_of_x = series_reversion(xs)
        y_param = Y.expand(order).compose(p_of_x)
        r_param = R.expand(order).compose(p_of_x)
        y_branch = series_solution(T.curve_y, T.seed_y, order)
        r_branch = series_solution(T.curve_r, T.seed_r, order)
    except (ValueError, ZeroDivisionError, SeedError) as exc:
        log.info("parametrization check for %s failed: %s", T.name, exc)
        return False
    return (y_param.with_order(order) == y_branch.with_order(order)
            and r_param.with_order(order) == r_branch.with_order(order))


# -- point data -------------------------------------------------------------

def point_ball(x: Point, prec: int) -> BigReal:
    if isinstance(x, BigReal):
        return x
    if isinstance(x, RadicalExpr):
        return radical_eval(x, prec)
    return BigReal.exact(Fraction(x), prec)


def _exact_or_none(x: Point) -> Optional[Fraction]:
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    return None


def implicit_derivative(curve: ImplicitCurve, x: BigReal, w: BigReal) -> BigReal:
    """dw/dx = -P_x / P_w at a point of the curve."""
    pw = curve.Pw(x, w)
    if pw.contains_zero():
        raise SingularBranchError("dP/dw enclosure contains 0: singular point of the curve")
    return -curve.Px(x, w) / pw


def node_slopes(curve: ImplicitCurve, x: BigReal, w: BigReal):
    """Slopes of the two branches through an ordinary double point.

    With P = P_x = P_w = 0 the tangent cone is P_xx + 2 P_xw s + P_ww s^2 = 0.
    """
    pxx, pxw, pww = curve.Pxx(x, w), curve.Pxw(x, w), curve.Pww(x, w)
    if pww.contains_zero():
        raise SingularBranchError("d2P/dw2 enclosure contains 0 at the double point")
    disc = pxw * pxw - pxx * pww
    if not disc.is_positive():
        raise SingularBranchError("double point without two distinct real branches")
    root = disc.sqrt()
    return (-pxw - root) / pww, (-pxw + root) / pww


def _branch_derivative(curve: ImplicitCurve, x: BigReal, tr: TrackResult) -> BigReal:
    if not tr.singular:
        return implicit_derivative(curve, x, tr.value)
    s1, s2 = node_slopes(curve, x, tr.value)
    approach = Fraction(_mp_to_fraction(tr.approach_slope))
    d1, d2 = abs(s1.mid - approach), abs(s2.mid - approach)
    gap = abs(s1.mid - s2.mid) - s1.rad - s2.rad
    if gap <= 0 or min(d1, d2) >= gap / 4:
        raise BranchError("cannot tell which branch through the double point was tracked")
    return s1 if d1 < d2 else s2


def eval_at(T: AlgebraicTransformation, x0: Point, p0: Point | None = None,
            prec: int = 128, route: str = "auto") -> TransformPointData:
    """Values y0, r0 and derivatives dy/dx, dr/dx of the pinned branches at x0.

    ``route`` is "parametric" (needs a parametrization and a hint p0, taken
    from the transformation if not given), "implicit" (continuation from the
    seeds plus -P_x/P_w) or "auto" (parametric when possible).
    """
    wp = prec + 32
    exact = _exact_or_none(x0)
    if exact == 0:
        return _at_origin(T, wp)
    hint = p0 if p0 is not None else T.p0
    if route == "parametric" or (route == "auto" and T.param is not None and hint is not None):
        if T.param is None or hint is None:
            raise BranchError("parametric route needs a parametrization and a parameter hint p0")
        return _parametric(T, x0, hint, wp)
    if route not in ("auto", "implicit"):
        raise ValueError(f"unknown route {route!r}")
    xb = point_ball(x0, wp)
    ty = _track(T.curve_y, T.seed_y, x0, wp, 30)
    tr = _track(T.curve_r, T.seed_r, x0, wp, 30)
    return TransformPointData(xb, ty.value, tr.value, _branch_derivative(T.curve_y, xb, ty),
                              _branch_derivative(T.curve_r, xb, tr), "implicit",
                              x0_exact=exact)


def _at_origin(T: AlgebraicTransformation, wp: int) -> TransformPointData:
    y = series_solution(T.curve_y, T.seed_y, 2)
    r = series_solution(T.curve_r, T.seed_r, 2)

    def ball(q):
        return BigReal.exact(q, wp)

    return TransformPointData(ball(0), ball(y[0]), ball(r[0]), ball(y[1]), ball(r[1]),
                              "series", x0_exact=Fraction(0))


def _parametric(T: AlgebraicTransformation, x0: Point, hint: Point, wp: int) -> TransformPointData:
    X, Y, R = T.param.X, T.param.Y, T.param.R
    pb = point_ball(hint, wp)
    xb_param = X(pb)
    exact = _exact_or_none(x0)
    xb = point_ball(x0, wp)
    if exact is not None:
        ok = xb_param.contains(exact)
    else:
        ok = xb_param.overlaps(xb)
    if not ok:
        raise BranchError(f"parameter hint maps to x = {xb_param}, not to x0 = {xb}")
    dx = X.deriv()(pb)
    if dx.contains_zero():
        raise SingularBranchError("x'(p) enclosure contains 0 at the hint")
    return TransformPointData(xb, Y(pb), R(pb), Y.deriv()(pb) / dx, R.deriv()(pb) / dx,
                              "parametric", p0=pb, x0_exact=exact)


# -- numerical continuation -------------------------------------------------

def _mp_rows(P: BiPoly):
    return [[mpmath.mpf(c.numerator) / c.denominator for c in row.coeffs]
            for row in P.w_coefficients()]


def _mp_eval(rows, x, w):
    acc = mpmath.mpf(0)
    for row in reversed(rows):
        r = mpmath.mpf(0)
        for c in reversed(row):
            r = r * x + c
        acc = acc * w + r
    return acc


def _mp_to_fraction(v) -> Fraction:
    sign, man, exp, _ = mpmath.mpf(v)._mpf_
    q = Fraction(int(man)) * (Fraction(2) ** int(exp))
    return -q if sign else q


@dataclass(frozen=True)
class TrackResult:
    value: BigReal
    approach_slope: object  # mpmath.mpf, dw/dx estimated just before the target
    singular: bool


def track_branch(curve: ImplicitCurve, seed: TruncatedSeries, x_target: Point,
                 prec: int = 128, order: int = 30) -> BigReal:
    """Enclosure of w(x_target) on the branch continued from the seed along [0, x_target].

    Starts from the lifted series near 0, continues with an Euler predictor
    and Newton corrector (the step is halved whenever Newton fails to
    contract by 1/4), and certifies the final value by interval Newton.
    The path is never assumed regular: a vanishing dP/dw on the way aborts.
    If the target itself is an ordinary double point of the curve, the value
    is certified as the simple root of dP/dw that also lies on the curve.
    """
    return _track(curve, seed, x_target, prec, order).value


def _track(curve: ImplicitCurve, seed: TruncatedSeries, x_target: Point,
           prec: int, order: int) -> TrackResult:
    exact = _exact_or_none(x_target)
    if exact == 0:
        W = series_solution(curve, seed, 1)
        return TrackResult(BigReal.exact(W[0], prec), mpmath.mpf(W[1]), False)
    xb = point_ball(x_target, prec)
    W = series_solution(curve, seed, order)
    rows, rows_x, rows_w = _mp_rows(curve.P), _mp_rows(curve.Px), _mp_rows(curve.Pw)
    rows_ww = _mp_rows(curve.Pww)
    with mpmath.workprec(prec + 40):
        X = mpmath.mpf(xb.man) * mpmath.mpf(2) ** xb.exp
        tol = mpmath.mpf(2) ** (-(prec + 20))

        def F(x, w):
            return _mp_eval(rows, x, w)

        def Fw(x, w):
            return _mp_eval(rows_w, x, w)

        def Fx(x, w):
            return _mp_eval(rows_x, x, w)

        def Fww(x, w):
            return _mp_eval(rows_ww, x, w)

        def series_at(x):
            acc = mpmath.mpf(0)
            for c in reversed(W.coeffs):
                acc = acc * x + mpmath.mpf(c.numerator) / c.denominator
            return acc

        # start where the last series term is negligible
        x = X
        last = abs(mpmath.mpf(W.coeffs[-1].numerator) / W.coeffs[-1].denominator)
        while x != 0 and last * abs(x) ** W.order > mpmath.mpf(2) ** -60 * (1 + abs(series_at(x))):
            x /= 2
        w = series_at(x)
        w = _newton_mp(F, Fw, x, w, tol, scale=1 + abs(w))
        if w is None:
            raise BranchError(f"could not start continuation at x = {mpmath.nstr(x, 8)}")
        h = (X - x) / 16
        steps = 0
        while True:
            steps += 1
            if steps > 20000:
                raise BranchError(f"continuation stalled near x = {mpmath.nstr(x, 12)}")
            if abs(X - x) < abs(h):
                h = X - x
            pw = Fw(x, w)
            if abs(pw) < tol * (1 + abs(Fx(x, w))):
                raise BranchError(f"dP/dw vanishes near x = {mpmath.nstr(x, 12)}")
            slope = -Fx(x, w) / pw
            w_pred = w + h * slope
            landing = h == X - x
            xn = X if landing else x + h
            w_new = _newton_mp(F, Fw, xn, w_pred, tol, scale=1 + abs(w), contract=True)
            if w_new is not None:
                x, w = xn, w_new
                if landing:
                    return TrackResult(_certify(curve, curve.P, curve.Pw, xb,
                                                _mp_to_fraction(w), prec), slope, False)
                h *= mpmath.mpf(3) / 2
                continue
            if landing:
                # a double point at the target: Newton on P stalls, but the
                # node is a simple root of dP/dw
                node = _newton_mp(Fw, Fww, X, w_pred, tol, scale=1 + abs(w))
                if node is not None and abs(F(X, node)) <= tol * (1 + abs(Fx(X, node))):
                    try:
                        ball = _certify(curve, curve.Pw, curve.Pww, xb, _mp_to_fraction(node), prec)
                    except BranchError:
                        ball = None
                    if ball is not None and curve.P(xb, ball).contains_zero():
                        return TrackResult(ball, (node - w) / (X - x), True)
            h /= 2
            if abs(h) < abs(X) * mpmath.mpf(2) ** -(prec // 2):
                raise BranchError(f"step size collapsed near x = {mpmath.nstr(x, 12)}")


def _newton_mp(F, Fw, x, w, tol, scale, contract=False, iters=60):
    """Newton on w -> F(x, w). With ``contract``, the second correction must be
    at most 1/4 of the first, else None (step rejected)."""
    prev = None
    for _ in range(iters):
        d = Fw(x, w)
        if d == 0:
            return None
        delta = F(x, w) / d
        w = w - delta
        if abs(delta) <= tol * scale:
            return w
        if contract and prev is not None and abs(delta) > abs(prev) / 4:
            return None
        prev = delta
    return None


def _certify(curve: ImplicitCurve, f_poly: BiPoly, df_poly: BiPoly, xb: BigReal,
             w_mid: Fraction, prec: int) -> BigReal:
    """Interval Newton on w -> f(x, w): if N(B) is inside B, B holds exactly
    one root, and N(B) encloses it."""
    wp = prec + 32
    wm = BigReal.exact(w_mid, wp)
    f = f_poly(xb, wm)
    delta = max(4 * f.mag() / max(df_poly(xb, wm).mig(), Fraction(1, 1 << wp)),
                Fraction(1, 1 << (prec + 8)) * max(1, abs(w_mid)))
    for _ in range(8):
        box = BigReal.from_interval(w_mid - delta, w_mid + delta, wp)
        d = df_poly(xb, box)
        if not d.contains_zero():
            n = wm - f / d
            if box.contains(n):
                return n
        delta *= 4
    raise BranchError("could not certify the tracked root by interval Newton")
