from dataclasses import replace
from fractions import Fraction as F

import mpmath
import pytest
import sympy

from hyperpi.errors import BranchError, SeedError, SingularBranchError
from hyperpi.exact import BiPoly, RationalFunction, TruncatedSeries, parse_bipoly, parse_ratfunc
from hyperpi.numerics import BigReal
from hyperpi.transform import (AlgebraicTransformation, ImplicitCurve, RationalParametrization,
                               eval_at, implicit_derivative, node_slopes, series_identity_residual,
                               series_solution, track_branch, verify_param_consistency,
                               verify_series_identity)

# the parametrization, as plain text for an independent sympy oracle
PARAM_TEXT = {
    "x": "-4*p*(1-p)*(1+p)**3*(2-p)**3/(1-2*p)**6",
    "y": "16*p**3*(1-p)**3*(1+p)*(2-p)*(1-2*p)**2/(1-2*p+4*p**3-2*p**4)**4",
    "r": "(1-2*p)**3/(1-2*p+4*p**3-2*p**4)",
}


def mp(q):
    return mpmath.mpf(q.numerator) / q.denominator


def oracle_point(digits=60):
    """Values and derivatives at p0 computed with sympy + mpmath."""
    p = sympy.Symbol("p")
    exprs = {k: sympy.sympify(v) for k, v in PARAM_TEXT.items()}
    with mpmath.workdps(digits):
        p0 = (1 - mpmath.sqrt(45 - 18 * mpmath.sqrt(6))) / 2
        ev = {k: sympy.lambdify(p, e, "mpmath") for k, e in exprs.items()}
        dv = {k: sympy.lambdify(p, sympy.diff(e, p), "mpmath") for k, e in exprs.items()}
        return {
            "x": ev["x"](p0), "y": ev["y"](p0), "r": ev["r"](p0),
            "dy": dv["y"](p0) / dv["x"](p0), "dr": dv["r"](p0) / dv["x"](p0),
        }


def test_series_identity_holds(eq6):
    assert verify_series_identity(eq6, 30)
    assert verify_series_identity(eq6, 40)


def test_series_identity_detects_wrong_transformation(eq6):
    bad_target = replace(eq6, target=eq6.source)
    assert not verify_series_identity(bad_target, 12)
    bad_seed = replace(eq6, seed_r=TruncatedSeries([1, F(1, 8), F(28, 512)]))
    assert not verify_series_identity(bad_seed, 12)


def test_lifted_branches_start_as_printed(eq6):
    y = series_solution(eq6.curve_y, eq6.seed_y, 6)
    r = series_solution(eq6.curve_r, eq6.seed_r, 6)
    assert list(y.coeffs[:4]) == [0, 0, 0, F(-1, 1024)]
    assert list(r.coeffs[:3]) == [1, F(1, 8), F(27, 512)]
    assert eq6.curve_y.P.eval_series(series_solution(eq6.curve_y, eq6.seed_y, 30), 30).is_zero()


def test_series_solution_prefix_stable(eq6):
    a = series_solution(eq6.curve_r, eq6.seed_r, 12)
    b = series_solution(eq6.curve_r, eq6.seed_r, 25)
    assert b.with_order(12) == a


def test_residual_is_zero_series(eq6):
    assert series_identity_residual(eq6, 20).is_zero()


def test_param_consistency(eq6):
    assert verify_param_consistency(eq6, 10)
    P = eq6.param
    bumped = RationalParametrization(P.X + RationalFunction(1), P.Y, P.R)
    assert not verify_param_consistency(replace(eq6, param=bumped), 10)


def test_param_substitution_exact_zero(eq6):
    P = eq6.param
    assert eq6.curve_y.P.substitute(P.X, P.Y).is_zero()
    assert eq6.curve_r.P.substitute(P.X, P.R).is_zero()


def test_param_absent_raises(eq6):
    with pytest.raises(ValueError):
        verify_param_consistency(replace(eq6, param=None))


def test_parametric_point_data(eq6):
    d = eval_at(eq6, F(-1), prec=128, route="parametric")
    assert d.y0.contains(F(1, 2401))
    assert d.y0.rad < F(1, 2 ** 100)
    ref = oracle_point()
    with mpmath.workdps(60):
        for ball, key in ((d.y0, "y"), (d.r0, "r"), (d.dy_dx, "dy"), (d.dr_dx, "dr")):
            assert abs(mp(ball.mid) - ref[key]) < mpmath.mpf(10) ** -35


def test_point_on_curves(eq6):
    d = eval_at(eq6, F(-1), prec=128)
    assert eq6.curve_y.P(d.x0, d.y0).contains_zero()
    assert eq6.curve_r.P(d.x0, d.r0).contains_zero()


def test_implicit_and_parametric_routes_agree(eq6):
    a = eval_at(eq6, F(-1), prec=128, route="parametric")
    b = eval_at(eq6, F(-1), prec=128, route="implicit")
    assert a.route == "parametric" and b.route == "implicit"
    for u, v in ((a.y0, b.y0), (a.r0, b.r0), (a.dy_dx, b.dy_dx), (a.dr_dx, b.dr_dx)):
        assert u.overlaps(v)
    assert b.y0.contains(F(1, 2401))


def test_minus_one_is_a_node_of_both_curves(eq6):
    d = eval_at(eq6, F(-1), prec=128, route="parametric")
    with pytest.raises(SingularBranchError):
        implicit_derivative(eq6.curve_y, d.x0, d.y0)
    slopes = node_slopes(eq6.curve_y, d.x0, d.y0)
    assert any(s.overlaps(d.dy_dx) for s in slopes)


def test_point_data_at_origin(eq6):
    d = eval_at(eq6, 0)
    assert d.y0.contains(0) and d.r0.contains(1)
    assert d.dy_dx.contains(0) and d.dr_dx.contains(F(1, 8))


@pytest.mark.parametrize("x0", [F(1, 3), F(-1), F(-2, 7)])
def test_identity_transformation_point_data(eq6, x0):
    T = AlgebraicTransformation.identity(eq6.source)
    d = eval_at(T, x0)
    assert d.y0.contains(x0) and d.r0.contains(1)
    assert d.dy_dx.contains(1) and d.dr_dx.contains(0)
    assert verify_series_identity(T, 10)
    assert verify_param_consistency(T)


def test_track_branch_square_root():
    c = ImplicitCurve(parse_bipoly("w^2 - 1 - x"))
    assert track_branch(c, TruncatedSeries([1]), 3).contains(2)
    assert track_branch(c, TruncatedSeries([-1]), 3).contains(-2)


def test_track_branch_to_target_values(eq6):
    y = track_branch(eq6.curve_y, eq6.seed_y, F(-1), 128)
    assert y.contains(F(1, 2401))
    r = track_branch(eq6.curve_r, eq6.seed_r, F(-1), 128)
    assert r.overlaps(eval_at(eq6, F(-1), route="parametric").r0)


def test_track_branch_stops_at_branch_point():
    c = ImplicitCurve(parse_bipoly("w^2 - 1 + x"))
    with pytest.raises(BranchError):
        track_branch(c, TruncatedSeries([1]), 2, 64)


def test_bad_seed_raises():
    c = ImplicitCurve(parse_bipoly("w^2 - 1 - x"))
    with pytest.raises(SeedError):
        series_solution(c, TruncatedSeries([2]), 5)


def test_missing_hint_for_parametric_route(eq6):
    with pytest.raises(BranchError):
        eval_at(replace(eq6, p0=None), F(-1), route="parametric")


def test_hint_for_wrong_point(eq6):
    with pytest.raises(BranchError):
        eval_at(eq6, F(-1, 2), route="parametric")


def test_zero_curve_rejected():
    with pytest.raises(ValueError):
        ImplicitCurve(BiPoly({}))
