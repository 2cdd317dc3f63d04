from fractions import Fraction as F

import mpmath
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from hyperpi.errors import DivergenceError
from hyperpi.exact import TruncatedSeries
from hyperpi.hyper import (ACCELERATED, GEOMETRIC, HypergeometricSpec, check_ode, coeff,
                           coeff_list, evaluate, evaluate_weighted, hyp_sums, summation_method)
from hyperpi.numerics import BigReal, parse_radical

BAUER = HypergeometricSpec((F(1, 2),) * 3, (1, 1))
QUARTIC = HypergeometricSpec((F(1, 4), F(1, 2), F(3, 4)), (1, 1))
CHUD = HypergeometricSpec((F(1, 6), F(1, 2), F(5, 6)), (1, 1))


def mp(q):
    return mpmath.mpf(q.numerator) / q.denominator


def test_spec_validation():
    with pytest.raises(ValueError):
        HypergeometricSpec((1, 2), (1, 1))
    with pytest.raises(ValueError):
        HypergeometricSpec((1, 2), (-3,))
    assert str(BAUER) == "3F2(1/2, 1/2, 1/2; 1, 1)"


def test_coefficients_against_factorial_formulas():
    cs_b, cs_q, cs_c = coeff_list(BAUER, 30), coeff_list(QUARTIC, 30), coeff_list(CHUD, 30)
    f = sympy.factorial
    for n in range(31):
        assert cs_b[n] == F(int(sympy.binomial(2 * n, n)) ** 3, 64 ** n)
        assert cs_q[n] == F(int(f(4 * n)), 256 ** n * int(f(n)) ** 4)
        assert cs_c[n] == F(int(f(6 * n)), int(f(3 * n)) * int(f(n)) ** 3 * 1728 ** n)


params = st.fractions(min_value=F(-5), max_value=F(5), max_denominator=8)


@settings(max_examples=100, deadline=None)
@given(st.lists(params, min_size=1, max_size=4), st.data())
def test_recurrence_matches_direct_products(upper, data):
    lower = data.draw(st.lists(params.filter(lambda b: not (b <= 0 and b.denominator == 1)),
                               min_size=len(upper) - 1, max_size=len(upper) - 1))
    spec = HypergeometricSpec(tuple(upper), tuple(lower))
    cs = coeff_list(spec, 50)
    for n in (0, 1, 7, 23, 50):
        num = sympy.Integer(1)
        for a in upper:
            num *= sympy.rf(sympy.Rational(a.numerator, a.denominator), n)
        den = sympy.factorial(n)
        for b in lower:
            den *= sympy.rf(sympy.Rational(b.numerator, b.denominator), n)
        ref = num / den
        assert cs[n] == F(int(ref.p), int(ref.q))
    assert coeff(spec, 11) == cs[11]


@pytest.mark.parametrize("spec", [BAUER, QUARTIC, CHUD])
def test_ode_annihilates_series(spec):
    assert check_ode(spec, 30)


def test_ode_detects_perturbation():
    cs = coeff_list(BAUER, 30)
    cs[17] += F(1, 10 ** 9)
    assert not check_ode(BAUER, 30, TruncatedSeries(cs, 30))


@pytest.mark.parametrize("spec,x", [
    (BAUER, F(1, 4)), (BAUER, F(-1, 3)), (QUARTIC, F(1, 2401)), (QUARTIC, F(9, 10)),
    (CHUD, F(-1, 53360 ** 3)),
])
def test_evaluate_encloses_mpmath(spec, x):
    v = evaluate(spec, x, 200)
    assert v.rad < F(1, 2 ** 190)
    with mpmath.workprec(300):
        ref = mpmath.hyper([mp(a) for a in spec.upper], [mp(b) for b in spec.lower], mp(x))
        assert abs(mp(v.mid) - ref) <= mp(v.rad)


def test_bauer_at_minus_one_uses_acceleration():
    assert summation_method(F(-1)) == ACCELERATED
    assert summation_method(F(1, 4)) == GEOMETRIC
    v = evaluate_weighted(BAUER, 1, 4, F(-1), 120)
    with mpmath.workprec(200):
        assert abs(mp(v.mid) - 2 / mpmath.pi) <= mp(v.rad)


def test_sums_s0_s1_at_radical_point():
    x = parse_radical("sqrt(2) - 1")
    s0, s1 = hyp_sums(BAUER, x, 150)
    with mpmath.workprec(260):
        xv = mpmath.sqrt(2) - 1
        h = mpmath.hyper([0.5] * 3, [1, 1], xv)
        dh = mpmath.diff(lambda t: mpmath.hyper([0.5] * 3, [1, 1], t), xv)
        assert abs(mp(s0.mid) - h) <= mp(s0.rad)
        assert abs(mp(s1.mid) - xv * dh) <= mp(s1.rad) + mpmath.mpf(10) ** -60


def test_weighted_is_linear():
    a = evaluate_weighted(QUARTIC, 3, 0, F(1, 2401), 150)
    b = evaluate_weighted(QUARTIC, 0, 40, F(1, 2401), 150)
    c = evaluate_weighted(QUARTIC, 3, 40, F(1, 2401), 150)
    assert (a + b).overlaps(c)


def test_terminating_series_is_exact_polynomial():
    spec = HypergeometricSpec((-3, F(1, 2)), (1,))
    v = evaluate(spec, F(1, 2), 80)
    ref = sum(coeff(spec, n) * F(1, 2) ** n for n in range(4))
    assert v.contains(ref)
    assert evaluate(spec, F(-1), 80).contains(sum(coeff(spec, n) * (-1) ** n for n in range(4)))


@pytest.mark.parametrize("x", [F(2), F(1), F(-3, 2)])
def test_divergent_points_refused(x):
    with pytest.raises(DivergenceError):
        evaluate(BAUER, x, 64)


def test_ball_touching_unit_circle_refused():
    with pytest.raises(DivergenceError):
        evaluate(BAUER, BigReal.from_interval(F(-1), F(-9, 10)), 64)
