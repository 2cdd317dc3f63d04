"""Acceptance criteria, one test each. Every test records a PASS/FAIL line,
printed in the terminal summary (and directly when run as a script)."""
import io
import time
from fractions import Fraction as F

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

import test_exact as _te
import test_numerics as _tn
from conftest import ACCEPTANCE_LINES
from hyperpi import cli
from hyperpi.catalog import builtin_text, parse_catalog
from hyperpi.exact import series_reversion
from hyperpi.hyper import HypergeometricSpec, check_ode, coeff_list
from hyperpi.numerics import radical_eval
from hyperpi.transform import series_solution, verify_param_consistency, verify_series_identity
from hyperpi.translate import MuConstant, verify_identity

STEP0 = "3.001679541740867825117222046370611403163548615329487998574326"


@pytest.fixture(scope="module")
def cat():
    return parse_catalog(builtin_text())


def oracle_dist(ball, value_fn, dps=120) -> F:
    """Distance from a ball to an mpmath reference (mpmath's own pi)."""
    with mpmath.workdps(dps):
        ref = value_fn()
        lo, hi = mpmath.mpf(ball.lower().numerator) / ball.lower().denominator, \
            mpmath.mpf(ball.upper().numerator) / ball.upper().denominator
        return F(str(max(abs(lo - ref), abs(hi - ref))))


def record(n: int, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'}  criterion {n:2d}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def run_cli(argv):
    out = io.StringIO()
    t = time.perf_counter()
    code = cli.main(argv, out=out)
    return code, out.getvalue(), time.perf_counter() - t


def test_criterion_01_ramanujan_reproduction(cat):
    code, out, dt = run_cli(["verify", "ramanujan42", "--digits", "50"])
    lines = dict(ln.split(" = ", 1) for ln in out.splitlines() if " = " in ln)
    printed_ok = all(lines[k].startswith(STEP0) for k in ("lhs", "rhs"))
    rep = verify_identity(cat.identities["ramanujan42"], 50)
    s = F(STEP0)
    # the true constant is 3.00167...4326|1047..., so both balls sit in [S, S + 1e-60)
    match = all(s <= b.lower() and b.upper() < s + F(1, 10 ** 60) for b in (rep.lhs, rep.rhs))
    ok = code == 0 and out.rstrip().endswith("PASS") and printed_ok and match \
        and rep.bound <= F(1, 10 ** 50) and dt < 5
    record(1, ok, f"verify ramanujan42 --digits 50: exit {code}, 60 printed digits match, "
                  f"|lhs-rhs| <= {float(rep.bound):.1e}, {dt:.2f}s")


def test_criterion_02_bauer_reproduction(cat):
    code, out, dt = run_cli(["verify", "bauer", "--digits", "30"])
    rep = verify_identity(cat.identities["bauer"], 30)
    dist = oracle_dist(rep.lhs, lambda: 2 / mpmath.pi)
    ok = code == 0 and out.rstrip().endswith("PASS") and rep.method == "alternating-acceleration" \
        and dist <= F(1, 10 ** 30) and dt < 10
    record(2, ok, f"verify bauer --digits 30 via {rep.method}: |lhs - 2/pi| <= {float(dist):.1e}, "
                  f"{dt:.2f}s")


def test_criterion_03_series_identity(cat):
    T = cat.transformations["eq6"]
    series_solution.cache_clear()
    t = time.perf_counter()
    ok30 = verify_series_identity(T, 30)
    dt = time.perf_counter() - t
    record(3, ok30 and dt < 30, f"series identity of the quadratic transformation exact to "
                                f"x^30: {ok30}, {dt:.2f}s")


def test_criterion_04_parametrization(cat):
    T = cat.transformations["eq6"]
    P = T.param
    zero_y = T.curve_y.P.substitute(P.X, P.Y).is_zero()
    zero_r = T.curve_r.P.substitute(P.X, P.R).is_zero()
    # composed-series cross-check, spelled out
    p_of_x = series_reversion(P.X.expand(10))
    y_ok = P.Y.expand(10).compose(p_of_x) == series_solution(T.curve_y, T.seed_y, 10)
    r_ok = P.R.expand(10).compose(p_of_x) == series_solution(T.curve_r, T.seed_r, 10)
    ok = zero_y and zero_r and y_ok and r_ok and verify_param_consistency(T, 10)
    record(4, ok, f"P_y(x(p), y(p)) == 0: {zero_y}, P_r(x(p), r(p)) == 0: {zero_r}, "
                  f"composed series match to order 10: {y_ok and r_ok}")


def test_criterion_05_point_data(cat):
    T = cat.transformations["eq6"]
    p0 = radical_eval(T.p0, 128)
    xb, yb = T.param.X(p0), T.param.Y(p0)
    tight = F(1, 2 ** 100)
    ok = xb.contains(-1) and yb.contains(F(1, 2401)) and xb.rad < tight and yb.rad < tight
    record(5, ok, f"x(p0) = -1 +/- {xb.rad_str()}, y(p0) = 1/2401 +/- {yb.rad_str()} "
                  f"(128-bit p0)")


def test_criterion_06_translation(cat):
    code, out, dt = run_cli(["translate", "bauer", "--via", "eq6", "--digits", "40"])
    got = dict(ln.split(" = ", 1) for ln in out.splitlines()
               if ln.split(" = ")[0] in ("a", "b", "x0", "mu"))
    emitted = (F(got["a"]), F(got["b"]), F(got["x0"]), got["mu"])
    want = (F(3), F(40), F(1, 2401), str(MuConstant(F(49, 9), 3)))
    # independent re-verification of the emitted identity from the printed section
    section = out[out.index("[identity"):]
    section = section[:section.index("\n\n")] if "\n\n" in section else section
    emitted_id = next(iter(parse_catalog(section).identities.values()))
    rep = verify_identity(emitted_id, 40)
    ok = code == 0 and emitted == want and rep.passed
    record(6, ok, f"translate bauer --via eq6 -> (a, b, y0, mu) = ({got['a']}, {got['b']}, "
                  f"{got['x0']}, {got['mu']}); re-verified to {rep.verified_digits} digits")


def test_criterion_07_ode(cat):
    specs = [cat.transformations["eq6"].source, cat.transformations["eq6"].target,
             HypergeometricSpec((F(1, 6), F(1, 2), F(5, 6)), (1, 1))]
    results = [check_ode(s, 30) for s in specs]
    record(7, all(results), "differential operator annihilates to x^30: "
                            + ", ".join(f"{s}: {r}" for s, r in zip(specs, results)))


def test_criterion_08_comments_series(cat):
    six = verify_identity(cat.identities["sixn4pi"], 40)
    chud = verify_identity(cat.identities["chudnovsky"], 50)
    dist = oracle_dist(six.lhs, lambda: 4 / mpmath.pi)
    ok = six.passed and chud.passed and dist <= F(1, 10 ** 40)
    record(8, ok, f"(1+6n)/4^n vs 4/pi: {six.verified_digits} digits, |lhs - 4/pi| <= "
                  f"{float(dist):.1e}; folded Chudnovsky: "
                  f"{chud.verified_digits} digits")


def test_criterion_09_field_guard(capsys):
    results = []
    for src, dst in (("bauer", "sixn4pi"), ("sixn4pi", "bauer"),
                     ("bauer", "chudnovsky"), ("chudnovsky", "bauer")):
        code, out, _ = run_cli(["translate", src, "--via", "eq6", "--to", dst])
        err = capsys.readouterr().err
        results.append(code == 1 and "REFUSED" in out and "Q[sqrt(-" in err)
    record(9, all(results), "translations across fields 2<->3 and 2<->163 refused with exit 1 "
                            f"({sum(results)}/4)")


# -- criterion 10: property suites at >= 100 cases each ----------------------

params = st.fractions(min_value=F(-7, 2), max_value=F(7, 2), max_denominator=6)
lower_params = params.filter(lambda b: not (b <= 0 and b.denominator == 1))


@settings(max_examples=100, deadline=None)
@given(st.lists(params, min_size=1, max_size=4), st.data())
def _prop_recurrence(upper, data):
    lower = data.draw(st.lists(lower_params, min_size=len(upper) - 1,
                               max_size=len(upper) - 1))
    cs = coeff_list(HypergeometricSpec(tuple(upper), tuple(lower)), 50)
    for n in range(51):
        direct = F(1)
        for a in upper:
            for k in range(n):
                direct *= a + k
        for b in [F(1)] + lower:
            for k in range(n):
                direct /= b + k
        assert cs[n] == direct


def test_criterion_10_property_suites():
    suites = (("reversion/composition round trip", _te.test_reversion_round_trip),
              ("ball nesting", _tn.test_ball_soundness_nesting),
              ("recurrence vs direct products, n <= 50", _prop_recurrence),
              ("Newton lifting zero residual", _te.test_newton_lifting_zero_residual))
    outcomes = {}
    for name, prop in suites:
        try:
            prop()
            outcomes[name] = True
        except AssertionError:
            outcomes[name] = False
    record(10, all(outcomes.values()), ">= 100 cases each: "
           + ", ".join(f"{k} {'ok' if v else 'FAILED'}" for k, v in outcomes.items()))


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
