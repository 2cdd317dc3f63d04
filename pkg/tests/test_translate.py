from dataclasses import replace
from fractions import Fraction as F

import mpmath
import pytest

from hyperpi.errors import IncompatibleError
from hyperpi.numerics import BigReal
from hyperpi.transform import AlgebraicTransformation, eval_at
from hyperpi.translate import (MuConstant, RamanujanIdentity, chain_rule, check_compatibility,
                               incompatibility_message, mu_to_real, recognize_mu,
                               squarefree_part, translate, verify_identity)


def mp(q):
    return mpmath.mpf(q.numerator) / q.denominator


@pytest.mark.parametrize("q,d,ref", [
    (2, 1, lambda: 2 / mpmath.pi),
    (F(49, 9), 3, lambda: 49 / (3 * mpmath.sqrt(3) * mpmath.pi)),
    (4, 1, lambda: 4 / mpmath.pi),
])
def test_mu_to_real(q, d, ref):
    v = mu_to_real(MuConstant(q, d), 200)
    with mpmath.workprec(300):
        assert abs(mp(v.mid) - ref()) <= mp(v.rad)


def test_mu_constant_validation():
    with pytest.raises(ValueError):
        MuConstant(1, 12)
    with pytest.raises(ValueError):
        MuConstant(0, 3)
    assert str(MuConstant(F(49, 9), 3)) == "(49/9)*sqrt(3)/pi"
    assert squarefree_part(2 ** 5 * 3 ** 2 * 7) == 14


@pytest.mark.parametrize("name,digits", [
    ("bauer", 30), ("ramanujan42", 50), ("sixn4pi", 40), ("chudnovsky", 50)])
def test_builtin_identities_verify(builtin, name, digits):
    rep = verify_identity(builtin.identities[name], digits)
    assert rep.passed
    assert rep.verified_digits >= digits


def test_step_zero_digits(builtin):
    rep = verify_identity(builtin.identities["ramanujan42"], 50)
    s = "3.001679541740867825117222046370611403163548615329487998574326"
    assert rep.lhs.to_decimal(60) == s and rep.rhs.to_decimal(60) == s


def test_corrupted_identity_fails(builtin):
    bad = replace(builtin.identities["ramanujan42"], b=F(41))
    rep = verify_identity(bad, 30)
    assert not rep.passed
    assert rep.bound > F(1, 10 ** 5)


def test_bauer_translation(builtin, eq6):
    res = translate(builtin.identities["bauer"], eq6, prec=128)
    n = res.normalized
    assert (n.a, n.b, n.x0, n.mu) == (3, 40, F(1, 2401), MuConstant(F(49, 9), 3))
    assert res.certificate.passed and res.certificate.digits == 40
    assert res.chain_rule_ok
    assert n.same_identity(builtin.identities["ramanujan42"])
    assert n.field_disc == 2


def test_raw_ratio_encloses_3_over_40(builtin, eq6):
    res = translate(builtin.identities["bauer"], eq6, prec=128)
    ratio = res.raw.a_hat / res.raw.b_hat
    assert ratio.contains(F(3, 40))


def test_comments_shorthand_differs_from_chain_rule(builtin, eq6):
    # the r-free shorthand does not give the 3 : 40 ratio
    res = translate(builtin.identities["bauer"], eq6, prec=128)
    a_sh, b_sh = res.shorthand
    assert not (a_sh / b_sh).contains(F(3, 40))


@pytest.mark.parametrize("name", ["bauer", "ramanujan42", "sixn4pi", "chudnovsky"])
def test_identity_transformation_is_neutral(builtin, name):
    ident = builtin.identities[name]
    res = translate(ident, AlgebraicTransformation.identity(ident.spec), verify_digits=20)
    assert res.normalized.same_identity(ident)
    assert res.scale_m == 1


def test_translation_is_linear(builtin, eq6):
    pt = eval_at(eq6, F(-1), prec=160)
    x0 = BigReal.exact(-1, 160)
    mu = BigReal.exact(1, 160)
    r1 = chain_rule(F(1), F(4), mu, x0, pt)
    r2 = chain_rule(F(2), F(-7), mu, x0, pt)
    r12 = chain_rule(F(3), F(-3), mu, x0, pt)
    assert (r1.a_hat + r2.a_hat).overlaps(r12.a_hat)
    assert (r1.b_hat + r2.b_hat).overlaps(r12.b_hat)


def test_translate_requires_matching_source(builtin, eq6):
    with pytest.raises(IncompatibleError):
        translate(builtin.identities["ramanujan42"], eq6)


def test_compatibility(builtin):
    ids = builtin.identities
    assert check_compatibility(ids["bauer"], ids["ramanujan42"])
    assert not check_compatibility(ids["bauer"], ids["sixn4pi"])
    assert not check_compatibility(ids["bauer"], ids["chudnovsky"])
    msg = incompatibility_message(ids["bauer"], ids["chudnovsky"])
    assert "sqrt(-163)" in msg and "sqrt(-2)" in msg


def test_recognize_mu():
    for mu in (MuConstant(F(49, 9), 3), MuConstant(2, 1), MuConstant(F(-5, 7), 10005)):
        assert recognize_mu(mu_to_real(mu, 200), 200, F(1, 2 ** 100)) == mu
    junk = BigReal.exact(F(314159265358979, 10 ** 14) * F(123456789, 98765), 200)
    assert recognize_mu(junk, 200, F(1, 2 ** 100)) is None
