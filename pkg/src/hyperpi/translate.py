"""Ramanujan-type identities for 1/pi, their numerical verification, and
translation of an identity along an algebraic transformation.

An identity says ``(a + b x d/dx) F(x) |_{x=x0} = q sqrt(d) / pi``. If
``F(x) = r(x) G(y(x))`` then the chain rule turns it into an identity for G
at ``y0 = y(x0)``.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Tuple, Union

from sympy import Poly as SymPoly, Rational as SymRational, factorint, symbols

from .errors import IncompatibleError, NumericalError
from .hyper import ACCELERATED, HypergeometricSpec, evaluate_weighted, hyp_sums, summation_method
from .numerics.ball import BigReal
from .numerics.constants import pi_value
from .numerics.radical import RadicalExpr, radical_eval
from .transform import AlgebraicTransformation, TransformPointData, eval_at

log = logging.getLogger(__name__)

RIGOROUS = "rigorous"
HEURISTIC = "heuristic-rigorous: acceleration assumes total monotonicity"

MAX_SCALE = 64
MAX_RATIO_DEN = 10 ** 4
MAX_MU_D = 10 ** 6


def squarefree_part(n: int) -> int:
    if n <= 0:
        raise ValueError("squarefree part needs a positive integer")
    out = 1
    for p, e in factorint(n).items():
        if e % 2:
            out *= p
    return out


@dataclass(frozen=True)
class MuConstant:
    """The constant ``q * sqrt(d) / pi``."""

    q: Fraction
    d: int

    def __post_init__(self):
        object.__setattr__(self, "q", Fraction(self.q))
        if self.q == 0:
            raise ValueError("mu_q must be nonzero")
        if not isinstance(self.d, int) or self.d <= 0:
            raise ValueError(f"mu_d must be a positive integer, got {self.d!r}")
        if squarefree_part(self.d) != self.d:
            raise ValueError(f"mu_d = {self.d} is not squarefree")

    def __str__(self) -> str:
        q = f"({self.q})" if self.q.denominator != 1 else str(self.q)
        if self.d == 1:
            return f"{q}/pi"
        return f"{q}*sqrt({self.d})/pi"


def mu_to_real(mu: MuConstant, prec: int) -> BigReal:
    size = abs(mu.q) * mu.d + 1
    wp = prec + 16 + max(0, size.numerator.bit_length() - size.denominator.bit_length())
    root = BigReal.exact(mu.d, wp).sqrt()
    return root * mu.q / pi_value(wp)


@dataclass(frozen=True)
class RamanujanIdentity:
    spec: HypergeometricSpec
    a: Fraction
    b: Fraction
    x0: Union[Fraction, RadicalExpr]
    mu: MuConstant
    field_disc: int
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))
        if not isinstance(self.x0, RadicalExpr):
            object.__setattr__(self, "x0", Fraction(self.x0))
        if not isinstance(self.field_disc, int) or self.field_disc <= 0:
            raise ValueError(f"field must be a positive integer, got {self.field_disc!r}")

    def x0_ball(self, prec: int) -> BigReal:
        if isinstance(self.x0, RadicalExpr):
            return radical_eval(self.x0, prec)
        return BigReal.exact(self.x0, prec)

    def same_identity(self, other: "RamanujanIdentity") -> bool:
        """Equality of the mathematical content, ignoring name and field tag."""
        return (self.spec == other.spec and self.a == other.a and self.b == other.b
                and self.x0 == other.x0 and self.mu == other.mu)

    def __str__(self) -> str:
        return (f"{self.spec} at x0 = {self.x0}: "
                f"({self.a} + {self.b}*x*d/dx) F = {self.mu}")


@dataclass(frozen=True)
class VerificationReport:
    lhs: BigReal
    rhs: BigReal
    residual: BigReal
    bound: Fraction
    digits: int
    passed: bool
    verified_digits: int
    method: str
    rigor: str


def working_prec(digits: int) -> int:
    return math.ceil(digits * math.log2(10)) + 32


def digits_from_bound(bound: Fraction, cap: int) -> int:
    if bound == 0:
        return cap
    n = 0
    while n < cap and bound * 10 ** (n + 1) <= 1:
        n += 1
    return n


def _lhs(spec, a, b, x0, prec):
    return evaluate_weighted(spec, a, b, x0, prec)


def verify_identity(ident: RamanujanIdentity, digits: int = 30,
                    prec: Optional[int] = None) -> VerificationReport:
    """Evaluate both sides and pass iff ``|lhs - rhs| <= 10**-digits`` rigorously."""
    if digits < 10:
        raise ValueError("verification needs digits >= 10")
    prec = max(working_prec(digits), prec or 0)
    try:
        lhs = _lhs(ident.spec, ident.a, ident.b, ident.x0, prec)
    except NumericalError as exc:
        raise type(exc)(f"{ident.name or 'identity'}: {exc}") from exc
    rhs = mu_to_real(ident.mu, prec)
    res = lhs - rhs
    bound = res.mag()
    method = summation_method(ident.x0)
    return VerificationReport(
        lhs, rhs, res, bound, digits, bound <= Fraction(1, 10 ** digits),
        digits_from_bound(bound, digits + 10), method,
        HEURISTIC if method == ACCELERATED else RIGOROUS)


def check_compatibility(id1: RamanujanIdentity, id2: RamanujanIdentity) -> bool:
    return id1.field_disc == id2.field_disc


def incompatibility_message(src: RamanujanIdentity, dst: RamanujanIdentity) -> str:
    return (f"refusing to translate {src.name or 'source'} (Q[sqrt(-{src.field_disc})]) "
            f"towards {dst.name or 'target'} (Q[sqrt(-{dst.field_disc})]): an algebraic "
            "transformation keeps the imaginary quadratic field of the underlying "
            "singular modulus, and no way is known to translate between identities "
            "whose fields differ")


# -- recognition ------------------------------------------------------------

def recognize_rational(v: BigReal, max_den: int, tol: Fraction) -> Optional[Fraction]:
    """The rational of denominator <= max_den nearest to v, if within tol + rad."""
    q = v.mid.limit_denominator(max_den)
    if abs(q - v.mid) <= tol + v.rad:
        return q
    return None


def recognize_mu(mu_ball: BigReal, prec: int, tol: Fraction) -> Optional[MuConstant]:
    """Match a ball to ``q sqrt(d) / pi`` with d <= 10**6 squarefree."""
    if mu_ball.contains_zero():
        return None
    t = mu_ball * pi_value(prec + 16)
    sq = recognize_rational(t * t, MAX_RATIO_DEN ** 2, tol * max(1, (t * t).mag()))
    if sq is None or sq <= 0:
        return None
    n, m = sq.numerator, sq.denominator
    d = squarefree_part(n * m)
    if d > MAX_MU_D:
        return None
    k = math.isqrt(n * m // d)
    if k * k * d != n * m:
        return None
    q = Fraction(k, m)
    if mu_ball.is_negative():
        q = -q
    return MuConstant(q, d)


def rational_roots_on_curve(P, x0: Fraction) -> list:
    """Exact rational roots w of P(x0, w) = 0."""
    coeffs = [row(x0) for row in P.w_coefficients()]
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    if len(coeffs) < 2:
        return []
    w = symbols("w")
    poly = SymPoly([SymRational(c.numerator, c.denominator) for c in reversed(coeffs)], w,
                   domain="QQ")
    out = []
    for fac, _ in poly.factor_list()[1]:
        if fac.degree() == 1:
            c1, c0 = fac.all_coeffs()
            r = -Fraction(int(c0.p), int(c0.q)) / Fraction(int(c1.p), int(c1.q))
            out.append(r)
    return out


def _recognize_y0(T: AlgebraicTransformation, pt: TransformPointData, tol: Fraction):
    if pt.x0_exact is not None:
        hits = [r for r in rational_roots_on_curve(T.curve_y.P, pt.x0_exact)
                if pt.y0.contains(r)]
        return hits[0] if len(hits) == 1 else None
    q = recognize_rational(pt.y0, MAX_RATIO_DEN ** 2, tol)
    if q is not None and not pt.y0.contains(q):
        return None
    return q


# -- translation ------------------------------------------------------------

@dataclass(frozen=True)
class RawTranslation:
    a_hat: BigReal
    b_hat: BigReal
    y0: BigReal
    mu_hat: BigReal


@dataclass
class TranslationResult:
    source: RamanujanIdentity
    transformation: str
    point: TransformPointData
    raw: RawTranslation
    shorthand: Tuple[BigReal, BigReal]
    normalized: Optional[RamanujanIdentity]
    scale: Optional[BigReal]
    scale_m: Optional[Fraction]
    chain_rule_ok: bool
    certificate: Optional[VerificationReport]
    flags: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.normalized is not None and self.certificate is not None \
            and self.certificate.passed


def chain_rule(a, b, mu: BigReal, x0: BigReal, pt: TransformPointData) -> RawTranslation:
    """Coefficients for G at y0 from F = r G(y).

    (a + b x d/dx)(r G(y)) = (a r + b x r') G + b x r y' G'(y), so dividing by
    r0 gives a_hat = a + b x0 r'/r0, b_hat = b (x0/y0) y', mu_hat = mu / r0.
    """
    if pt.y0.contains_zero():
        raise NumericalError("y0 enclosure contains 0: the translated point is degenerate")
    a_hat = pt.dr_dx * x0 / pt.r0 * b + a
    b_hat = pt.dy_dx * x0 / pt.y0 * b
    return RawTranslation(a_hat, b_hat, pt.y0, mu / pt.r0)


def _normalize(raw: RawTranslation, prec: int, flags: list):
    """Scale so that (a_hat, b_hat) become small coprime-looking integers.

    Tries scale 1 first (the raw pair is already rational), else the
    smallest integer m <= 64 with m * b_hat / a_hat an integer.
    """
    tol = Fraction(1, 1 << (prec // 2))
    a_q = recognize_rational(raw.a_hat, MAX_RATIO_DEN, tol)
    b_q = recognize_rational(raw.b_hat, MAX_RATIO_DEN, tol)
    mu = recognize_mu(raw.mu_hat, prec, tol)
    if a_q is not None and b_q is not None and mu is not None and a_q != 0:
        return a_q, b_q, mu, BigReal.exact(1, prec), Fraction(1)
    if raw.a_hat.contains_zero():
        flags.append("a_hat encloses 0; no normalization attempted")
        return None
    ratio = recognize_rational(raw.b_hat / raw.a_hat, MAX_RATIO_DEN, tol)
    if ratio is None:
        flags.append("b_hat/a_hat not recognized as a rational of denominator <= 10^4")
        return None
    m = ratio.denominator if ratio.denominator <= MAX_SCALE else None
    if m is None:
        flags.append(f"b_hat/a_hat = {ratio} needs a scale above {MAX_SCALE}")
        return None
    scale = BigReal.exact(m, prec) / raw.a_hat
    mu = recognize_mu(raw.mu_hat * scale, prec, tol)
    if mu is None:
        flags.append("scaled mu_hat not recognized as q*sqrt(d)/pi")
        return None
    return Fraction(m), ratio * m, mu, scale, Fraction(m)


def translate(ident: RamanujanIdentity, T: AlgebraicTransformation, prec: int = 128,
              target_field: Optional[int] = None, verify_digits: int = 40,
              route: str = "auto", name: Optional[str] = None) -> TranslationResult:
    """Chain-rule translation of ``ident`` along ``T``, then normalization
    and independent re-verification of the emitted identity."""
    if ident.spec != T.source:
        raise IncompatibleError(
            f"identity {ident.name} is for {ident.spec}, transformation {T.name} starts from {T.source}")
    wp = prec + 32
    x0 = ident.x0
    pt = eval_at(T, x0, prec=wp, route=route)
    xb = ident.x0_ball(wp + 32)
    mu = mu_to_real(ident.mu, wp)
    raw = chain_rule(ident.a, ident.b, mu, xb, pt)
    flags: list = []
    shorthand = (pt.dr_dx * xb * ident.b + ident.a,
                 pt.dy_dx * xb * pt.r0 / pt.y0 * ident.b)

    tol = Fraction(1, 1 << (prec // 2))
    y_exact = _recognize_y0(T, pt, tol)
    if y_exact is None:
        flags.append("y0 not recognized as a rational point of the y-curve")

    # the raw triple must satisfy the target identity within radii
    s0, s1 = hyp_sums(T.target, y_exact if y_exact is not None else pt.y0, prec)
    chain_ok = (s0 * raw.a_hat + s1 * raw.b_hat - raw.mu_hat).contains_zero()
    if not chain_ok:
        flags.append("raw chain-rule triple does not satisfy the target identity")

    normalized = certificate = scale = scale_m = None
    norm = _normalize(raw, wp, flags) if y_exact is not None else None
    if norm is not None:
        a_n, b_n, mu_n, scale, scale_m = norm
        normalized = RamanujanIdentity(
            T.target, a_n, b_n, y_exact, mu_n,
            target_field if target_field is not None else ident.field_disc,
            name or f"{ident.name}_via_{T.name}")
        certificate = verify_identity(normalized, verify_digits)
        if not certificate.passed:
            flags.append("normalized identity failed re-verification")
    return TranslationResult(ident, T.name, pt, raw, shorthand, normalized, scale, scale_m,
                             chain_ok, certificate, flags)


__all__ = [
    "MuConstant", "RamanujanIdentity", "VerificationReport", "TranslationResult",
    "RawTranslation", "mu_to_real", "verify_identity", "check_compatibility",
    "incompatibility_message", "recognize_rational", "recognize_mu", "chain_rule",
    "translate", "squarefree_part", "working_prec", "digits_from_bound",
]
