"""Plain-text catalog of identities and transformations.

Format::

    # comment
    [identity NAME]
    upper = 1/2, 1/2, 1/2
    lower = 1, 1
    a = 1
    ...
    [transformation NAME]
    curve_y = x^4*w^4 - ...
        + 256*x^4          <- indented lines continue the previous value

Values are exact: rationals, radical expressions with ``sqrt``, bivariate
polynomials in x, w, and rational functions in p.
"""
from __future__ import annotations

import os
import re
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from math import gcd, lcm
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

from .errors import CatalogError, HyperpiError, SeedError
from .exact.parse import ExpressionError, parse_bipoly, parse_ratfunc, parse_rational
from .exact.poly import Poly, RationalFunction, format_univariate
from .exact.series import TruncatedSeries
from .hyper import HypergeometricSpec
from .numerics.radical import RadicalExpr, parse_number, radical_eval
from .transform import (AlgebraicTransformation, ImplicitCurve, RationalParametrization,
                        verify_param_consistency, verify_series_identity)
from .translate import MuConstant, RamanujanIdentity, verify_identity

ENV_VAR = "HYPERPI_CATALOG"

IDENTITY_KEYS = ("upper", "lower", "a", "b", "x0", "mu_q", "mu_d", "field")
TRANSFORM_KEYS = ("source_upper", "source_lower", "target_upper", "target_lower",
                  "curve_y", "curve_r", "seed_y", "seed_r")
TRANSFORM_OPTIONAL = ("param_x", "param_y", "param_r", "p0")

_HEADER = re.compile(r"^\[\s*(identity|transformation)\s+([A-Za-z_][A-Za-z0-9_.-]*)\s*\]\s*$")
_KEY = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)\s*=")


@dataclass
class Catalog:
    identities: Dict[str, RamanujanIdentity] = field(default_factory=dict)
    transformations: Dict[str, AlgebraicTransformation] = field(default_factory=dict)

    def names(self) -> List[str]:
        return list(self.identities) + list(self.transformations)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Catalog):
            return NotImplemented
        return (list(self.identities.items()) == list(other.identities.items())
                and list(self.transformations.items()) == list(other.transformations.items()))


@dataclass
class _Value:
    text: str
    line: int
    column: int


@dataclass
class _Section:
    kind: str
    name: str
    line: int
    values: Dict[str, _Value] = field(default_factory=dict)


# -- parsing ----------------------------------------------------------------

def _split_sections(text: str) -> List[_Section]:
    sections: List[_Section] = []
    current: Optional[_Section] = None
    last: Optional[_Value] = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        if line[0] in " \t":
            if last is None:
                raise CatalogError("continuation line without a preceding key", lineno, 1)
            last.text += " " + line.strip()
            continue
        if line.startswith("["):
            m = _HEADER.match(line)
            if not m:
                raise CatalogError(f"malformed section header {line.strip()!r}", lineno, 1)
            current = _Section(m.group(1), m.group(2), lineno)
            sections.append(current)
            last = None
            continue
        m = _KEY.match(line)
        if not m:
            raise CatalogError("expected 'key = value'", lineno, 1)
        if current is None:
            raise CatalogError("key outside of any section", lineno, 1)
        key = m.group(1)
        allowed = IDENTITY_KEYS if current.kind == "identity" else TRANSFORM_KEYS + TRANSFORM_OPTIONAL
        if key not in allowed:
            raise CatalogError(f"unknown key {key!r} in {current.kind} {current.name}", lineno, 1)
        if key in current.values:
            raise CatalogError(f"duplicate key {key!r} in {current.kind} {current.name}", lineno, 1)
        rest = line[m.end():]
        col = m.end() + len(rest) - len(rest.lstrip()) + 1
        last = _Value(rest.strip(), lineno, col)
        current.values[key] = last
    return sections


def _field_error(v: _Value, key: str, exc: Exception) -> CatalogError:
    col = v.column
    if isinstance(exc, ExpressionError) and exc.column is not None:
        col = v.column + exc.column - 1
    return CatalogError(f"{key}: {exc}", v.line, col)


def _get(sec: _Section, key: str, parser, required: bool = True):
    v = sec.values.get(key)
    if v is None:
        if required:
            raise CatalogError(f"{sec.kind} {sec.name} is missing key {key!r}", sec.line, 1)
        return None
    if not v.text and parser is not _rational_list:
        raise CatalogError(f"{key}: empty value", v.line, v.column)
    try:
        return parser(v.text)
    except (ExpressionError, ValueError, ZeroDivisionError, TypeError) as exc:
        raise _field_error(v, key, exc) from None


def _rational_list(text: str) -> List[Fraction]:
    if not text.strip():
        return []
    out = []
    offset = 0
    for item in text.split(","):
        lead = len(item) - len(item.lstrip())
        try:
            out.append(parse_rational(item))
        except ExpressionError as exc:
            col = offset + lead + (exc.column or 1)
            raise ExpressionError(f"malformed rational {item.strip()!r}: {exc}", col) from None
        offset += len(item) + 1
    return out


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ExpressionError as exc:
        raise ExpressionError(f"malformed rational {text!r}: {exc}", exc.column) from None


def _positive_int(text: str) -> int:
    q = _rational(text)
    if q.denominator != 1 or q <= 0:
        raise ValueError(f"expected a positive integer, got {text!r}")
    return int(q)


def _spec(sec: _Section, up_key: str, lo_key: str) -> HypergeometricSpec:
    upper = _get(sec, up_key, _rational_list)
    lower = _get(sec, lo_key, _rational_list)
    if len(upper) != len(lower) + 1:
        v = sec.values[lo_key]
        raise CatalogError(
            f"parameter-count mismatch: {len(upper)} upper need {len(upper) - 1} lower, "
            f"got {len(lower)}", v.line, v.column)
    try:
        return HypergeometricSpec(tuple(upper), tuple(lower))
    except ValueError as exc:
        v = sec.values[lo_key]
        raise CatalogError(str(exc), v.line, v.column) from None


def _identity(sec: _Section) -> RamanujanIdentity:
    spec = _spec(sec, "upper", "lower")
    a = _get(sec, "a", _rational)
    b = _get(sec, "b", _rational)
    x0 = _get(sec, "x0", parse_number)
    v = sec.values["x0"]
    size = abs(x0) if isinstance(x0, Fraction) else radical_eval(x0, 64).mig()
    if size > 1:
        raise CatalogError("x0 lies outside the unit disc", v.line, v.column)
    mu_q = _get(sec, "mu_q", _rational)
    mu_d = _get(sec, "mu_d", _positive_int)
    try:
        mu = MuConstant(mu_q, mu_d)
    except ValueError as exc:
        v = sec.values["mu_d"]
        raise CatalogError(str(exc), v.line, v.column) from None
    disc = _get(sec, "field", _positive_int)
    return RamanujanIdentity(spec, a, b, x0, mu, disc, sec.name)


def _transformation(sec: _Section) -> AlgebraicTransformation:
    source = _spec(sec, "source_upper", "source_lower")
    target = _spec(sec, "target_upper", "target_lower")
    curve_y = ImplicitCurve(_get(sec, "curve_y", parse_bipoly))
    curve_r = ImplicitCurve(_get(sec, "curve_r", parse_bipoly))
    seed_y = TruncatedSeries(_get(sec, "seed_y", _rational_list))
    seed_r = TruncatedSeries(_get(sec, "seed_r", _rational_list))
    parts = [_get(sec, k, parse_ratfunc, required=False) for k in ("param_x", "param_y", "param_r")]
    param = None
    if any(p is not None for p in parts):
        if not all(p is not None for p in parts):
            raise CatalogError(f"transformation {sec.name}: param_x, param_y, param_r go together",
                               sec.line, 1)
        param = RationalParametrization(*parts)
    p0 = _get(sec, "p0", parse_number, required=False)
    return AlgebraicTransformation(sec.name, source, target, curve_y, curve_r, seed_y, seed_r,
                                   param, p0)


def parse_catalog(text: str) -> Catalog:
    cat = Catalog()
    seen: Dict[str, int] = {}
    for sec in _split_sections(text):
        if sec.name in seen:
            raise CatalogError(f"duplicate name {sec.name!r} (first defined on line {seen[sec.name]})",
                               sec.line, 1)
        seen[sec.name] = sec.line
        if sec.kind == "identity":
            cat.identities[sec.name] = _identity(sec)
        else:
            cat.transformations[sec.name] = _transformation(sec)
    return cat


# -- serialization ----------------------------------------------------------

def _fmt_list(values) -> str:
    return ", ".join(str(Fraction(v)) for v in values)


def _fmt_number(v: Union[Fraction, RadicalExpr]) -> str:
    return str(v)


def _fmt_ratfunc(f: RationalFunction) -> str:
    """Integer-coefficient numerator over denominator."""
    k = lcm(*(c.denominator for c in f.num.coeffs + f.den.coeffs))
    num, den = f.num.scale(k), f.den.scale(k)
    g = 0
    for c in num.coeffs + den.coeffs:
        g = gcd(g, c.numerator)
    if g > 1:
        num, den = num.scale(Fraction(1, g)), den.scale(Fraction(1, g))
    if den.coeffs and den.coeffs[-1] < 0:
        num, den = num.scale(-1), den.scale(-1)
    n = format_univariate(num, "p")
    if den == Poly([1]):
        return n
    return f"({n})/({format_univariate(den, 'p')})"


def _wrap(key: str, value: str, width: int = 88) -> List[str]:
    """Split a long value at top-level ' + ' / ' - ' into continuation lines."""
    first = f"{key} = "
    if len(first) + len(value) <= width:
        return [first + value]
    lines, cur = [], first
    for tok in re.split(r"(?= [+-] )", value):
        if len(cur) + len(tok) > width and cur.strip() and cur != first:
            lines.append(cur.rstrip())
            cur = "    " + tok.lstrip()
        else:
            cur += tok
    lines.append(cur.rstrip())
    return lines


def serialize_identity(ident: RamanujanIdentity) -> str:
    rows = [f"[identity {ident.name}]",
            f"upper = {_fmt_list(ident.spec.upper)}",
            f"lower = {_fmt_list(ident.spec.lower)}",
            f"a = {ident.a}",
            f"b = {ident.b}",
            f"x0 = {_fmt_number(ident.x0)}",
            f"mu_q = {ident.mu.q}",
            f"mu_d = {ident.mu.d}",
            f"field = {ident.field_disc}"]
    return "\n".join(rows) + "\n"


def serialize_transformation(T: AlgebraicTransformation) -> str:
    rows = [f"[transformation {T.name}]",
            f"source_upper = {_fmt_list(T.source.upper)}",
            f"source_lower = {_fmt_list(T.source.lower)}",
            f"target_upper = {_fmt_list(T.target.upper)}",
            f"target_lower = {_fmt_list(T.target.lower)}"]
    rows += _wrap("curve_y", T.curve_y.P.to_str())
    rows += _wrap("curve_r", T.curve_r.P.to_str())
    rows.append(f"seed_y = {_fmt_list(T.seed_y.coeffs)}")
    rows.append(f"seed_r = {_fmt_list(T.seed_r.coeffs)}")
    if T.param is not None:
        rows += _wrap("param_x", _fmt_ratfunc(T.param.X))
        rows += _wrap("param_y", _fmt_ratfunc(T.param.Y))
        rows += _wrap("param_r", _fmt_ratfunc(T.param.R))
    if T.p0 is not None:
        rows.append(f"p0 = {_fmt_number(T.p0)}")
    return "\n".join(rows) + "\n"


def serialize(cat: Catalog) -> str:
    blocks = [serialize_identity(i) for i in cat.identities.values()]
    blocks += [serialize_transformation(t) for t in cat.transformations.values()]
    return "\n".join(blocks)


# -- loading ----------------------------------------------------------------

class CatalogVerificationError(HyperpiError):
    def __init__(self, name: str, reason: str):
        self.name = name
        super().__init__(f"catalog entry {name!r} failed load-time verification: {reason}")


def builtin_text() -> str:
    return resources.files("hyperpi").joinpath("data/builtin.cat").read_text(encoding="utf-8")


def default_catalog_path() -> Optional[Path]:
    env = os.environ.get(ENV_VAR)
    return Path(env) if env else None


def verify_catalog(cat: Catalog, digits: int = 20, order: int = 12) -> None:
    """Raise :class:`CatalogVerificationError` naming the first bad entry."""
    for name, ident in cat.identities.items():
        try:
            rep = verify_identity(ident, digits)
        except HyperpiError as exc:
            raise CatalogVerificationError(name, str(exc)) from exc
        if not rep.passed:
            raise CatalogVerificationError(
                name, f"|lhs - rhs| <= {float(rep.bound):.3e} exceeds 1e-{digits}")
    for name, T in cat.transformations.items():
        try:
            T.check_invariants(order)
        except (SeedError, ValueError) as exc:
            raise CatalogVerificationError(name, str(exc)) from exc
        if not verify_series_identity(T, order):
            raise CatalogVerificationError(name, f"series identity fails at order {order}")
        if T.param is not None and not verify_param_consistency(T, min(order, 10)):
            raise CatalogVerificationError(name, "parametrization disagrees with the curves")


def load_catalog(path: Optional[Union[str, Path]] = None, verify: bool = True,
                 digits: int = 20, order: int = 12) -> Catalog:
    """Parse a catalog file (default: $HYPERPI_CATALOG, else the built-in one)."""
    if path is None:
        path = default_catalog_path()
    text = builtin_text() if path is None else Path(path).read_text(encoding="utf-8")
    cat = parse_catalog(text)
    if verify:
        verify_catalog(cat, digits, order)
    return cat


def lookup(cat: Catalog, name: str) -> Tuple[str, object]:
    if name in cat.identities:
        return "identity", cat.identities[name]
    if name in cat.transformations:
        return "transformation", cat.transformations[name]
    raise KeyError(name)
