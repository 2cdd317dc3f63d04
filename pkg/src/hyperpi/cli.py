"""Command-line interface: evaluate, verify and translate catalog entries.

Exit codes: 0 pass, 1 verification failure or refused translation,
2 usage or parse error, 3 numerical failure (divergence, singular point,
branch tracking).
"""
from __future__ import annotations

import argparse
import sys
from decimal import ROUND_CEILING, Context, Decimal
from fractions import Fraction
from typing import List, Optional

from .catalog import (Catalog, CatalogVerificationError, ENV_VAR, load_catalog, lookup,
                      serialize_identity, serialize_transformation)
from .errors import CatalogError, HyperpiError, NumericalError
from .exact.parse import ExpressionError, parse_rational_list
from .hyper import HypergeometricSpec, evaluate_weighted, summation_method
from .numerics.radical import parse_number
from .transform import eval_at, point_ball, verify_param_consistency, verify_series_identity
from .translate import (check_compatibility, incompatibility_message, translate,
                        verify_identity, working_prec, digits_from_bound)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _ball_line(label: str, v, places: int) -> str:
    return f"{label} = {v.to_decimal(places)} +/- {v.rad_str()}"


def _bound_str(q: Fraction) -> str:
    if q == 0:
        return "0"
    ctx = Context(prec=2, rounding=ROUND_CEILING, Emin=-10**9, Emax=10**9)
    return f"{ctx.divide(Decimal(q.numerator), Decimal(q.denominator)):.1E}"


def _report_lines(rep, places: int) -> List[str]:
    return [_ball_line("lhs", rep.lhs, places),
            _ball_line("rhs", rep.rhs, places),
            f"residual <= {_bound_str(rep.bound)}",
            f"verified_digits = {rep.verified_digits}",
            f"method = {rep.method} ({rep.rigor})",
            "PASS" if rep.passed else "FAIL"]


def _identity(cat: Catalog, name: str):
    if name not in cat.identities:
        raise UsageError(f"no identity named {name!r} (try 'list')")
    return cat.identities[name]


def _transformation(cat: Catalog, name: str):
    if name not in cat.transformations:
        raise UsageError(f"no transformation named {name!r} (try 'list')")
    return cat.transformations[name]


# -- subcommands ------------------------------------------------------------

def cmd_eval(args, cat: Catalog, out) -> int:
    if args.name:
        ident = _identity(cat, args.name)
        spec, a, b, x0 = ident.spec, ident.a, ident.b, ident.x0
    else:
        if args.upper is None or args.lower is None or args.x is None:
            raise UsageError("eval needs NAME or all of --upper, --lower, --x")
        try:
            spec = HypergeometricSpec(tuple(parse_rational_list(args.upper)),
                                      tuple(parse_rational_list(args.lower)))
            x0 = parse_number(args.x)
            a = Fraction(parse_number(args.a))
            b = Fraction(parse_number(args.b))
        except (ExpressionError, ValueError, TypeError) as exc:
            raise UsageError(str(exc)) from None
    prec = max(working_prec(args.digits), args.prec or 0)
    v = evaluate_weighted(spec, a, b, x0, prec)
    out.write(f"series = {spec} at x = {x0}, weight ({a} + {b} n)\n")
    out.write(_ball_line("value", v, args.digits + 10) + "\n")
    out.write(f"verified_digits = {digits_from_bound(v.rad, args.digits + 10)}\n")
    out.write(f"method = {summation_method(x0)}\n")
    return EXIT_OK


def cmd_verify(args, cat: Catalog, out) -> int:
    if args.all == bool(args.name):
        raise UsageError("verify needs exactly one of NAME or --all")
    names = list(cat.identities) if args.all else [args.name]
    status = EXIT_OK
    for name in names:
        ident = _identity(cat, name)
        rep = verify_identity(ident, args.digits, args.prec)
        if args.all:
            out.write(f"[{name}]\n")
        for line in _report_lines(rep, args.digits + 10):
            out.write(line + "\n")
        if not rep.passed:
            status = EXIT_FAIL
    return status


def cmd_translate(args, cat: Catalog, out) -> int:
    src = _identity(cat, args.source)
    T = _transformation(cat, args.via)
    dst = None
    if args.to:
        dst = _identity(cat, args.to)
        if not check_compatibility(src, dst):
            out.write("REFUSED\n")
            sys.stderr.write(incompatibility_message(src, dst) + "\n")
            return EXIT_FAIL
    if src.spec != T.source:
        out.write("REFUSED\n")
        sys.stderr.write(f"{src.name} is an identity for {src.spec}, but {T.name} "
                         f"transforms {T.source}\n")
        return EXIT_FAIL
    res = translate(src, T, prec=args.prec or 128, verify_digits=args.digits,
                    route=args.route, target_field=dst.field_disc if dst else None)
    places = 30
    pt = res.point
    out.write(f"route = {pt.route}\n")
    out.write(_ball_line("y0", pt.y0, places) + "\n")
    out.write(_ball_line("r0", pt.r0, places) + "\n")
    out.write(_ball_line("dy/dx", pt.dy_dx, places) + "\n")
    out.write(_ball_line("dr/dx", pt.dr_dx, places) + "\n")
    out.write(_ball_line("a_hat_raw", res.raw.a_hat, places) + "\n")
    out.write(_ball_line("b_hat_raw", res.raw.b_hat, places) + "\n")
    out.write(_ball_line("mu_hat_raw", res.raw.mu_hat, places) + "\n")
    out.write(f"chain_rule_check = {'ok' if res.chain_rule_ok else 'FAILED'}\n")
    for flag in res.flags:
        out.write(f"note: {flag}\n")
    if res.normalized is None:
        out.write("normalized = none\nFAIL\n")
        return EXIT_FAIL
    n = res.normalized
    out.write(_ball_line("scale", res.scale, places) + f"  (= {res.scale_m}/a_hat_raw)\n")
    out.write(f"a = {n.a}\nb = {n.b}\nx0 = {n.x0}\nmu = {n.mu}\n")
    out.write("\n" + serialize_identity(n) + "\n")
    for line in _report_lines(res.certificate, args.digits + 10):
        out.write(line + "\n")
    status = EXIT_OK if res.ok else EXIT_FAIL
    if dst is not None:
        same = n.same_identity(dst)
        out.write(f"matches {dst.name}: {'yes' if same else 'no'}\n")
    return status


def cmd_check_transform(args, cat: Catalog, out) -> int:
    T = _transformation(cat, args.name)
    order = args.order
    ok = verify_series_identity(T, order)
    out.write(f"series identity to order {order}: {'PASS' if ok else 'FAIL'}\n")
    if T.param is not None:
        pc = verify_param_consistency(T, min(order, 10))
        out.write(f"parametrization consistency: {'PASS' if pc else 'FAIL'}\n")
        ok = ok and pc
    if T.param is not None and T.p0 is not None:
        prec = args.prec or 128
        pb = T.param.X(_p0_ball(T, prec))
        out.write(_ball_line("x(p0)", pb, 30) + "\n")
        data = eval_at(T, _x_of_p0(T, prec), prec=prec, route="parametric")
        out.write(_ball_line("y(p0)", data.y0, 30) + "\n")
        out.write(_ball_line("r(p0)", data.r0, 30) + "\n")
        if args.implicit:
            imp = eval_at(T, data.x0_exact if data.x0_exact is not None else data.x0,
                          prec=prec, route="implicit")
            agree = all(u.overlaps(v) for u, v in (
                (data.y0, imp.y0), (data.r0, imp.r0), (data.dy_dx, imp.dy_dx),
                (data.dr_dx, imp.dr_dx)))
            out.write(f"implicit route agrees: {'PASS' if agree else 'FAIL'}\n")
            ok = ok and agree
    out.write("PASS\n" if ok else "FAIL\n")
    return EXIT_OK if ok else EXIT_FAIL


def _p0_ball(T, prec):
    return point_ball(T.p0, prec + 32)


def _x_of_p0(T, prec):
    """x(p0), as an exact rational when the enclosure pins one down."""
    xb = T.param.X(_p0_ball(T, prec))
    q = xb.mid.limit_denominator(10 ** 6)
    return q if xb.contains(q) else xb


def cmd_list(args, cat: Catalog, out) -> int:
    for name, ident in cat.identities.items():
        out.write(f"identity        {name:14s} {ident.spec} x0 = {ident.x0}  "
                  f"field = {ident.field_disc}\n")
    for name, T in cat.transformations.items():
        extra = " (parametrized)" if T.param is not None else ""
        out.write(f"transformation  {name:14s} {T.source} -> {T.target}{extra}\n")
    return EXIT_OK


def cmd_show(args, cat: Catalog, out) -> int:
    try:
        kind, obj = lookup(cat, args.name)
    except KeyError:
        raise UsageError(f"no entry named {args.name!r}") from None
    text = serialize_identity(obj) if kind == "identity" else serialize_transformation(obj)
    out.write(text)
    return EXIT_OK


# -- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--catalog", default=None,
                        help=f"catalog file (default: ${ENV_VAR}, else the built-in catalog)")
    common.add_argument("--digits", type=int, default=30, help="decimal digits to verify")
    common.add_argument("--prec", type=int, default=None, help="working precision in bits")
    common.add_argument("--order", type=int, default=30, help="series order for transformations")
    common.add_argument("--skip-load-check", action="store_true",
                        help="do not verify catalog entries when loading")

    p = argparse.ArgumentParser(prog="hyperpi", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("eval", parents=[common], help="evaluate (a + b x d/dx) F at a point")
    e.add_argument("name", nargs="?", help="identity whose left side to evaluate")
    e.add_argument("--upper", help="comma-separated upper parameters")
    e.add_argument("--lower", help="comma-separated lower parameters")
    e.add_argument("--x", help="evaluation point (rational or radical)")
    e.add_argument("--a", default="1")
    e.add_argument("--b", default="0")
    e.set_defaults(func=cmd_eval)

    v = sub.add_parser("verify", parents=[common], help="verify identities numerically")
    v.add_argument("name", nargs="?")
    v.add_argument("--all", action="store_true", help="verify every identity in the catalog")
    v.set_defaults(func=cmd_verify)

    t = sub.add_parser("translate", parents=[common],
                       help="translate an identity along a transformation")
    t.add_argument("source")
    t.add_argument("--via", required=True, help="transformation name")
    t.add_argument("--to", help="expected target identity (checked for field compatibility)")
    t.add_argument("--route", choices=("auto", "parametric", "implicit"), default="auto")
    t.set_defaults(func=cmd_translate)

    c = sub.add_parser("check-transform", parents=[common], help="check a transformation")
    c.add_argument("name")
    c.add_argument("--implicit", action="store_true",
                   help="also track branches numerically and compare with the parametrization")
    c.set_defaults(func=cmd_check_transform)

    ls = sub.add_parser("list", parents=[common], help="list catalog entries")
    ls.set_defaults(func=cmd_list)

    sh = sub.add_parser("show", parents=[common], help="print an entry in catalog format")
    sh.add_argument("name")
    sh.set_defaults(func=cmd_show)
    return p


def main(argv: Optional[List[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if args.digits < 10:
        sys.stderr.write("error: --digits must be at least 10\n")
        return EXIT_USAGE
    if args.order < 4:
        sys.stderr.write("error: --order must be at least 4\n")
        return EXIT_USAGE
    try:
        cat = load_catalog(args.catalog, verify=not args.skip_load_check)
    except (CatalogError, OSError) as exc:
        sys.stderr.write(f"error: cannot load catalog: {exc}\n")
        return EXIT_USAGE
    except CatalogVerificationError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_FAIL
    try:
        return args.func(args, cat, out)
    except UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except NumericalError as exc:
        sys.stderr.write(f"numerical failure: {exc}\n")
        return EXIT_NUMERIC
    except HyperpiError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
