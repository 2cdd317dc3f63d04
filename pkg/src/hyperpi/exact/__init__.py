"""Exact arithmetic: rationals, polynomials, rational functions, truncated series."""
from fractions import Fraction as Rational

from .parse import (ExpressionError, parse_bipoly, parse_ratfunc, parse_rational,
                    parse_rational_list)
from .poly import BiPoly, Poly, RationalFunction, bipoly_substitute, poly_gcd, ratfunc_expand
from .series import (TruncatedSeries, series_add, series_compose, series_div, series_mul,
                     series_newton_root, series_reversion)

__all__ = [
    "Rational", "Poly", "BiPoly", "RationalFunction", "TruncatedSeries",
    "poly_gcd", "ratfunc_expand", "bipoly_substitute",
    "series_add", "series_mul", "series_div", "series_compose", "series_reversion",
    "series_newton_root", "ExpressionError", "parse_bipoly", "parse_ratfunc",
    "parse_rational", "parse_rational_list",
]
