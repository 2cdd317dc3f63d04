"""Rigorous enclosures of pi from Machin-type arctangent formulas.

These are deliberately unrelated to any hypergeometric 1/pi series, so that
the catalog can be checked against an independent value of pi.
"""
from __future__ import annotations

from functools import lru_cache

from .ball import BigReal

# pi = sum(c * arctan(1/k))
FORMULAS = {
    "machin": ((16, 5), (-4, 239)),
    "stormer": ((48, 18), (32, 57), (-20, 239)),
}


def _arctan_inv(k: int, scale_bits: int):
    """floor-ish fixed-point arctan(1/k) * 2**scale_bits, and an error bound in ulps.

    Each term is truncated (error < 1 ulp); the alternating tail after the
    last nonzero term is below one more ulp.
    """
    one = 1 << scale_bits
    power = one // k
    k2 = k * k
    total, n, terms = 0, 0, 0
    while power:
        term = power // (2 * n + 1)
        total += -term if n & 1 else term
        power //= k2
        n += 1
        terms += 2
    return total, terms + 1


@lru_cache(maxsize=64)
def pi_value(prec: int, method: str = "machin") -> BigReal:
    """Ball containing pi with radius at most ``2**(1 - prec)``."""
    if prec < 8:
        raise ValueError("pi_value needs prec >= 8")
    try:
        formula = FORMULAS[method]
    except KeyError:
        raise ValueError(f"unknown pi method {method!r}") from None
    guard = 16 + prec.bit_length()
    bits = prec + guard
    mid, err = 0, 0
    for coef, k in formula:
        val, e = _arctan_inv(k, bits)
        mid += coef * val
        err += abs(coef) * e
    return BigReal(mid, -bits, err, -bits, prec + guard)
