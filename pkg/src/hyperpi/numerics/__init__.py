"""Rigorous arbitrary-precision real arithmetic and numerical building blocks."""
from .accel import alt_accel_sum
from .ball import BigReal, sqrt
from .constants import pi_value
from .radical import Leaf, RadicalExpr, parse_number, parse_radical, radical_eval
from .roots import refine_real_root

__all__ = [
    "BigReal", "sqrt", "pi_value", "RadicalExpr", "Leaf", "parse_radical",
    "parse_number", "radical_eval", "alt_accel_sum", "refine_real_root",
]
