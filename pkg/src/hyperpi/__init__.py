"""Hypergeometric 1/pi series: rigorous evaluation, transformations, translation."""
