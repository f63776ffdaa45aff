"""Exact rational arithmetic on the circle R/Z.

All spacing computations in this package compare rationals exactly
(fractions.Fraction compares by cross-multiplied big integers); floats
appear only in reports.  Minimal gaps between power-denominator Farey
fractions scale like Q^(-2k) and silently collide in doubles.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import InvalidArgumentError


def make_rational(p: int, q: int) -> Fraction:
    """Reduced fraction p/q; q must be a positive integer."""
    if q < 1:
        raise InvalidArgumentError(f"denominator must be >= 1, got {q}")
    return Fraction(p, q)


def mod1(x: Fraction) -> Fraction:
    """Representative of x in [0, 1)."""
    return x - (x.numerator // x.denominator)


def circle_distance(x: Fraction, y: Fraction) -> Fraction:
    """Distance from x - y to the nearest integer, exactly; lies in [0, 1/2]."""
    d = mod1(x - y)
    return min(d, 1 - d)


def rational_str(x: Fraction) -> str:
    """Serialization used in all JSON/CSV output: "p/q"."""
    return f"{x.numerator}/{x.denominator}"


def parse_rational(s: str) -> Fraction:
    """Inverse of rational_str; also accepts plain integers and decimals."""
    s = s.strip()
    if "/" in s:
        p, q = s.split("/", 1)
        return make_rational(int(p), int(q))
    return Fraction(s)
