"""Exact rational scalars.

The scalar type is the stdlib Fraction, which already keeps the canonical
form (positive denominator, gcd 1, arbitrary precision). This module only
adds the "p/q" string codec used by all JSON interfaces.
"""

from fractions import Fraction


def rat(value) -> Fraction:
    """Coerce ints, 'p/q' strings, or Fractions to Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as a rational")


def format_rat(q: Fraction) -> str:
    """Render as 'p/q', or just 'p' for integers."""
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"
