"""Exact rational scalars and the wire format used everywhere in this package.

Every coordinate, slope, length-squared and measure in tailsurf is a
``fractions.Fraction``: arbitrary-precision, always stored reduced with a
positive denominator, so equality is canonical and arithmetic never loses
information.  Floats appear only inside the SVG renderer as a display shadow.

Irrational lengths never occur as stored values: a segment of slope m is
carried as (horizontal displacement, slope) and compared through its squared
length, which is rational again.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Tuple, Union

#: The universal scalar.  ``Fraction`` already guarantees the two invariants
#: this package relies on: gcd(|numerator|, denominator) == 1 and
#: denominator > 0.
Rational = Fraction

#: A point of the polygon plane, as an (x, y) pair of rationals.
Point = Tuple[Fraction, Fraction]

RationalLike = Union[Fraction, int, str]


def rat(value: RationalLike, denominator: int | None = None) -> Fraction:
    """Coerce to an exact rational; ``rat(3, 7)`` and ``rat("3/7")`` agree."""
    if denominator is not None:
        return Fraction(value, denominator)
    return Fraction(value)


def mod_one(x: Fraction) -> Fraction:
    """Fractional part x - floor(x), always in [0, 1)."""
    return x % 1


def length_squared(dx: Fraction, dy: Fraction) -> Fraction:
    """Squared Euclidean length of the displacement (dx, dy)."""
    return dx * dx + dy * dy


def format_rational(x: RationalLike) -> str:
    """Serialize as ``"p/q"`` in lowest terms; integers render as ``"5/1"``."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"`` (or a bare integer) into a reduced Fraction."""
    return Fraction(text.strip())


def format_point(p: Point) -> list[str]:
    """A point as the two-element ["p/q", "p/q"] wire form."""
    return [format_rational(p[0]), format_rational(p[1])]


def parse_point(text: str) -> Point:
    """Parse ``"P/Q,P/Q"`` into an exact point."""
    parts = text.split(",")
    if len(parts) != 2:
        raise ValueError(f"expected 'x,y' with rational components, got {text!r}")
    return (parse_rational(parts[0]), parse_rational(parts[1]))
