"""Rational parsing and the canonical p/q text form"""

import re
from fractions import Fraction
from typing import Union

Number = Union[int, str, Fraction]

_RATIONAL = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


def to_fraction(value: Number) -> Fraction:
    """Convert an int, a Fraction or a ``"p/q"`` string to a Fraction.

    Floats are rejected: exact fields never silently round.

    Args:
        value: Value to convert

    Returns:
        The exact rational value

    Raises:
        ValueError: If the value is a float, a bool or malformed text
    """
    if isinstance(value, bool) or isinstance(value, float):
        raise ValueError(f"exact rational expected, got {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        match = _RATIONAL.match(value)
        if not match:
            raise ValueError(f"malformed rational {value!r}")
        numerator = int(match.group(1))
        denominator = int(match.group(2)) if match.group(2) else 1
        if denominator == 0:
            raise ValueError(f"zero denominator in {value!r}")
        return Fraction(numerator, denominator)
    raise ValueError(f"exact rational expected, got {value!r}")


def format_fraction(value: Fraction) -> str:
    """Format a rational as ``p/q`` (``p`` alone for integers)."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def sign(value: Fraction) -> int:
    if value > 0:
        return 1
    if value < 0:
        return -1
    return 0
