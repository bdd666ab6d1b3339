"""Parsing and rendering of exact rationals.

Input documents carry fractions as ``"p/q"`` strings or bare integers;
structured output always renders them back as ``"p/q"`` (or ``"p"`` for
integers) so nothing ever passes through floating point.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Iterable, Union

RationalLike = Union[int, str, Fraction]


def as_fraction(value: RationalLike) -> Fraction:
    if isinstance(value, bool):
        raise TypeError(f"boolean is not a rational: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not text or "." in text or "e" in text.lower():
            raise ValueError(f"not an exact fraction string: {value!r}")
        return Fraction(text)
    if isinstance(value, float):
        raise TypeError(f"floating point value {value!r} rejected; use a 'p/q' string")
    raise TypeError(f"cannot interpret {value!r} as a rational")


def render(value: Fraction | int) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def approx(value: Fraction | int, digits: int = 6) -> str:
    """Decimal rendering for text reports, always marked approximate."""
    return f"≈{float(value):.{digits}g}"


def denominator_lcm(values: Iterable[Fraction | int]) -> int:
    out = 1
    for v in values:
        out = lcm(out, Fraction(v).denominator)
    return out
