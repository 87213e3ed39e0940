"""Exact rational scalars.

``fractions.Fraction`` already keeps numerator and denominator reduced with a
positive denominator, so it is used directly as the scalar type.
"""
from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import reduce
from typing import Iterable, Union

Scalar = Fraction
Number = Union[int, Fraction, float]

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


def as_scalar(x) -> Fraction:
    """Coerce ``int``/``Fraction``/``"p/q"`` strings to a Fraction.

    Floats are rejected: converting them silently would pretend to an
    exactness the input never had.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        return Fraction(int(x))
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"cannot use {x!r} as an exact rational")


def parse_rational(text: str) -> Fraction:
    m = _RATIONAL_RE.match(text)
    if not m:
        raise ValueError(f"malformed rational literal {text!r}")
    num, den = m.group(1), m.group(2)
    if den is not None and int(den) == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(int(num), int(den) if den is not None else 1)


def format_scalar(x: Number, as_float: bool = False) -> str:
    if as_float or isinstance(x, float):
        return format(float(x), ".12g")
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def lcm_all(values: Iterable[int]) -> int:
    return reduce(math.lcm, values, 1)
