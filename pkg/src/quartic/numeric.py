"""Exact integer and rational helpers.

Python ints are unbounded and ``fractions.Fraction`` is always stored
reduced with a positive denominator, so both serve directly as the
whole-number and fraction types. This module adds the few n-ary helpers
the rest of the package needs, plus strict parsing of rational literals.
"""
from __future__ import annotations

import math
import re
from collections.abc import Iterable
from fractions import Fraction
from functools import reduce

__all__ = [
    "Fraction",
    "NoPrimitiveForm",
    "gcd_all",
    "lcm_all",
    "fraction_reduce",
    "rational_content",
    "parse_rational",
    "parse_integer",
    "format_rational",
]

_RATIONAL_RE = re.compile(r"^[+-]?\d+(/[+-]?\d+)?$")
_INTEGER_RE = re.compile(r"^[+-]?\d+$")


class NoPrimitiveForm(ValueError):
    """Raised when every value is zero, so no gcd-normalised form exists."""


def gcd_all(values: Iterable[int]) -> int:
    """Nonnegative gcd of all values; zeros are ignored."""
    values = [int(v) for v in values]
    if not any(values):
        raise NoPrimitiveForm("no primitive form: all values are zero")
    return reduce(math.gcd, values, 0)


def lcm_all(values: Iterable[int]) -> int:
    values = [int(v) for v in values]
    if not values:
        return 1
    if any(v == 0 for v in values):
        raise ValueError("lcm of a zero value is undefined")
    return reduce(math.lcm, (abs(v) for v in values), 1)


def fraction_reduce(num: int, den: int) -> Fraction:
    if den == 0:
        raise ZeroDivisionError("division by zero")
    return Fraction(num, den)


def rational_content(values: Iterable[Fraction | int]) -> Fraction:
    """Positive rational c such that values/c are coprime integers.

    Zeros are skipped; an all-zero input has content 1 by convention.
    """
    nonzero = [Fraction(v) for v in values if v]
    if not nonzero:
        return Fraction(1)
    return Fraction(
        reduce(math.gcd, (v.numerator for v in nonzero), 0),
        lcm_all(v.denominator for v in nonzero),
    )


def parse_rational(text: str) -> Fraction:
    """Parse ``"num/den"`` or a plain integer. Whitespace is rejected."""
    if not isinstance(text, str) or not _RATIONAL_RE.match(text):
        raise ValueError(f"not a rational literal: {text!r}")
    num, _, den = text.partition("/")
    return fraction_reduce(int(num), int(den) if den else 1)


def parse_integer(text: str) -> int:
    if not isinstance(text, str) or not _INTEGER_RE.match(text):
        raise ValueError(f"not an integer literal: {text!r}")
    return int(text)


def format_rational(value: Fraction | int) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"
