"""Exact rational scalars.

All arithmetic uses :class:`fractions.Fraction`, which keeps values in lowest
terms with a positive denominator.  This module only adds strict conversion
and the canonical ``"p/q"`` string form used in every file format.
"""

from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational as _RationalABC

from .errors import MalformedInputError

Rational = Fraction

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")


def parse_rational(text: str) -> Fraction:
    """Parse ``"p"`` or ``"p/q"`` into a Fraction.

    >>> parse_rational("6/4")
    Fraction(3, 2)
    """
    if not isinstance(text, str):
        raise MalformedInputError(
            f"rational must be a string like '3/4', got {text!r}", code="malformed-rational"
        )
    match = _RATIONAL_RE.match(text)
    if match is None:
        raise MalformedInputError(f"cannot parse rational {text!r}", code="malformed-rational")
    num, den = match.groups()
    if den is not None and int(den) == 0:
        raise MalformedInputError(f"zero denominator in {text!r}", code="zero-denominator")
    return Fraction(int(num), int(den) if den is not None else 1)


def format_rational(value: Fraction | int) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def as_rational(value) -> Fraction:
    """Convert ints, Fractions and rational strings; floats are rejected."""
    if isinstance(value, bool):
        raise MalformedInputError(f"booleans are not rationals: {value!r}", code="malformed-rational")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    if isinstance(value, _RationalABC):
        return Fraction(value.numerator, value.denominator)
    raise MalformedInputError(
        f"expected an exact rational (int, Fraction or 'p/q'), got {type(value).__name__}",
        code="malformed-rational",
    )


def is_integral(value: Fraction) -> bool:
    return value.denominator == 1
