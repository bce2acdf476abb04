"""Exact rational scalars and their canonical text form.

All arithmetic in the library runs over ``fractions.Fraction`` (arbitrary
precision, canonical reduced form, positive denominator).  Serialization
uses ``p/q`` strings; a bare integer ``p`` is accepted and emitted when the
denominator is 1.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import ParseError

Rational = Fraction


def parse_rational(text: str) -> Fraction:
    """Parse ``p/q`` or ``p`` into an exact rational.

    Raises ParseError on malformed input or a zero denominator.
    """
    text = text.strip()
    if not text:
        raise ParseError("empty rational literal")
    try:
        return Fraction(text)
    except ZeroDivisionError:
        raise ParseError(f"zero denominator in rational literal {text!r}") from None
    except ValueError:
        raise ParseError(f"malformed rational literal {text!r}") from None


def format_rational(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"
