"""Text forms of exact rationals shared by the JSON and CSV writers."""
from __future__ import annotations

from fractions import Fraction

DECIMAL_DIGITS = 15


def fraction_text(x: Fraction) -> str:
    """``num/den`` always, so that ``Fraction(text)`` gives back ``x``."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def decimal_text(x: Fraction, digits: int = DECIMAL_DIGITS) -> str:
    x = Fraction(x)
    sign = "-" if x < 0 else ""
    x = abs(x)
    scaled = round(x * 10**digits)
    whole, frac = divmod(scaled, 10**digits)
    return f"{sign}{whole}.{frac:0{digits}d}"


def rational(x: Fraction | None) -> dict | None:
    if x is None:
        return None
    return {"exact": fraction_text(x), "decimal": decimal_text(x)}
