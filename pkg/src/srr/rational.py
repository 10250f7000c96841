"""Exact rational parsing and formatting shared by every JSON surface."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable

SCHEMA_VERSION = "srr/1"


def q(x) -> Fraction:
    """Coerce ints, Fractions, "num/den" or decimal strings, and floats to Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        # floats from JSON are taken at their shortest decimal repr
        return Fraction(repr(x))
    if isinstance(x, str):
        return Fraction(x.strip())
    if hasattr(x, "numerator") and hasattr(x, "denominator"):
        return Fraction(int(x.numerator), int(x.denominator))
    raise TypeError(f"cannot interpret {x!r} as a rational")


def qvec(xs: Iterable) -> tuple[Fraction, ...]:
    return tuple(q(x) for x in xs)


def fmt(x) -> str:
    return str(q(x))


def fmtvec(xs: Iterable) -> list[str]:
    return [fmt(x) for x in xs]


def dec(x, places: int = 6) -> str:
    """Fixed-precision decimal rendering (for CSV output)."""
    f = q(x)
    scaled = round(f * 10**places)
    sign = "-" if scaled < 0 else ""
    scaled = abs(scaled)
    whole, frac = divmod(scaled, 10**places)
    return f"{sign}{whole}.{frac:0{places}d}" if places else f"{sign}{whole}"
