"""Exact rational scalars.

All arithmetic in the package runs on ``gmpy2.mpq``. Values compare and hash
equal to :class:`fractions.Fraction`, so callers may pass either.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

import gmpy2

Q = gmpy2.mpq
RationalLike = Union[int, str, Fraction, "gmpy2.mpq"]

ZERO = Q(0)
ONE = Q(1)


def to_rational(value: RationalLike) -> "gmpy2.mpq":
    """Convert ``value`` to an exact rational; floats are rejected."""
    if isinstance(value, float):
        raise TypeError("floating point values are not accepted; use a 'p/q' string")
    if isinstance(value, str):
        return Q(value.strip())
    if isinstance(value, Fraction):
        return Q(value.numerator, value.denominator)
    return Q(value)


def format_rational(value: RationalLike) -> str:
    """Lossless ``"p/q"`` string in lowest terms (integers get ``/1``)."""
    q = to_rational(value)
    return f"{q.numerator}/{q.denominator}"


def floor(q) -> int:
    return int(math.floor(q))


def ceil(q) -> int:
    return int(math.ceil(q))
