"""Exact integer primitives used by every closed form.

Rationals are plain :class:`fractions.Fraction` values, which are always kept
in lowest terms with a positive denominator.
"""
from __future__ import annotations

from fractions import Fraction
from math import factorial

from .errors import NonExactDivision

Rational = Fraction


def binom(m: int, r: int) -> int:
    """Generalized binomial coefficient via the falling factorial.

    ``binom(m, 0) == 1`` for every integer ``m`` (including negative ``m``) and
    ``binom(m, r) == 0`` for ``r < 0``.
    """
    if r < 0:
        return 0
    if r == 0:
        return 1
    if 0 <= m < r:
        return 0
    num = 1
    for i in range(r):
        num *= m - i
    return num // factorial(r)


def rising_factorial(m: int, k: int) -> int:
    if k < 0:
        raise ValueError("rising factorial needs k >= 0")
    out = 1
    for i in range(k):
        out *= m + i
    return out


def exact_div(num: int, den: int) -> int:
    if den == 0:
        raise ZeroDivisionError("exact_div by zero")
    q, rem = divmod(num, den)
    if rem:
        raise NonExactDivision(f"{num} is not divisible by {den}")
    return q


def as_integer(value: Fraction | int) -> int:
    """Return ``value`` as an int, raising if it has a nontrivial denominator."""
    value = Fraction(value)
    if value.denominator != 1:
        raise NonExactDivision(f"expected an integer, got {value}")
    return value.numerator
