"""Exact rational helpers: integer scaling of rational weight vectors.

Arithmetic itself is stdlib ``fractions.Fraction`` (arbitrary precision,
always normalized); this module adds the scaling step that turns a rational
point into an integer weight vector, plus certificate serialization.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm

Rational = Fraction


def scale_to_integer(point) -> tuple[int, ...]:
    """Multiply a nonnegative rational vector by the lcm of its denominators.

    The result is the smallest integer multiple of the input direction, used
    as a weight vector; requires at least one strictly positive component.
    """
    fracs = [Fraction(x) for x in point]
    if any(x < 0 for x in fracs):
        raise ValueError("negative component in weight point")
    if all(x == 0 for x in fracs):
        raise ValueError("all-zero weight point cannot be scaled")
    g = lcm(*(x.denominator for x in fracs))
    out = tuple(int(x * g) for x in fracs)
    assert all(Fraction(c, g) == x for c, x in zip(out, fracs))
    return out


def check_weight_vector(c, n: int) -> tuple[int, ...]:
    """Validate a weight vector: length n, integer entries >= 0, sum >= 1."""
    weights = tuple(int(x) for x in c)
    if len(weights) != n:
        raise ValueError(f"weight vector has length {len(weights)}, expected {n}")
    if any(w < 0 for w in weights):
        raise ValueError("weight vector entries must be nonnegative")
    if sum(weights) < 1:
        raise ValueError("weight vector must have positive sum")
    return weights


def fraction_to_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def fraction_from_str(text: str) -> Fraction:
    num, _, den = text.partition("/")
    return Fraction(int(num), int(den) if den else 1)
