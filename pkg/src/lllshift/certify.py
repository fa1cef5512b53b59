"""Certified comparisons of e-multiples against 1.

The correctness criterion and the block-count threshold both hinge on a
strict inequality of the form e * q < 1 with q an exact rational. e is
irrational, so the comparison is done against a rational interval
enclosure of e that is tight to the last decimal digit shown. Either the
whole interval falls on one side of 1, giving a certified verdict, or
the caller is told the enclosure straddles 1.
"""
from __future__ import annotations

import enum
from fractions import Fraction

E_LOW = Fraction(2718281828459045, 10**15)
E_HIGH = Fraction(2718281828459046, 10**15)

CERT_BELOW = -1  # e*q < 1 certified
CERT_AT_OR_ABOVE = 1  # e*q >= 1 certified
UNDECIDED = 0  # enclosure straddles 1


def e_product_bounds(q: Fraction) -> tuple[Fraction, Fraction]:
    """Exact rational enclosure of e*q for q >= 0."""
    if q < 0:
        raise ValueError("q must be nonnegative")
    return (E_LOW * q, E_HIGH * q)


def compare_e_product_to_one(q: Fraction) -> int:
    """CERT_BELOW, CERT_AT_OR_ABOVE, or UNDECIDED for e*q versus 1."""
    lo, hi = e_product_bounds(q)
    if hi < 1:
        return CERT_BELOW
    if lo >= 1:
        return CERT_AT_OR_ABOVE
    return UNDECIDED


class Verdict(enum.Enum):
    """Outcome of the correctness test e * p * (d+1) < 1."""

    CORRECT = "correct"
    INCORRECT = "incorrect"
    BORDERLINE = "borderline"

    def __str__(self) -> str:
        return self.value


def correctness_verdict(q: Fraction) -> Verdict:
    cmp = compare_e_product_to_one(q)
    if cmp == CERT_BELOW:
        return Verdict.CORRECT
    if cmp == CERT_AT_OR_ABOVE:
        return Verdict.INCORRECT
    return Verdict.BORDERLINE
