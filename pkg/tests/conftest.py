"""Shared fixtures: a roster of small systems covering the size range."""

from fractions import Fraction

import pytest

from boxlab.system import FiniteSystem


def frac(s) -> Fraction:
    return Fraction(s)


def uniform(n: int) -> tuple[Fraction, ...]:
    return tuple(Fraction(1, n) for _ in range(n))


def shift(n: int, by: int = 1) -> tuple[int, ...]:
    return tuple((x + by) % n for x in range(n))


Z4_TWO = FiniteSystem(uniform(4), (shift(4, 1), shift(4, 2)))
Z2_PAIR = FiniteSystem(uniform(2), ((1, 0), (1, 0)))
IDENTITY4 = FiniteSystem(uniform(4), ((0, 1, 2, 3),))
IDENTITY4_PAIR = FiniteSystem(uniform(4), ((0, 1, 2, 3), (0, 1, 2, 3)))
BLOCKS4 = FiniteSystem(uniform(4), ((1, 0, 3, 2),))
BLOCKS4_MIXED = FiniteSystem(uniform(4), ((1, 0, 3, 2), (0, 1, 2, 3)))
Z6_TWO = FiniteSystem(uniform(6), (shift(6, 2), shift(6, 3)))
KLEIN = FiniteSystem(uniform(4), ((1, 0, 3, 2), (2, 3, 0, 1)))
NONUNIFORM = FiniteSystem(
    (frac("1/6"), frac("1/6"), frac("1/3"), frac("1/3")),
    ((1, 0, 3, 2), (0, 1, 2, 3)),
)
ZERO_WEIGHT = FiniteSystem(
    (frac("1/2"), frac("1/2"), frac("0")), ((1, 0, 2), (0, 1, 2))
)
Z5_THREE = FiniteSystem(uniform(5), (shift(5, 1), shift(5, 2), shift(5, 3)))

# (name, system, order) with d = len(order) <= 3 and n <= 6
ROSTER = [
    ("z4-two", Z4_TWO, (0, 1)),
    ("z2-pair", Z2_PAIR, (0, 1)),
    ("identity4", IDENTITY4, (0,)),
    ("identity4-pair", IDENTITY4_PAIR, (0, 1)),
    ("blocks4", BLOCKS4, (0,)),
    ("blocks4-mixed", BLOCKS4_MIXED, (0, 1)),
    ("z6-two", Z6_TWO, (0, 1)),
    ("klein", KLEIN, (0, 1)),
    ("nonuniform", NONUNIFORM, (0, 1)),
    ("zero-weight", ZERO_WEIGHT, (0, 1)),
    ("z5-three", Z5_THREE, (0, 1, 2)),
]


@pytest.fixture(params=ROSTER, ids=[name for name, _, _ in ROSTER])
def roster_case(request):
    return request.param
