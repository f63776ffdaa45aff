from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from sievelab.errors import InvalidArgumentError
from sievelab.exactmath import (
    circle_distance,
    make_rational,
    mod1,
    parse_rational,
    rational_str,
)

rationals = st.fractions(
    min_value=Fraction(-100), max_value=Fraction(100), max_denominator=10_000
)


def test_make_rational_reduces():
    assert make_rational(6, 4) == Fraction(3, 2)


def test_make_rational_rejects_bad_denominator():
    with pytest.raises(InvalidArgumentError):
        make_rational(1, 0)
    with pytest.raises(InvalidArgumentError):
        make_rational(1, -3)


@given(rationals)
def test_mod1_in_unit_interval(x):
    r = mod1(x)
    assert 0 <= r < 1
    assert (x - r).denominator == 1


@given(rationals, rationals)
def test_circle_distance_symmetric(x, y):
    assert circle_distance(x, y) == circle_distance(y, x)


@given(rationals, rationals)
def test_circle_distance_range_and_shift_invariance(x, y):
    d = circle_distance(x, y)
    assert 0 <= d <= Fraction(1, 2)
    assert circle_distance(x + 3, y) == d


@given(rationals, rationals, rationals)
def test_circle_distance_triangle(x, y, z):
    assert circle_distance(x, z) <= circle_distance(x, y) + circle_distance(y, z)


@given(rationals)
def test_rational_roundtrip(x):
    assert parse_rational(rational_str(x)) == x


def test_parse_rational_accepts_decimals_and_ints():
    assert parse_rational("2.5") == Fraction(5, 2)
    assert parse_rational("7") == Fraction(7)
    assert parse_rational(" 21/5 ") == Fraction(21, 5)
