from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, strategies as st

from dyadic_search import coords
from dyadic_search.coords import (
    coord,
    coord_convex,
    coord_denormalize,
    coord_is_dyadic,
    domain_to_coord,
)
from dyadic_search.errors import ArithmeticCapacityError, ContractViolationError


@pytest.mark.parametrize(
    "a, b, w, expected",
    [
        (coord(0), coord(1), (1, 2), coord(1, 2)),
        (coord(1, 4), coord(1), (2, 3), coord(1, 2)),
        (coord(0), coord(1), (2, 3), coord(1, 3)),
    ],
)
def test_coord_convex_examples(a, b, w, expected):
    assert coord_convex(a, b, *w) == expected


@pytest.mark.parametrize("value, expected", [((1, 2), True), ((5, 8), True), ((1, 3), False), ((0, 1), True), ((1, 1), True)])
def test_coord_is_dyadic(value, expected):
    assert coord_is_dyadic(coord(*value)) is expected


@pytest.mark.parametrize(
    "a, lo, hi, expected",
    [(coord(1, 2), 0, 1, 0.5), (coord(1, 4), -2, 2, -1.0), (coord(0), 3, 7, 3.0)],
)
def test_coord_denormalize(a, lo, hi, expected):
    assert coord_denormalize(a, lo, hi) == expected


def test_lowest_terms():
    c = coord(6, 8)
    assert (c.numerator, c.denominator) == (3, 4)


def test_bad_weight_and_order_rejected():
    with pytest.raises(ContractViolationError):
        coord_convex(coord(0), coord(1), 3, 2)
    with pytest.raises(ContractViolationError):
        coord_convex(coord(1), coord(0), 1, 2)


def test_capacity_guard(monkeypatch):
    monkeypatch.setattr(coords, "MAX_DENOMINATOR_BITS", 3)
    assert coord_convex(coord(0), coord(1), 1, 4) == Fraction(3, 4)
    with pytest.raises(ArithmeticCapacityError):
        coord_convex(coord(0), coord(1, 8), 1, 2)


def test_domain_roundtrip():
    assert domain_to_coord(-1.0, -2.0, 2.0) == Fraction(1, 4)


unit_fracs = st.builds(
    lambda n, d: Fraction(min(n, d), d),
    st.integers(0, 10**6),
    st.integers(1, 10**6),
)
dyadics = st.builds(lambda k, h: Fraction(min(k, 2**h), 2**h), st.integers(0, 2**40), st.integers(0, 40))
weights = st.integers(1, 1000).flatmap(lambda d: st.tuples(st.integers(0, d), st.just(d)))


def _big_int_convex(a, b, w_num, w_den):
    # cross-multiplied integer evaluation, reduced by hand
    num = w_num * a.numerator * b.denominator + (w_den - w_num) * b.numerator * a.denominator
    den = w_den * a.denominator * b.denominator
    g = gcd(num, den)
    return num // g, den // g


@given(unit_fracs, unit_fracs, weights)
def test_convex_exact_against_integer_evaluation(x, y, w):
    a, b = min(x, y), max(x, y)
    got = coord_convex(a, b, *w)
    assert (got.numerator, got.denominator) == _big_int_convex(a, b, *w)
    assert a <= got <= b


@given(dyadics, dyadics)
def test_midpoint_of_dyadics_is_dyadic(x, y):
    a, b = min(x, y), max(x, y)
    assert coord_is_dyadic(coord_convex(a, b, 1, 2))
