"""Containment and outward-rounding laws of the interval type."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from tvals.enclosure import Enclosure, RoundingError, halving_refinements

rationals = st.fractions(
    min_value=Fraction(-1000), max_value=Fraction(1000), max_denominator=10**6
)
nonzero_rationals = rationals.filter(lambda q: abs(q) > Fraction(1, 1000))
precisions = st.integers(min_value=16, max_value=192)


@given(rationals, precisions)
def test_from_fraction_contains_exact_value(q, bits):
    enclosure = Enclosure.from_fraction(q, bits)
    assert enclosure.lo_fraction <= q <= enclosure.hi_fraction
    assert enclosure.width() <= Fraction(abs(q) + 1, 2 ** (bits - 4))


@given(rationals, rationals, precisions)
def test_addition_contains_exact_sum(a, b, bits):
    result = Enclosure.from_fraction(a, bits) + Enclosure.from_fraction(b, bits)
    assert result.contains(a + b)


@given(rationals, rationals, precisions)
def test_subtraction_contains_exact_difference(a, b, bits):
    result = Enclosure.from_fraction(a, bits) - Enclosure.from_fraction(b, bits)
    assert result.contains(a - b)


@given(rationals, rationals, precisions)
def test_multiplication_contains_exact_product(a, b, bits):
    result = Enclosure.from_fraction(a, bits) * Enclosure.from_fraction(b, bits)
    assert result.contains(a * b)


@given(st.fractions(min_value=Fraction(-50), max_value=Fraction(50), max_denominator=1000),
       st.fractions(min_value=Fraction(-50), max_value=Fraction(50), max_denominator=1000),
       st.fractions(min_value=Fraction(-50), max_value=Fraction(50), max_denominator=1000),
       st.fractions(min_value=Fraction(-50), max_value=Fraction(50), max_denominator=1000))
def test_interval_multiplication_covers_all_corner_products(a, b, c, d):
    lo1, hi1 = min(a, b), max(a, b)
    lo2, hi2 = min(c, d), max(c, d)
    left = Enclosure.from_fraction_pair(lo1, hi1, 96)
    right = Enclosure.from_fraction_pair(lo2, hi2, 96)
    product = left * right
    for x in (lo1, hi1):
        for y in (lo2, hi2):
            assert product.contains(x * y)


@given(rationals, nonzero_rationals, precisions)
def test_division_contains_exact_quotient(a, b, bits):
    result = Enclosure.from_fraction(a, bits) / Enclosure.from_fraction(b, bits)
    assert result.contains(Fraction(a) / Fraction(b))


def test_division_by_interval_containing_zero_rejected():
    straddling = Enclosure.from_fraction_pair(Fraction(-1), Fraction(1), 64)
    with pytest.raises(RoundingError):
        Enclosure.exact_int(1) / straddling


@given(rationals, st.integers(min_value=0, max_value=7), precisions)
def test_integer_power_contains_exact_power(q, exponent, bits):
    enclosure = Enclosure.from_fraction(q, bits)
    assert enclosure.pow_int(exponent).contains(q**exponent)


@given(st.fractions(min_value=Fraction(-10), max_value=Fraction(10), max_denominator=1000),
       st.fractions(min_value=Fraction(-10), max_value=Fraction(10), max_denominator=1000),
       st.integers(min_value=0, max_value=5))
def test_straddling_interval_power_contains_endpoint_powers(a, b, exponent):
    lo, hi = min(a, b), max(a, b)
    enclosure = Enclosure.from_fraction_pair(lo, hi, 96)
    powered = enclosure.pow_int(exponent)
    assert powered.contains(lo**exponent)
    assert powered.contains(hi**exponent)
    if lo <= 0 <= hi:
        assert powered.contains(0 if exponent else 1)


@given(nonzero_rationals, st.integers(min_value=1, max_value=4))
def test_negative_power_is_reciprocal(q, exponent):
    enclosure = Enclosure.from_fraction(q, 128)
    assert enclosure.pow_int(-exponent).contains(Fraction(1, 1) / Fraction(q) ** exponent)


@given(rationals, st.integers(min_value=-20, max_value=20))
def test_scale_pow2_is_exact(q, shift):
    enclosure = Enclosure.from_fraction(q, 96)
    scaled = enclosure.scale_pow2(shift)
    assert scaled.lo_fraction == enclosure.lo_fraction * Fraction(2) ** shift
    assert scaled.hi_fraction == enclosure.hi_fraction * Fraction(2) ** shift


@given(rationals, rationals)
def test_hull_contains_both_operands(a, b):
    ea, eb = Enclosure.from_fraction(a, 64), Enclosure.from_fraction(b, 64)
    hull = ea.hull(eb)
    assert hull.contains(a) and hull.contains(b)


@given(rationals, st.fractions(min_value=0, max_value=10, max_denominator=1000))
def test_widen_expands_symmetrically(q, radius):
    enclosure = Enclosure.from_fraction(q, 96)
    widened = enclosure.widen(radius)
    assert widened.lo_fraction <= q - radius + Fraction(1, 2**80)
    assert widened.hi_fraction >= q + radius - Fraction(1, 2**80)


@given(rationals, precisions, st.integers(min_value=2, max_value=40))
def test_decimal_strings_round_trip_outward(q, bits, digits):
    enclosure = Enclosure.from_fraction(q, bits)
    lo, hi = enclosure.decimal_strings(digits)
    reparsed = Enclosure.from_decimal_strings(lo, hi, bits)
    assert reparsed.lo_fraction <= enclosure.lo_fraction
    assert reparsed.hi_fraction >= enclosure.hi_fraction
    assert reparsed.contains(q)


@given(rationals, rationals)
def test_certified_order_implies_disjoint(a, b):
    ea, eb = Enclosure.from_fraction(a, 96), Enclosure.from_fraction(b, 96)
    if ea.certified_lt(eb):
        assert a < b
        assert ea.separation(eb) > 0
    if ea.certified_gt(eb):
        assert a > b


@given(rationals, rationals)
def test_cmp_scalar_is_conservative(q, scalar):
    enclosure = Enclosure.from_fraction(q, 96)
    side = enclosure.cmp_scalar(scalar)
    if side > 0:
        assert q > scalar
    elif side < 0:
        assert q < scalar


@given(rationals, precisions)
def test_with_precision_keeps_containment(q, bits):
    enclosure = Enclosure.from_fraction(q, 192)
    coarse = enclosure.with_precision(bits)
    assert coarse.contains(q)
    assert coarse.lo_fraction <= enclosure.lo_fraction
    assert coarse.hi_fraction >= enclosure.hi_fraction


def test_intersect_requires_overlap():
    a = Enclosure.from_fraction_pair(0, 1, 64)
    b = Enclosure.from_fraction_pair(Fraction(1, 2), 2, 64)
    both = a.intersect(b)
    assert both.lo_fraction == Fraction(1, 2) and both.hi_fraction == 1
    c = Enclosure.from_fraction_pair(3, 4, 64)
    with pytest.raises(RoundingError):
        a.intersect(c)


def test_empty_interval_rejected():
    with pytest.raises(RoundingError):
        Enclosure.from_fraction_pair(2, 1, 64)


def test_halving_refinements_descend_to_floor():
    widths = list(halving_refinements(Fraction(1, 4), Fraction(1, 100)))
    assert widths[0] == Fraction(1, 4)
    assert all(b == a / 2 for a, b in zip(widths, widths[1:]))
    assert widths[-1] >= Fraction(1, 100) > widths[-1] / 2


@settings(max_examples=40)
@given(rationals, rationals, rationals)
def test_arithmetic_chain_containment(a, b, c):
    ea = Enclosure.from_fraction(a, 128)
    eb = Enclosure.from_fraction(b, 128)
    ec = Enclosure.from_fraction(c, 128)
    chained = (ea + eb) * ec - ea
    assert chained.contains((a + b) * c - a)
