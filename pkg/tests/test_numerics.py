from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bellissard.errors import ParseError, UsageError
from bellissard.numerics import (
    Backend,
    Interval,
    Ordering,
    backend_of,
    coerce,
    compare,
    format_scalar,
    parse_decimal,
    to_float,
)


@pytest.mark.parametrize(
    "text, expected",
    [("2.1", Fraction(21, 10)), ("0", Fraction(0)), ("3.00", Fraction(3)), ("-0.05", Fraction(-1, 20)), (".5", Fraction(1, 2))],
)
def test_parse_decimal(text, expected):
    got = parse_decimal(text)
    assert got == expected
    assert got.denominator > 0


def test_parse_decimal_reduces():
    x = parse_decimal("3.00")
    assert (x.numerator, x.denominator) == (3, 1)
    assert format_scalar(parse_decimal("0")) == "0/1"


@pytest.mark.parametrize("text", ["abc", "", "1.2.3", "nan", "inf", "1e5", "2,1", "--1"])
def test_parse_decimal_rejects(text):
    with pytest.raises(ParseError):
        parse_decimal(text)


def test_compare_examples():
    assert compare(Fraction(121, 131), Fraction(1)) is Ordering.LT
    x = Fraction(7, 3)
    assert compare(x, x) is Ordering.EQ
    assert compare(Interval(1, 2), Interval(Fraction(3, 2), 3)) is Ordering.INDETERMINATE
    assert compare(Interval(1, 2), Interval(3, 4)) is Ordering.LT
    assert compare(Interval(5, 6), Interval(3, 4)) is Ordering.GT
    assert compare(Interval.point(2), Interval.point(2)) is Ordering.EQ
    assert compare(2.5, 1.0) is Ordering.GT


def test_compare_rejects_mixed_backends():
    with pytest.raises(UsageError):
        compare(Fraction(1), 1.0)
    with pytest.raises(UsageError):
        compare(Interval.point(1), Fraction(1))


def test_to_float_examples():
    assert to_float(Fraction(21, 10)) == 2.1
    assert to_float(Fraction(0)) == 0.0
    # long division: 121/131 = 0.92366412213740458...; int / int rounds correctly
    assert to_float(Fraction(121, 131)) == 121 / 131
    assert str(to_float(Fraction(121, 131))).startswith("0.9236641")
    assert to_float(Interval(1, 2)) == 1.5


def test_to_float_overflow():
    with pytest.raises(OverflowError):
        to_float(Fraction(10**400, 3))


def test_coerce_refuses_float_into_exact():
    with pytest.raises(UsageError):
        coerce(2.1, Backend.BIG_RATIONAL)
    assert coerce("2.1", Backend.BIG_RATIONAL) == Fraction(21, 10)
    assert coerce("2.1", Backend.FLOAT64) == 2.1
    assert backend_of(coerce("2.1", "interval")) is Backend.INTERVAL


def test_interval_division_by_zero_interval():
    with pytest.raises(ZeroDivisionError):
        Interval(1, 2) / Interval(-1, 1)
    with pytest.raises(ZeroDivisionError):
        Interval(1, 2) / Interval(0, 1)


def test_interval_rejects_reversed_endpoints():
    with pytest.raises(UsageError):
        Interval(2, 1)


def test_interval_outward_rounding_keeps_enclosure():
    assert Interval.point(Fraction(1, 3), precision=20).width == 0  # small endpoints stay exact
    x = Fraction(2**70 + 1, 3**45)
    iv = Interval.point(x, precision=20)
    assert iv.lo < x < iv.hi
    assert iv.width / x < Fraction(1, 2**18)
    assert iv.lo.denominator & (iv.lo.denominator - 1) == 0


rationals = st.fractions(min_value=-1000, max_value=1000, max_denominator=10**6)


@given(rationals, rationals)
def test_compare_matches_cross_multiplication(a, b):
    lhs, rhs = a.numerator * b.denominator, b.numerator * a.denominator
    expected = Ordering.LT if lhs < rhs else Ordering.GT if lhs > rhs else Ordering.EQ
    assert compare(a, b) is expected


def _fuzz(x: Fraction, w: Fraction) -> Interval:
    return Interval(x - w, x + w, precision=64)


@settings(max_examples=300)
@given(
    rationals,
    rationals,
    st.fractions(min_value=0, max_value=1, max_denominator=1000),
    st.fractions(min_value=0, max_value=1, max_denominator=1000),
    st.sampled_from(["+", "-", "*", "/"]),
)
def test_interval_ops_enclose_exact_result(x, y, wx, wy, op):
    ix, iy = _fuzz(x, wx), _fuzz(y, wy)
    if op == "/" and iy.contains(0):
        with pytest.raises(ZeroDivisionError):
            ix / iy
        return
    exact = {"+": x + y, "-": x - y, "*": x * y, "/": x / y if y else None}[op]
    got = {"+": lambda: ix + iy, "-": lambda: ix - iy, "*": lambda: ix * iy, "/": lambda: ix / iy}[op]()
    assert got.lo <= got.hi
    assert got.contains(exact)


@given(
    st.integers(min_value=-(10**15) + 1, max_value=10**15 - 1),
    st.integers(min_value=0, max_value=30),
)
def test_decimal_round_trip(mantissa, places):
    # at most 15 significant digits
    digits = str(abs(mantissa)).rjust(places + 1, "0")
    text = ("-" if mantissa < 0 else "") + (digits[:-places] + "." + digits[-places:] if places else digits)
    assert to_float(parse_decimal(text)) == float(text)
