import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from rdbounds.exact_core import (
    HighPrecisionReal,
    UndecidableComparison,
    binom,
    ceil_div,
    checked_sub,
    factorial_ratio,
    hp_log,
    rank_exact,
    round_rational,
)


def _binom_by_product(n, k):
    num = 1
    for i in range(k):
        num *= n - i
    return num // math.factorial(k)


@pytest.mark.parametrize("n,k,expected", [
    (7, 0, 1),
    (17, 5, 6188),
    (532, 5, 348_490_040_976),
    (3, 5, 0),
])
def test_binom_values(n, k, expected):
    assert binom(n, k) == expected


@given(st.integers(0, 400), st.integers(0, 40))
def test_binom_matches_product_formula(n, k):
    assert binom(n, k) == _binom_by_product(n, k)


def test_binom_rejects_negative_and_bool():
    with pytest.raises(ValueError):
        binom(-1, 2)
    with pytest.raises(ValueError):
        binom(True, 1)


@pytest.mark.parametrize("a,b,expected", [(6, 3, 2), (6175, 12, 515), (45760, 64, 715), (7, 2, 4), (-7, 2, -3)])
def test_ceil_div(a, b, expected):
    assert ceil_div(a, b) == expected


def test_ceil_div_zero():
    with pytest.raises(ZeroDivisionError):
        ceil_div(1, 0)


@given(st.integers(-10**30, 10**30), st.integers(1, 10**6))
def test_ceil_div_agrees_with_fraction_ceiling(a, b):
    assert ceil_div(a, b) == math.ceil(Fraction(a, b))


def test_factorial_ratio():
    assert factorial_ratio(5, 5) == 1
    assert factorial_ratio(16, 4) == 871_782_912_000
    assert factorial_ratio(14, 4) + 1 == 3_632_428_801
    with pytest.raises(ValueError):
        factorial_ratio(3, 4)


@given(st.integers(0, 120), st.integers(0, 120))
def test_factorial_ratio_is_quotient(a, b):
    if a < b:
        a, b = b, a
    assert factorial_ratio(a, b) == math.factorial(a) // math.factorial(b)


def test_checked_sub():
    assert checked_sub(5, 5) == 0
    with pytest.raises(ValueError):
        checked_sub(2, 3)


@pytest.mark.parametrize("x,places,text", [
    (Fraction(871782912001, 348489762717), 3, "2.502"),
    (Fraction(1, 2), 0, "0"),
    (Fraction(3, 2), 0, "2"),
    (Fraction(2500, 1000), 1, "2.5"),
    (Fraction(-1, 3), 3, "-0.333"),
    (Fraction(5), 3, "5.000"),
])
def test_round_rational(x, places, text):
    assert round_rational(x, places) == text


def test_rank_exact():
    assert rank_exact([[1, 2, 3], [2, 4, 6], [0, 1, 1]]) == 2
    assert rank_exact([]) == 0
    assert rank_exact([[Fraction(1, 3), 0], [0, Fraction(2, 7)]]) == 2


def test_interval_comparisons():
    two = HighPrecisionReal.of(2)
    assert hp_log(2) < 1
    assert two.log() > Fraction(69, 100)
    assert (two.sqrt() * two.sqrt()).lower <= 2 <= (two.sqrt() * two.sqrt()).upper
    assert HighPrecisionReal.pi() > 3


def test_equal_values_are_undecidable():
    a = HighPrecisionReal.of(2).log()
    b = HighPrecisionReal.of(4).log() / 2
    with pytest.raises(UndecidableComparison):
        _ = a < b


def test_precision_shrinks_interval():
    lo = HighPrecisionReal.of(3, 64).log().error_radius
    hi = HighPrecisionReal.of(3, 512).log().error_radius
    assert hi < lo
