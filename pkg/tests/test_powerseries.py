from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from andortrees.powerseries import Series

ORDER = 12
coeff_lists = st.lists(st.integers(-9, 9), min_size=0, max_size=ORDER + 1)


def mk(coeffs):
    return Series(coeffs, ORDER)


@given(coeff_lists, coeff_lists)
@settings(max_examples=150)
def test_mul_commutes(a, b):
    assert mk(a) * mk(b) == mk(b) * mk(a)


@given(coeff_lists, coeff_lists)
@settings(max_examples=150)
def test_div_inverts_mul_for_unit_series(a, b):
    denom = mk([1] + b)
    assert (mk(a) * denom) / denom == mk(a)


@given(coeff_lists)
@settings(max_examples=100)
def test_pow_matches_repeated_mul(a):
    s = mk(a)
    assert s ** 3 == s * s * s
    assert s ** 0 == Series.constant(1, ORDER)


def test_geometric_series():
    z = Series.z(ORDER)
    geom = 1 / (1 - z)
    assert geom.coeffs == [1] * (ORDER + 1)


def test_int_coefficients_stay_int():
    z = Series.z(ORDER)
    s = (1 + 2 * z) ** 4 / (1 - z)
    assert all(isinstance(c, int) for c in s.coeffs)


def test_division_needs_unit():
    with pytest.raises(ZeroDivisionError):
        Series.constant(1, 4) / Series.z(4)


def test_fraction_coefficients():
    s = Series([Fraction(1, 2), 1], 4) * 2
    assert s.coeffs[0] == 1


def test_high_power_truncates_to_zero():
    z = Series.z(10)
    assert (2 * z) ** 11 == Series.zero(10)
