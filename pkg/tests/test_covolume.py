from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from bianchi_fuchsian.circles import FAMILIES, admits
from bianchi_fuchsian.covolume import F, closed_c, covolume_closed, covolume_local, lambda_factor
from bianchi_fuchsian.exact_arith import factorize, symbol_minus2
from bianchi_fuchsian.orders import standard_order, theorem1_order


@pytest.mark.parametrize("D, want", [(1, 1), (2, 2), (3, 4), (5, 4), (6, 8), (7, 6)])
def test_F_examples(D, want):
    assert F(D) == want


def _F_oracle(D):
    out = Fraction(D)
    for p, _ in factorize(D):
        out *= 1 + Fraction(symbol_minus2(p), p)
    return out


@given(st.integers(1, 10**5))
def test_F_matches_product_and_is_integral(D):
    assert F(D) == _F_oracle(D)
    assert F(D).denominator == 1


@given(st.integers(1, 3000), st.integers(1, 3000))
def test_F_multiplicative(a, b):
    from math import gcd

    if gcd(a, b) == 1:
        assert F(a * b) == F(a) * F(b)


def test_lambda_examples():
    assert lambda_factor(standard_order(1), 2) == Fraction(3, 4)
    assert lambda_factor(theorem1_order(2, 17), 2) == Fraction(3, 2)
    assert lambda_factor(theorem1_order(1, 3), 3) == Fraction(4, 3)


@pytest.mark.parametrize("k, D, vol", [(1, 1, 2), (1, 8, 8), (3, 2, Fraction(1, 3))])
def test_covolume_local_examples(k, D, vol):
    assert covolume_local(theorem1_order(k, D)).vol_over_pi == vol


@pytest.mark.parametrize("k, D, c, vol", [
    (2, 5, Fraction(1, 3), Fraction(4, 3)),
    (6, 3, 1, 4),
    (5, 2, Fraction(1, 2), 1),
    (1, 5, 2, 8),
])
def test_covolume_closed_examples(k, D, c, vol):
    r = covolume_closed(k, D)
    assert r.c == c and r.vol_over_pi == vol


@given(st.sampled_from(FAMILIES), st.integers(1, 400))
def test_local_equals_closed(k, D):
    if admits(k, D):
        assert covolume_local(theorem1_order(k, D), family=k).vol_over_pi == covolume_closed(k, D).vol_over_pi


def test_c_table_values():
    assert {closed_c(k, D) for k in FAMILIES for D in range(1, 200) if admits(k, D)} == {
        Fraction(1, 6), Fraction(1, 3), Fraction(1, 2), 1, 2}


def test_row_has_exact_and_decimal():
    row = covolume_closed(2, 5).row()
    assert row["vol_over_pi"] == "4/3"
    assert row["vol"].startswith("4.18879")
