from decimal import Decimal
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from bianchi_fuchsian.circles import families_for, n2
from bianchi_fuchsian.counting import (
    asymptotic_report,
    count_F,
    estimate_C,
    f_segment,
    f_table,
    families_counting,
    max_f_below,
    pi_count,
    pi_count_direct,
    predicted_ratio,
    scan_bound,
    vol_less_than,
)
from bianchi_fuchsian.covolume import F


def test_sieve_matches_exact_F():
    t = f_table(5000)
    assert [int(v) for v in t] == [int(F(D)) for D in range(1, 5001)]


def test_segments_agree_with_full_table():
    t = f_table(10**5)
    assert np.array_equal(f_segment(77777, 88888), t[77776:88887])
    assert np.array_equal(f_table(10**5, threads=4, chunk=1 << 12), t)


@given(st.integers(1, 10**7))
def test_scan_bound_is_certified(X):
    B = scan_bound(X)
    # phi(D) >= X past B is what the bound certifies; spot check just past it
    for D in (B + 1, B + 2, 2 * B + 1):
        assert F(D) >= X


@pytest.mark.parametrize("r, a, X, want", [(0, 0, 5, 5), (1, 2, 2, 1), (0, 0, 1, 0)])
def test_count_F_examples(r, a, X, want):
    assert count_F(r, a, X) == want


def test_count_F_rejects_nonpositive():
    with pytest.raises(ValueError):
        count_F(0, 0, 0)


@pytest.mark.parametrize("a", [0, 1, 2, 3])
def test_count_F_residues_sum(a):
    X = Fraction(3000)
    assert sum(count_F(r, a, X) for r in range(1 << a)) == count_F(0, 0, X)


def test_count_F_scan_doubling():
    X = 5000
    assert count_F(1, 2, X, scan=2 * scan_bound(X)) == count_F(1, 2, X)


def test_pi_count_examples():
    assert pi_count(4) == 3
    assert pi_count(1) == 0


def test_pi_count_matches_direct():
    for x in (4, Fraction(25, 2), 100, 500):
        assert pi_count(x) == pi_count_direct(x)


def test_pi_count_monotone():
    vals = [pi_count(x) for x in range(1, 120)]
    assert vals == sorted(vals)


def test_pi_count_thread_invariance():
    assert pi_count(3000, threads=1) == pi_count(3000, threads=3)


def test_strict_inequality_on_exact_covolume():
    # vol(k=2, D=1) = 2pi/3; x equal to a rational cannot hit it, but just above/below can
    v = Fraction(2, 3)
    assert vol_less_than(v, Fraction(20944, 10000))
    assert not vol_less_than(v, Fraction(20943, 10000))
    assert max_f_below(Fraction(7)) == 2
    assert max_f_below(Fraction(31416, 10000)) == 1


def test_families_counting_matches_n2():
    for D in range(1, 300):
        assert len(families_counting(D, 10**6)) == n2(D) == len(families_for(D))


def test_estimate_C_examples():
    assert estimate_C(3).exact == Fraction(11, 12)
    assert estimate_C(5).exact == Fraction(11, 12) * Fraction(21, 20)
    with pytest.raises(ValueError):
        estimate_C(2)


def test_estimate_C_tail_encloses_later_truncations():
    lo = estimate_C(1000)
    hi = estimate_C(10**5, exact=False)
    assert abs(hi.value - lo.value) <= lo.tail_bound
    assert hi.tail_bound < lo.tail_bound


def test_asymptotic_report():
    assert asymptotic_report([]) == []
    (r,) = asymptotic_report([4], prime_bound=1000)
    assert r.pi_x == 3
    assert r.row()["pi_x"] == 3
    assert r.predicted == predicted_ratio(estimate_C(1000, exact=False).value)
    assert r.ratio == Decimal(3) / 4
