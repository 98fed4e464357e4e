from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from bianchi_fuchsian.exact_arith import (
    Mat2,
    QInt,
    QRat,
    RankDeficientError,
    factorize,
    format_rational,
    hnf,
    is_prime,
    kronecker_at_2,
    legendre,
    parse_rational,
    primes_up_to,
    qi_mul,
    symbol_minus2,
)

ints = st.integers(-50, 50)
qints = st.builds(QInt, ints, ints)


@pytest.mark.parametrize("p, q, want", [
    ((0, 1), (0, 1), (-2, 0)),
    ((1, 1), (1, -1), (3, 0)),
    ((1, 1), (1, 1), (-1, 2)),
])
def test_qi_mul_examples(p, q, want):
    assert qi_mul(QInt(*p), QInt(*q)) == QInt(*want)


@given(qints, qints)
def test_norm_is_multiplicative(p, q):
    assert (p * q).norm() == p.norm() * q.norm()


@given(qints)
def test_norm_is_product_with_conjugate(p):
    assert p * p.conj() == QInt(p.norm(), 0)


@given(qints)
def test_qint_string_roundtrip(p):
    assert QInt.parse(str(p)) == p


def test_qrat_division_roundtrip():
    a = QRat.from_parts(Fraction(1, 3), 2)
    b = QRat(1, 1)
    assert (a / b) * b == a
    assert QRat(2, 4, 2).to_qint() == QInt(1, 2)
    assert not QRat(1, 0, 2).is_integral()


@pytest.mark.parametrize("p, want", [(2, 0), (3, 1), (5, -1)])
def test_symbol_minus2_examples(p, want):
    assert symbol_minus2(p) == want


def test_symbol_minus2_rejects_composite():
    with pytest.raises(ValueError):
        symbol_minus2(9)


def test_symbol_minus2_matches_squares():
    for p in primes_up_to(1000)[1:]:
        squares = {x * x % p for x in range(p)}
        assert symbol_minus2(p) == (1 if (-2) % p in squares else -1)


@pytest.mark.parametrize("d, want", [(4, 0), (7, 1), (3, -1), (1, 1), (5, -1)])
def test_kronecker_at_2_examples(d, want):
    assert kronecker_at_2(d) == want


@given(st.integers(-10**6, 10**6))
def test_kronecker_at_2_has_period_8(d):
    assert kronecker_at_2(d) == kronecker_at_2(d + 8)


@given(st.integers(-999, 999).filter(lambda n: n % 2), st.integers(-999, 999).filter(lambda n: n % 2))
def test_kronecker_at_2_is_multiplicative(a, b):
    assert kronecker_at_2(a * b) == kronecker_at_2(a) * kronecker_at_2(b)


def test_legendre_small():
    assert legendre(2, 7) == 1 and legendre(3, 7) == -1 and legendre(14, 7) == 0


@pytest.mark.parametrize("n, want", [(1, []), (12, [(2, 2), (3, 1)]), (8 * 97, [(2, 3), (97, 1)])])
def test_factorize_examples(n, want):
    assert factorize(n) == want


@given(st.integers(1, 10**7))
def test_factorize_reconstructs(n):
    prod = 1
    for p, e in factorize(n):
        assert is_prime(p)
        prod *= p**e
    assert prod == n


def test_rationals_roundtrip():
    for q in (Fraction(0), Fraction(-3, 4), Fraction(7)):
        assert parse_rational(format_rational(q)) == q
    assert format_rational(Fraction(1, 2)) == "1/2"


E = [[int(i == j) for j in range(4)] for i in range(4)]


def test_hnf_standard_basis_is_fixed():
    assert [list(r) for r in hnf(E).basis] == E


def test_hnf_example():
    L = hnf([[2, 0, 0, 0], [1, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    assert L.det() == 2
    assert L.contains([1, 1, 0, 0]) and not L.contains([1, 0, 0, 0])
    assert L == hnf([[1, -1, 0, 0], [0, 2, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])


def test_hnf_rank_deficient():
    with pytest.raises(RankDeficientError):
        hnf([[1, 0, 0, 0], [2, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])


rat = st.fractions(min_value=-5, max_value=5, max_denominator=6)
vec = st.lists(rat, min_size=4, max_size=4)


@given(st.lists(vec, min_size=4, max_size=6), st.randoms())
def test_hnf_invariant_under_reordering_and_idempotent(vs, rnd):
    try:
        L = hnf(vs)
    except RankDeficientError:
        return
    shuffled = list(vs)
    rnd.shuffle(shuffled)
    assert hnf(shuffled) == L
    assert hnf(L.basis) == L
    assert all(L.contains(v) for v in vs)


@given(st.lists(vec, min_size=4, max_size=4))
def test_dual_is_involutive(vs):
    try:
        L = hnf(vs)
    except RankDeficientError:
        return
    assert L.dual().dual() == L
    assert L.det() * L.dual().det() == 1


def test_mat2_inverse_and_det():
    g = Mat2.of(QInt(1, 1), QInt(0, 1), QInt(0, -1), QInt(1, -1))
    assert g.det() == QRat(1)
    assert g * g.inverse() == Mat2.identity()
