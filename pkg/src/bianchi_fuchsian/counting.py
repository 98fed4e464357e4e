"""Counting totally geodesic surfaces by area, and the asymptotic constant.

F(D) is always an integer (``D / rad(D) * prod (p + (-2/p))``), so the counts
reduce to integer thresholds.  F is tabulated with a segmented numpy sieve;
the scan length comes from ``F(D) >= phi(D)`` and the minimum of
``phi(D)/D`` below each primorial, which certifies that no D beyond the scan
can fall under the threshold.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .circles import FAMILIES, _CLASS
from .covolume import closed_c
from .exact_arith import format_rational, primes_up_to

# 60 correct digits of pi, truncated
_PI_60 = "3.14159265358979323846264338327950288419716939937510582097494"
PI_LO = Fraction(_PI_60[:42])  # 40 decimals
PI_HI = PI_LO + Fraction(1, 10**40)

_MAX_SCAN = 1 << 40


def pi_decimal(vol_over_pi: Fraction, digits: int = 12) -> str:
    """Decimal rendering of ``vol_over_pi * pi`` to the given significant digits."""
    with localcontext() as ctx:
        ctx.prec = 55
        v = Decimal(vol_over_pi.numerator) / Decimal(vol_over_pi.denominator) * Decimal(_PI_60)
        return f"{v:.{digits}g}"


def _pi_bracket(digits: int) -> tuple[Fraction, Fraction]:
    if digits <= 40:
        return PI_LO, PI_HI
    import mpmath

    with mpmath.workdps(digits + 10):
        lo = Fraction(mpmath.nstr(mpmath.pi, digits + 5, strip_zeros=False)) - Fraction(1, 10 ** (digits + 2))
    return lo, lo + Fraction(2, 10 ** (digits + 2))


def max_f_below(y: Fraction) -> int:
    """Largest integer n with n * pi < y (y > 0)."""
    digits = 40
    while True:
        lo_pi, hi_pi = _pi_bracket(digits)
        lo, hi = y / hi_pi, y / lo_pi  # y/pi lies strictly inside (lo, hi)
        if math.floor(lo) == math.floor(hi) and lo.denominator != 1 and hi.denominator != 1:
            return math.floor(lo)
        digits *= 2


# ---------------------------------------------------------------------------
# F(D) tabulation
# ---------------------------------------------------------------------------

def scan_bound(X) -> int:
    """B such that F(D) >= X for every D > B."""
    X = Fraction(X)
    primes = iter(primes_up_to(1000))
    P, m = 1, Fraction(1)
    B = 0
    while True:
        p = next(primes)
        cutoff = X / m  # on [P, P*p) bad D satisfy D < X/m
        if P >= cutoff:
            return max(B, 1)
        B = max(B, min(P * p - 1, math.ceil(cutoff) - 1))
        P, m = P * p, m * (1 - Fraction(1, p))


def _eps_mod8(p: np.ndarray) -> np.ndarray:
    r = p % 8
    return np.select([(r == 1) | (r == 3), r % 2 == 0], [1, 0], -1).astype(np.int64)


def f_segment(lo: int, hi: int, small_primes: Sequence[int] | None = None) -> np.ndarray:
    """F(D) for lo <= D < hi as int64 (lo >= 1)."""
    if lo < 1 or hi > _MAX_SCAN:
        raise ValueError("segment outside the supported range")
    if hi <= lo:
        return np.zeros(0, dtype=np.int64)
    n = np.arange(lo, hi, dtype=np.int64)
    F = n.copy()
    rem = n.copy()
    if small_primes is None:
        small_primes = primes_up_to(math.isqrt(hi - 1))
    for p in small_primes:
        if p * p > hi - 1:
            break
        start = (-lo) % p
        if start >= len(n):
            continue
        if p != 2:
            eps = 1 if p % 8 in (1, 3) else -1
            F[start::p] = F[start::p] // p * (p + eps)
        pk = p
        while pk < hi:
            s = (-lo) % pk
            if s < len(n):
                rem[s::pk] //= p
            pk *= p
    big = rem > 1  # at most one prime factor above sqrt(hi) remains
    q = rem[big]
    F[big] = F[big] // q * (q + _eps_mod8(q))
    return F


def f_table(B: int, threads: int = 1, chunk: int = 1 << 20) -> np.ndarray:
    """Array whose entry D - 1 is F(D), for 1 <= D <= B."""
    small = primes_up_to(math.isqrt(B))
    bounds = [(lo, min(lo + chunk, B + 1)) for lo in range(1, B + 1, chunk)]
    if threads <= 1 or len(bounds) == 1:
        parts = [f_segment(lo, hi, small) for lo, hi in bounds]
    else:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            parts = list(ex.map(lambda b: f_segment(b[0], b[1], small), bounds))
    return np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)


def _strict_threshold(X) -> int:
    """Largest integer strictly below X."""
    X = Fraction(X)
    return math.ceil(X) - 1


def count_F(r: int, a: int, X, threads: int = 1, scan: int | None = None) -> int:
    """#{D >= 1 : D = r mod 2^a, F(D) < X}."""
    X = Fraction(X)
    if X <= 0:
        raise ValueError("X must be positive")
    B = scan if scan is not None else scan_bound(X)
    T = _strict_threshold(X)
    if T < 1:
        return 0
    f = f_table(B, threads)
    m = 1 << a
    start = (r - 1) % m
    return int(np.count_nonzero(f[start::m] <= T))


# ---------------------------------------------------------------------------
# Pi(x)
# ---------------------------------------------------------------------------

def family_classes() -> list[tuple[int, int, int, Fraction]]:
    """(family, residue, modulus, c) for every congruence piece of every family."""
    out = []
    for k in FAMILIES:
        r, m = _CLASS[k]
        mod = math.lcm(m, 8)
        for res in range(mod):
            if res % m == r % m:
                D = res if res > 0 else mod
                out.append((k, res, mod, closed_c(k, D)))
    return out


def pi_thresholds(x) -> dict[Fraction, int]:
    """For each c, the largest integer F with c * pi * F < x."""
    x = Fraction(x)
    cs = {c for *_, c in family_classes()}
    return {c: max_f_below(x / c) for c in cs}


def pi_count(x, threads: int = 1, scan: int | None = None, table: np.ndarray | None = None) -> int:
    """Number of maximal Fuchsian subgroup classes with covolume below x."""
    x = Fraction(x)
    if x <= 0:
        raise ValueError("x must be positive")
    T = pi_thresholds(x)
    Tmax = max(T.values())
    if Tmax < 1:
        return 0
    B = scan if scan is not None else scan_bound(Tmax + 1)
    f = table if table is not None else f_table(B, threads)
    f = f[:B]
    total = 0
    for k, res, mod, c in family_classes():
        start = (res - 1) % mod
        total += int(np.count_nonzero(f[start::mod] <= T[c]))
    return total


def vol_less_than(vol_over_pi: Fraction, x: Fraction) -> bool:
    """Decide vol_over_pi * pi < x exactly from the rational bracket of pi."""
    digits = 40
    while True:
        lo, hi = _pi_bracket(digits)
        if vol_over_pi * hi < x:
            return True
        if vol_over_pi * lo >= x:
            return False
        digits *= 2


def pi_count_direct(x, scan: int | None = None) -> int:
    """Single pass over D through the exact covolume table; independent of the sieve."""
    from .circles import families_for
    from .covolume import covolume_closed

    x = Fraction(x)
    # c >= 1/6 and F(D) >= phi(D), so F(D) >= 6x/pi_lo + 1 is out of range
    B = scan if scan is not None else scan_bound(math.floor(6 * x / PI_LO) + 1)
    n = 0
    for D in range(1, B + 1):
        for k in families_for(D):
            if vol_less_than(covolume_closed(k, D).vol_over_pi, x):
                n += 1
    return n


def families_counting(D: int, x) -> list[int]:
    """Families whose class of discriminant D has covolume below x."""
    from .circles import families_for
    from .covolume import covolume_closed

    T = pi_thresholds(x)
    return [k for k in families_for(D) if covolume_closed(k, D).FD <= T[closed_c(k, D)]]


# ---------------------------------------------------------------------------
# the constant C
# ---------------------------------------------------------------------------

EXACT_PRODUCT_MAX_PRIME_BOUND = 10**4


@dataclass(frozen=True)
class ConstantEstimate:
    prime_bound: int
    value: Decimal
    tail_bound: Decimal
    exact: Fraction | None = None

    def to_json(self) -> dict:
        return {
            "prime_bound": self.prime_bound,
            "value": str(self.value),
            "tail_bound": str(self.tail_bound),
            "exact": None if self.exact is None else format_rational(self.exact),
        }


def _factor(p: int) -> tuple[int, int]:
    """Numerator and denominator of 1 - 1/p + 1/(p + (-2/p))."""
    e = 1 if p % 8 in (1, 3) else -1
    return p * p + e * p - e, p * (p + e)


def _prod_tree(xs: list[int]) -> int:
    if not xs:
        return 1
    while len(xs) > 1:
        xs = [xs[i] * xs[i + 1] if i + 1 < len(xs) else xs[i] for i in range(0, len(xs), 2)]
    return xs[0]


def estimate_C(prime_bound: int, exact: bool | None = None) -> ConstantEstimate:
    """Partial product over odd primes <= prime_bound with a rigorous tail envelope.

    Each omitted factor is ``1 - e/(p(p+e))``, whose log is at most 2/p^2 in
    absolute value, so the log of the tail is bounded by sum_{n > bound} 2/n^2
    <= 2/bound.
    """
    if prime_bound < 3:
        raise ValueError("prime_bound must be at least 3")
    primes = [p for p in primes_up_to(prime_bound) if p > 2]
    if exact is None:
        exact = prime_bound <= EXACT_PRODUCT_MAX_PRIME_BOUND
    with localcontext() as ctx:
        ctx.prec = 50
        val = Decimal(1)
        for p in primes:
            n, d = _factor(p)
            val = val * n / d
        tail_log = Decimal(2) / Decimal(prime_bound)
        tb = val * (tail_log.exp() - 1)
        val, tb = +val, +tb
    frac = None
    if exact:
        nums, dens = zip(*(_factor(p) for p in primes))
        frac = Fraction(_prod_tree(list(nums)), _prod_tree(list(dens)))
    return ConstantEstimate(prime_bound, val, tb, frac)


def predicted_ratio(C) -> Decimal:
    with localcontext() as ctx:
        ctx.prec = 50
        return Decimal(45) * Decimal(C) / (Decimal(16) * Decimal(_PI_60))


@dataclass(frozen=True)
class CountReport:
    x: Fraction
    pi_x: int
    ratio: Decimal
    predicted: Decimal
    relative_gap: Decimal

    def row(self) -> dict:
        return {
            "x": format_rational(self.x),
            "pi_x": self.pi_x,
            "ratio": f"{self.ratio:.12g}",
            "predicted": f"{self.predicted:.12g}",
            "relative_gap": f"{self.relative_gap:.6g}",
        }


def asymptotic_report(x_values: Iterable, prime_bound: int = 10**6, threads: int = 1,
                      constant: ConstantEstimate | None = None) -> list[CountReport]:
    xs = [Fraction(x) for x in x_values]
    if not xs:
        return []
    C = constant or estimate_C(prime_bound, exact=False)
    pred = predicted_ratio(C.value)
    # one table for the largest x serves every smaller one
    Tmax = max(max(pi_thresholds(x).values()) for x in xs)
    B = scan_bound(Tmax + 1)
    table = f_table(B, threads)
    out = []
    with localcontext() as ctx:
        ctx.prec = 50
        for x in xs:
            n = pi_count(x, table=table, scan=B)
            ratio = Decimal(n) / (Decimal(x.numerator) / Decimal(x.denominator))
            gap = abs(ratio - pred) / pred
            out.append(CountReport(x, n, +ratio, +pred, +gap))
    return out
