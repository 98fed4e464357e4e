"""Covolumes of the unit groups of the family orders, as exact multiples of pi."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .circles import family_c
from .exact_arith import factorize, format_rational, prime_divisors, symbol_minus2
from .orders import ZOrder, lambda_factor, local_data, reduced_discriminant, theorem1_order

__all__ = ["CovolumeResult", "F", "closed_c", "covolume_closed", "covolume_local",
           "covolume_of_family", "lambda_factor"]


@dataclass(frozen=True)
class CovolumeResult:
    family: int | None
    D: int
    vol_over_pi: Fraction
    c: Fraction
    FD: Fraction

    def vol_decimal(self, digits: int = 12) -> str:
        from .counting import pi_decimal

        return pi_decimal(self.vol_over_pi, digits)

    def row(self) -> dict:
        return {
            "family": self.family,
            "D": self.D,
            "c": format_rational(self.c),
            "F(D)": format_rational(self.FD),
            "vol_over_pi": format_rational(self.vol_over_pi),
            "vol": self.vol_decimal(),
        }


def F(D: int) -> Fraction:
    """D * prod_{p | D} (1 + (-2/p)/p)."""
    if D < 1:
        raise ValueError("F is defined on positive integers")
    out = Fraction(D)
    for p, _ in factorize(D):
        out *= 1 + Fraction(symbol_minus2(p), p)
    return out


def covolume_local(M: ZOrder, family: int | None = None) -> CovolumeResult:
    """Area / pi from N(M) and local data at every p | N(M)."""
    N = reduced_discriminant(M)
    vol = Fraction(N, 3)
    for p in prime_divisors(N):
        ld = local_data(M, p)
        vol *= ld.lam / ld.norm_index
    FD = F(M.D)
    return CovolumeResult(family, M.D, vol, vol / FD, FD)


def closed_c(k: int, D: int) -> Fraction:
    family_c(k, D)
    r = D % 8
    if k == 1:
        return Fraction(1) if r == 0 else Fraction(2)
    if k == 2:
        return Fraction(1) if r == 1 else Fraction(1, 3)
    if k in (3, 4):
        return Fraction(1, 6)
    if k == 5:
        return Fraction(1, 2)
    return Fraction(1) if r == 3 else Fraction(1, 3)


def covolume_closed(k: int, D: int) -> CovolumeResult:
    c = closed_c(k, D)
    FD = F(D)
    return CovolumeResult(k, D, c * FD, c, FD)


def covolume_of_family(k: int, D: int) -> CovolumeResult:
    return covolume_local(theorem1_order(k, D), family=k)
