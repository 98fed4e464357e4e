"""Invariant suites behind ``verify``: each returns the cases examined and any counterexamples."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .circles import FAMILIES, admits, family_form, family_form_for, n2
from .covolume import covolume_closed, covolume_local
from .exact_arith import prime_divisors, symbol_minus2
from .orders import (
    derive_order,
    eichler_symbol,
    enumerate_stabilizers,
    enumerate_units,
    index,
    is_order,
    nrd_image_mod8,
    norm_index,
    projective_key,
    reduced_discriminant,
    rho_prime_preimage,
    standard_order,
    theorem1_order,
)
from .quaternion import rho

SUITES = ("orders", "volumes", "local", "stabilizers", "counting")

EXPECTED_N = {1: Fraction(8), 2: Fraction(2), 3: Fraction(1, 2), 4: Fraction(1, 2), 5: Fraction(2), 6: Fraction(2)}
EXPECTED_INDEX = {1: 1, 2: 4, 3: 16, 4: 16, 5: 4, 6: 4}


@dataclass
class SuiteResult:
    name: str
    cases: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def summary(self) -> str:
        if self.ok:
            return f"{self.name}: exact identity held for all cases ({self.cases} checked)"
        return f"{self.name}: {len(self.failures)} failure(s) in {self.cases} cases"


def expected_eichler_2(k: int, D: int) -> int | None:
    """Eichler symbol at 2 from the closed-form case analysis (None when 2 does not divide N)."""
    if k in (1, 5):
        return 0
    if k == 2:
        return 1 if D % 8 == 1 else -1
    if k == 6:
        return 1 if D % 8 == 3 else -1
    return None


def expected_norm_index_2(k: int, D: int) -> int:
    return 2 if (k == 1 and D % 8 == 0) else 1


def cases(d_max: int) -> list[tuple[int, int]]:
    return [(k, D) for k in FAMILIES for D in range(1, d_max + 1) if admits(k, D)]


def _pmap(fn, items, threads: int):
    if threads <= 1:
        return [fn(it) for it in items]
    with ProcessPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(fn, items, chunksize=64))


def _check_order(case) -> list[str]:
    k, D = case
    out = []
    M = theorem1_order(k, D)
    if derive_order(k, D) != M:
        out.append(f"k={k} D={D}: derived order differs from transcribed basis")
    if not is_order(M):
        out.append(f"k={k} D={D}: not an order")
        return out
    N = reduced_discriminant(M)
    if N != EXPECTED_N[k] * D:
        out.append(f"k={k} D={D}: N(M) = {N}, expected {EXPECTED_N[k] * D}")
    idx = index(M, standard_order(D))
    if idx != EXPECTED_INDEX[k]:
        out.append(f"k={k} D={D}: [M:O] = {idx}, expected {EXPECTED_INDEX[k]}")
    return out


def _check_volume(case) -> list[str]:
    k, D = case
    a = covolume_local(theorem1_order(k, D), family=k)
    b = covolume_closed(k, D)
    if a.vol_over_pi != b.vol_over_pi:
        return [f"k={k} D={D}: local {a.vol_over_pi} != closed {b.vol_over_pi}"]
    return []


def _check_local(case) -> list[str]:
    k, D = case
    out = []
    M = theorem1_order(k, D)
    N = reduced_discriminant(M)
    want = expected_eichler_2(k, D)
    if want is not None:
        got8, got16 = eichler_symbol(M, 2), eichler_symbol(M, 2, modulus=16)
        if got8 != want or got16 != want:
            out.append(f"k={k} D={D}: Eichler symbol at 2 = {got8} (mod 16: {got16}), expected {want}")
    (g8, i8), (g16, i16) = nrd_image_mod8(M), nrd_image_mod8(M, modulus=16)
    if i8 != expected_norm_index_2(k, D) or (g8, i8) != (g16, i16):
        out.append(f"k={k} D={D}: norm index at 2 = {i8} (mod 16: {i16}), expected {expected_norm_index_2(k, D)}")
    for p in prime_divisors(N):
        if p == 2:
            continue
        if eichler_symbol(M, p) != symbol_minus2(p):
            out.append(f"k={k} D={D}: Eichler symbol at {p} differs from (-2/{p})")
        if p <= 97 and norm_index(M, p) != 1:
            out.append(f"k={k} D={D}: norm index at {p} is not 1")
    return out


def _run(name: str, fn, items, threads: int) -> SuiteResult:
    res = SuiteResult(name, cases=len(items))
    for fails in _pmap(fn, items, threads):
        res.failures.extend(fails)
    return res


def suite_orders(d_max: int, threads: int = 1) -> SuiteResult:
    return _run("orders", _check_order, cases(d_max), threads)


def suite_volumes(d_max: int, threads: int = 1) -> SuiteResult:
    return _run("volumes", _check_volume, cases(d_max), threads)


def suite_local(d_max: int, threads: int = 1) -> SuiteResult:
    return _run("local", _check_local, cases(d_max), threads)


def stabilizer_oracle_mismatch(D: int, height: int) -> tuple[set, set]:
    """Projective classes found by the circle search but not from units, and vice versa."""
    F = family_form(1, -D)
    stab = {projective_key(g) for g in enumerate_stabilizers(F, height)}
    units = {projective_key(rho(a)) for a in enumerate_units(theorem1_order(1, D), height)}
    return stab - units, units - stab


def suite_stabilizers(height: int, discriminants=(1, 2, 3, 5), general_height: int = 3) -> SuiteResult:
    res = SuiteResult("stabilizers")
    for D in discriminants:
        res.cases += 1
        extra, missing = stabilizer_oracle_mismatch(D, height)
        if extra or missing:
            res.failures.append(f"D={D}: {len(extra)} stabilizers without unit, {len(missing)} units without stabilizer")
    # each element found by the general entry search must come from a norm-1
    # element of the family's order
    for k in FAMILIES:
        for D in range(1, 12):
            if not admits(k, D):
                continue
            res.cases += 1
            F = family_form_for(k, D)
            M = theorem1_order(k, D)
            for g in enumerate_stabilizers(F, general_height, method="general"):
                a = rho_prime_preimage(g, F)
                if a is None or not M.contains(a) or a.nrd() != 1:
                    res.failures.append(f"k={k} D={D}: stabilizer {g} is not the image of a unit")
    return res


def suite_counting(d_max: int, threads: int = 1) -> SuiteResult:
    from .counting import count_F, families_counting, pi_count, pi_count_direct, scan_bound

    res = SuiteResult("counting")
    x_all = max(covolume_closed(k, D).vol_over_pi for k, D in cases(d_max)) * 4 + 1
    for D in range(1, d_max + 1):
        res.cases += 1
        got = len(families_counting(D, x_all))
        if got != n2(D):
            res.failures.append(f"D={D}: {got} families counted, n2 = {n2(D)}")
    X = Fraction(d_max)
    total = count_F(0, 0, X, threads=threads)
    for a in (1, 2, 3, 4):
        res.cases += 1
        parts = sum(count_F(r, a, X, threads=threads) for r in range(1 << a))
        if parts != total:
            res.failures.append(f"a={a}: residue counts sum to {parts}, expected {total}")
    res.cases += 1
    if count_F(1, 2, X, scan=2 * scan_bound(X)) != count_F(1, 2, X):
        res.failures.append("doubling the scan bound changed count_F")
    x = Fraction(min(d_max, 2000))
    res.cases += 1
    if pi_count(x, threads=threads) != pi_count_direct(x):
        res.failures.append(f"x={x}: sieve and direct counts disagree")
    return res


def run_suite(name: str, d_max: int, height: int, threads: int = 1) -> list[SuiteResult]:
    if name == "all":
        return [r for s in SUITES for r in run_suite(s, d_max, height, threads)]
    if name == "orders":
        return [suite_orders(d_max, threads)]
    if name == "volumes":
        return [suite_volumes(d_max, threads)]
    if name == "local":
        return [suite_local(d_max, threads)]
    if name == "stabilizers":
        return [suite_stabilizers(height)]
    if name == "counting":
        return [suite_counting(d_max, threads)]
    raise ValueError(f"unknown suite {name!r}")
