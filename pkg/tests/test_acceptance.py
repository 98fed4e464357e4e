"""Acceptance criteria, each run at its stated bound and tolerance.

Every test prints one PASS/FAIL line; the lines are also collected and
repeated in the terminal summary of any pytest run.
"""

import time
from decimal import Decimal

import pytest

from bianchi_fuchsian.circles import FAMILIES, admits, n2
from bianchi_fuchsian.counting import asymptotic_report, count_F, estimate_C, families_counting
from bianchi_fuchsian.covolume import covolume_closed
from bianchi_fuchsian.orders import enumerate_units, theorem1_order
from bianchi_fuchsian.verify import (
    stabilizer_oracle_mismatch,
    suite_local,
    suite_orders,
    suite_volumes,
)


RESULTS: list[str] = []


def report(n, ok, detail):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS.append(line)
    print(line)


def timed(fn, *a):
    t0 = time.perf_counter()
    out = fn(*a)
    return out, time.perf_counter() - t0


def test_criterion_1_covolume_identity():
    res, dt = timed(suite_volumes, 5000)
    report(1, res.ok, f"local == closed for {res.cases} (k, D) with D <= 5000 in {dt:.0f}s")
    assert res.ok, res.failures[:10]


def test_criterion_2_derived_orders():
    # the orders suite also checks N and the index; criterion 3 reuses it at 5000
    from bianchi_fuchsian.orders import derive_order

    t0 = time.perf_counter()
    bad = [(k, D) for k in FAMILIES for D in range(1, 1001)
           if admits(k, D) and derive_order(k, D) != theorem1_order(k, D)]
    dt = time.perf_counter() - t0
    report(2, not bad, f"derived HNF == transcribed HNF for all D <= 1000 in {dt:.0f}s")
    assert not bad, bad[:10]


def test_criterion_3_discriminants_and_indices():
    res, dt = timed(suite_orders, 5000)
    report(3, res.ok, f"N(M) and [M:O] as tabulated for {res.cases} cases in {dt:.0f}s")
    assert res.ok, res.failures[:10]


def test_criterion_4_local_invariants_at_2():
    res, dt = timed(suite_local, 5000)
    report(4, res.ok, f"Eichler symbol and norm index at 2 (mod 8 and mod 16) for {res.cases} cases in {dt:.0f}s")
    assert res.ok, res.failures[:10]


def test_criterion_5_stabilizer_oracle():
    t0 = time.perf_counter()
    mismatches = {}
    for D in (1, 2, 3, 5):
        extra, missing = stabilizer_oracle_mismatch(D, 30)
        if extra or missing:
            mismatches[D] = (len(extra), len(missing))
    dt = time.perf_counter() - t0
    sizes = [len(enumerate_units(theorem1_order(1, D), 2)) for D in (1, 2)]
    report(5, not mismatches and dt < 60, f"Stab == +-rho(units) at height 30 for D in 1,2,3,5 in {dt:.0f}s")
    assert not mismatches, mismatches
    assert all(s > 2 for s in sizes)
    assert dt < 60


@pytest.fixture(scope="module")
def asymptotic_rows():
    C = estimate_C(10**6, exact=False)
    return asymptotic_report([10**3, 10**4, 10**5], constant=C, threads=4)


def test_criterion_6a_gap_below_5_percent(asymptotic_rows):
    gaps = [r.relative_gap for r in asymptotic_rows]
    ok = gaps[-1] < Decimal("0.05")
    report("6a", ok, "relative gaps at 1e3, 1e4, 1e5: " + ", ".join(f"{g:.3e}" for g in gaps))
    assert ok


def test_criterion_6b_gap_not_larger_at_1e5(asymptotic_rows):
    g3, _, g5 = (r.relative_gap for r in asymptotic_rows)
    ok = g5 <= g3
    report("6b", ok, f"gap(1e5) = {g5:.3e} vs gap(1e3) = {g3:.3e} "
                     f"(Pi = {', '.join(str(r.pi_x) for r in asymptotic_rows)})")
    assert ok


def test_criterion_7_residue_class_density():
    C = estimate_C(10**6, exact=False).value
    target = C / 4
    out = {}
    for X, tol in ((10**5, Decimal("0.10")), (10**6, Decimal("0.05"))):
        ratio = Decimal(count_F(1, 2, X, threads=4)) / X
        out[X] = (ratio, abs(ratio - target) / target, tol)
    ok = all(err <= tol for _, err, tol in out.values())
    report(7, ok, "; ".join(f"X={X}: ratio {r:.6f}, rel err {e:.2e}" for X, (r, e, _) in out.items())
           + f" (C/4 = {target:.6f})")
    assert ok


def test_criterion_8_counting_vs_classification():
    # x above every covolume with D <= 1000 (pi < 4)
    x = 4 * max(covolume_closed(k, D).vol_over_pi for k in FAMILIES for D in range(1, 1001) if admits(k, D)) + 1
    bad = [D for D in range(1, 1001) if len(families_counting(D, x)) != n2(D)]
    report(8, not bad, "families counting D == n2(D) for all D <= 1000")
    assert not bad, bad[:10]
