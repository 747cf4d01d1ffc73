"""Acceptance criteria 1-11.

Runs under pytest (one PASS/FAIL summary line per criterion) or directly as
``python tests/test_acceptance.py``.
"""

import itertools
import sys
import time

import pytest
from gmpy2 import mpq

from xortho.classical import HahnParams, JacobiParams, hahn_jacobi_limit
from xortho.combinatorics import PairF, parse_pair
from xortho.fixtures import load
from xortho.quadrature import cross_orthogonality, weight_and_norm
from xortho.recurrence import (
    hahn_table_coeffs,
    jacobi_table_coeffs,
    recover_coeffs,
    residual,
    upsilon_hahn,
    upsilon_jacobi,
    window_fails,
)
from xortho.xhahn import XHahnFamily, hahn_admissible
from xortho.xjacobi import XJacobiFamily, convth_scan, jacobi_admissible

EMPTY_ONE = PairF((), (1,))
EIGEN_PAIRS = [PairF((1,), ()), EMPTY_ONE, PairF((1, 2), ()), PairF((), (1, 2)), PairF((1,), (1,))]
SAMPLES = [(mpq(1, 2), mpq(7, 3)), (mpq(-1, 3), mpq(5, 2)), (mpq(2, 5), mpq(-7, 4))]


def hfam(a, b, N, F):
    return XHahnFamily(HahnParams(a, b, N), F, strict=False)


def jfam(a, b, F):
    return XJacobiFamily(JacobiParams(a, b), F, strict=False)


def criterion_1():
    count = 0
    for F, (a, b), N in itertools.product(EIGEN_PAIRS, SAMPLES, (5, 8)):
        f = hfam(a, b, N, F)
        for n in f.sigma_N():
            if not f.eigen_residual(n).is_zero():
                return False, f"F={F} a={a} b={b} N={N} n={n}"
            count += 1
    return True, f"{count} identities"


def criterion_2():
    count = 0
    for F, (a, b) in itertools.product(EIGEN_PAIRS, SAMPLES):
        f = jfam(a, b, F)
        for n in range(f.u, f.u + 6):
            if f.in_sigma(n):
                if not f.eigen_residual(n).is_zero():
                    return False, f"F={F} a={a} b={b} n={n}"
                count += 1
    return True, f"{count} identities"


ADMISSIBLE_HAHN = [
    (0, 2, 6, EMPTY_ONE),
    (mpq(1, 3), mpq(12, 5), 6, EMPTY_ONE),
    (mpq(-3, 2), mpq(7, 3), 7, PairF((1,), (1,))),
    (mpq(1, 2), mpq(13, 3), 7, PairF((1, 2), ())),
    (mpq(-3, 2), mpq(-9, 7), 12, PairF((2, 3, 4), (1, 2))),
]


def criterion_3():
    used = 0
    for a, b, N, F in ADMISSIBLE_HAHN:
        if not hahn_admissible(HahnParams(a, b, N), F).admissible:
            continue
        used += 1
        f = hfam(a, b, N, F)
        idx = f.sigma_N()
        G = f.gram_matrix(idx)
        for i, r in enumerate(idx):
            for j in range(len(idx)):
                want = f.predicted_norm(r) if i == j else 0
                if G[i][j] != want:
                    return False, f"a={a} b={b} N={N} F={F} entry ({i},{j})"
    return used == len(ADMISSIBLE_HAHN), f"{used} of {len(ADMISSIBLE_HAHN)} instances admissible"


REGION_IN = [(0, mpq(5, 2)), (mpq(-1, 2), mpq(3, 2)), (mpq(-3, 2), mpq(2, 3)), (mpq(-7, 4), mpq(1, 3))]
REGION_OUT = [(0, mpq(1, 2)), (mpq(-3, 2), mpq(3, 2)), (mpq(-5, 2), mpq(2, 3)), (mpq(1, 2), mpq(-1, 2))]


def criterion_4():
    failures = []
    adm = hahn_admissible(HahnParams(mpq(-7, 2), 9, 20), PairF((1,), ()))
    if adm.admissible or adm.witness != 3:
        failures.append(f"(-7/2, 9, 20): admissible={adm.admissible} witness={adm.witness}, expected witness 3")
    f = hfam(mpq(-7, 2), 9, 20, PairF((1,), ()))
    for n in range(21):
        if f.omega(mpq(n)) * f.omega(mpq(n + 1)) != (3 * n + 20) * (3 * n + 23):
            failures.append(f"Omega product at n={n}")
            break
    big = PairF((2, 3, 4), (1, 2))
    a, b = mpq(-3, 2), mpq(-9, 7)
    if not hahn_admissible(HahnParams(a, b, 12), big).admissible:
        failures.append("Hahn (-3/2, -9/7, 12) not admissible")
    rep = convth_scan(JacobiParams(a, b), big, strict=False)
    if not rep["admissible"] or rep["lowered admissible"] is not False or rep["lowered witness"] != 0:
        failures.append(f"Jacobi (-3/2, -9/7): {rep['admissible']}, lowered {rep['lowered admissible']} at {rep['lowered witness']}")
    for pt in REGION_IN:
        if not jacobi_admissible(JacobiParams(*pt), EMPTY_ONE).admissible:
            failures.append(f"region point {pt} should be admissible")
    for pt in REGION_OUT:
        if jacobi_admissible(JacobiParams(*pt), EMPTY_ONE).admissible:
            failures.append(f"region point {pt} should not be admissible")
    return not failures, "; ".join(failures)


DUALITY_PAIRS = [PairF((1,), ()), EMPTY_ONE, PairF((1,), (1,))]
DUALITY_SAMPLES = [
    (mpq(1, 2), mpq(1, 3)),
    (mpq(2, 5), mpq(9, 4)),
    (mpq(-1, 3), mpq(5, 2)),
    (mpq(7, 2), mpq(-2, 9)),
    (mpq(3, 7), mpq(11, 5)),
]


def criterion_5():
    count = 0
    for F, (a, b) in itertools.product(DUALITY_PAIRS, DUALITY_SAMPLES):
        f = hfam(a, b, 8, F)
        window = [v for v in f.sigma_N() if v <= f.u + 5]
        for u in range(6):
            for v in window:
                if not f.duality_check(u, v):
                    return False, f"F={F} a={a} b={b} u={u} v={v}"
                count += 1
    return True, f"{count} instances"


def _small_pairs():
    subsets = [s for r in range(4) for s in itertools.combinations((1, 2, 3), r)]
    for f1, f2 in itertools.product(subsets, subsets):
        if 0 < len(f1) + len(f2) <= 3:
            yield PairF(f1, f2)


BOUNDARY_SAMPLES = [
    (mpq(1, 3), mpq(7, 2)), (mpq(1, 2), mpq(7, 3)), (mpq(-1, 3), mpq(5, 2)), (mpq(2, 5), mpq(-7, 4)),
    (mpq(5, 7), mpq(4, 9)), (mpq(-5, 4), mpq(3, 8)), (mpq(9, 2), mpq(1, 6)), (mpq(3, 11), mpq(-2, 13)),
    (mpq(13, 3), mpq(19, 7)), (mpq(-2, 7), mpq(-3, 5)),
]


def criterion_6():
    count = 0
    for F in _small_pairs():
        for a, b in BOUNDARY_SAMPLES:
            f = jfam(a, b, F)
            for at in (1, -1):
                if f.omega_boundary(at) != f.omega(mpq(at)):
                    return False, f"F={F} a={a} b={b} at {at}"
                count += 1
    return True, f"{count} evaluations"


def criterion_7():
    a, b = mpq(1, 2), mpq(7, 3)
    for n in range(5):
        top, expected, d = hahn_jacobi_limit(n, a, b)
        if d != n or top != expected:
            return False, f"classical limit at n={n}"
    count = 0
    for F in (PairF((1,), ()), EMPTY_ONE, PairF((1,), (1,))):
        f = jfam(a, b, F)
        if not f.omega_limit_from_hahn():
            return False, f"Omega limit for F={F}"
        for n in range(f.u, f.u + 5):
            if f.in_sigma(n):
                if not f.limit_from_hahn(n):
                    return False, f"F={F} n={n}"
                count += 1
    return True, f"{count} exceptional limits"


def criterion_8():
    a, b = mpq(1, 2), mpq(7, 3)
    results = {}
    for F in (EMPTY_ONE, PairF((), (2,))):
        results[f"hahn {F}"] = all(hfam(a, b, 7, F).darboux_checks().values())
    for side, pairs in ((1, (PairF((1,), ()), PairF((2,), ()))), (2, (EMPTY_ONE, PairF((), (2,))))):
        for F in pairs:
            results[f"jacobi side {side} {F}"] = all(jfam(a, b, F).darboux_checks(side).values())
    bad = [k for k, v in results.items() if not v]
    return not bad, ", ".join(bad) or f"{len(results)} factorisations"


def criterion_9():
    failures = []
    for a, b in ((0, 3), (mpq(1, 2), mpq(7, 3))):
        N = 12
        f = hfam(a, b, N, EMPTY_ONE)
        U = upsilon_hahn(f.params, EMPTY_ONE)
        for n in range(3, 9):
            got = recover_coeffs(f.x_hahn, U, n, 2, mpq(n))
            if got != hahn_table_coeffs(n, a, b, N):
                failures.append(f"Hahn a={a} b={b} n={n}")
            if not residual(f.x_hahn, U, n, got, mpq(n)).is_zero():
                failures.append(f"Hahn residual n={n}")
        if not window_fails(f, U, 5, 1):
            failures.append(f"Hahn window 1 succeeded a={a} b={b}")
        g = jfam(a, b, EMPTY_ONE)
        V = upsilon_jacobi(g.params, EMPTY_ONE)
        for n in range(3, 9):
            got = recover_coeffs(g.x_jacobi, V, n, 2)
            if got != jacobi_table_coeffs(n, a, b):
                failures.append(f"Jacobi a={a} b={b} n={n}")
            if not residual(g.x_jacobi, V, n, got).is_zero():
                failures.append(f"Jacobi residual n={n}")
        if not window_fails(g, V, 5, 1):
            failures.append(f"Jacobi window 1 succeeded a={a} b={b}")
    return not failures, "; ".join(failures) or "n=3..8, two parameter sets, both families"


def criterion_10():
    f = jfam(0, 2, EMPTY_ONE)
    worst = 0.0
    for n in range(4):
        _, val, pred = weight_and_norm(f, n)
        worst = max(worst, abs(val - pred) / abs(pred))
    cross = cross_orthogonality(f, range(5))
    return worst < 1e-8 and cross < 1e-10, f"norm rel err {worst:.1e}, cross {cross:.1e}"


def criterion_11():
    used = []
    for case in load():
        if case["kind"] not in ("hahn_admissible", "hahn_norms"):
            continue
        a, b, N = mpq(case["alpha"]), mpq(case["beta"]), case["N"]
        F = parse_pair(case["F"])
        if not hahn_admissible(HahnParams(a, b, N), F).admissible:
            continue
        f = hfam(a, b, N, F)
        idx = f.sigma_N()
        G = f.gram_matrix(idx)
        off = any(G[i][j] != 0 for i in range(len(G)) for j in range(len(G)) if i != j)
        diag = sum(1 for i in range(len(G)) if G[i][i] != 0)
        if off or diag != len(idx) or len(idx) != N - F.k1 + 1:
            return False, case["name"]
        used.append(case["name"])
    return len(used) >= 3, ", ".join(used)


CRITERIA = {i: globals()[f"criterion_{i}"] for i in range(1, 12)}


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, record_acceptance):
    ok, detail = CRITERIA[number]()
    record_acceptance(number, ok, detail)
    assert ok, detail


if __name__ == "__main__":
    failed = 0
    for number, fn in CRITERIA.items():
        t = time.perf_counter()
        ok, detail = fn()
        failed += not ok
        print(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {time.perf_counter() - t:6.1f}s  {detail}")
    sys.exit(1 if failed else 0)
