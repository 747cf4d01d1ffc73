"""Worked examples shipped as JSON and the runner that re-derives each one."""

from __future__ import annotations

import json
from importlib import resources

from gmpy2 import mpq

from .algebra import X, exact_div, poch, rat
from .classical import HahnParams, JacobiParams, hahn
from .combinatorics import parse_pair
from .recurrence import (
    hahn_table_coeffs,
    hahn_table_upsilon,
    jacobi_table_coeffs,
    recover_coeffs,
    upsilon_hahn,
    upsilon_jacobi,
)
from .xhahn import XHahnFamily, hahn_admissible, admissibility_equivalences
from .xjacobi import XJacobiFamily, convth_scan, jacobi_admissible


def load(path=None):
    if path is None:
        text = resources.files("xortho").joinpath("data/worked_examples.json").read_text()
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    return json.loads(text)["cases"]


def _hahn(case, strict=False):
    return XHahnFamily(HahnParams(case["alpha"], case["beta"], case["N"]), parse_pair(case["F"]), strict)


def _jacobi(case, strict=False):
    return XJacobiFamily(JacobiParams(case["alpha"], case["beta"]), parse_pair(case["F"]), strict)


def _compare(expect, got):
    bad = {k: {"expected": v, "got": got.get(k)} for k, v in expect.items() if got.get(k) != v}
    return not bad, {"observed": got, "mismatches": bad}


def run_case(case):
    """(ok, detail) for one fixture entry."""
    kind = case["kind"]
    expect = case.get("expect", {})
    if kind == "pair_indices":
        F = parse_pair(case["F"])
        return _compare(expect, {"u": F.u, "w": F.w})
    if kind == "lowered":
        F = parse_pair(case["F"])
        return _compare(expect, {"s": F.s, "down": list(F.down().f1)})
    if kind == "hahn_divisible":
        N = case["N"]
        h = hahn(N + 1, case["alpha"], case["beta"], N)
        exact_div(h, poch(-X, N + 1))  # raises NotDivisible otherwise
        return True, {}
    if kind == "omega_product":
        fam = _hahn(case)
        prod = fam.omega * fam.omega.shift("x", 1)
        want = 1
        for c0, c1 in expect["product"]:
            want = want * (X * c1 + c0)
        return prod == want, {"product": str(prod)}
    if kind == "dual_vanishing":
        return _hahn(case).q_dual(case["n"]).is_zero(), {}
    if kind == "hahn_admissible":
        adm = hahn_admissible(HahnParams(case["alpha"], case["beta"], case["N"]), parse_pair(case["F"]))
        return _compare(expect, {"admissible": adm.admissible, "witness": adm.witness})
    if kind == "hahn_norms":
        fam = _hahn(case)
        idx = fam.sigma_N()
        G = fam.gram_matrix(idx)
        ok = all(
            G[i][j] == (fam.predicted_norm(r) if i == j else 0)
            for i, r in enumerate(idx)
            for j in range(len(idx))
        )
        return ok, {"indices": idx}
    if kind == "hahn_support":
        fam = _hahn(case)
        eq = admissibility_equivalences(fam)
        want = fam.N - fam.F.k1 + 1
        return eq["support_size"] == want, {"support_size": eq["support_size"], "expected": want}
    if kind == "hahn_dual_orthogonality":
        fam = _hahn(case)
        M, inv = fam.dual_gram_matrix()
        ok = all(
            M[i][j] == (inv[i] if i == j else 0) for i in range(len(M)) for j in range(len(M))
        )
        return ok, {"size": len(M)}
    if kind == "jacobi_base_relation":
        p, rhs = _jacobi(case).base_relation()
        return p == rhs, {}
    if kind == "jacobi_admissible":
        adm = jacobi_admissible(JacobiParams(case["alpha"], case["beta"]), parse_pair(case["F"]))
        return _compare(expect, {"admissible": adm.admissible, "witness": adm.witness})
    if kind == "jacobi_convth":
        rep = convth_scan(JacobiParams(case["alpha"], case["beta"]), parse_pair(case["F"]), strict=False)
        return _compare(expect, rep)
    if kind == "upsilon_hahn":
        a, b, N = rat(case["alpha"]), rat(case["beta"]), case["N"]
        U = upsilon_hahn(HahnParams(a, b, N), parse_pair(case["F"]))
        return U == hahn_table_upsilon(a, b, N), {"upsilon": str(U)}
    if kind == "upsilon_degree":
        F = parse_pair(case["F"])
        U = upsilon_hahn(HahnParams(case["alpha"], case["beta"], case["N"]), F)
        return U.degree("x") == F.w, {"degree": U.degree("x"), "w": F.w}
    if kind in ("hahn_recurrence_table", "jacobi_recurrence_table"):
        a, b = rat(case["alpha"]), rat(case["beta"])
        F = parse_pair(case["F"])
        js = [case["j"]] if "j" in case else range(-2, 3)
        out = {}
        ok = True
        for n in case["n"]:
            if kind == "hahn_recurrence_table":
                fam = _hahn(case)
                got = recover_coeffs(fam.x_hahn, upsilon_hahn(fam.params, F), n, F.w, mpq(n))
                want = hahn_table_coeffs(n, a, b, case["N"])
            else:
                fam = _jacobi(case)
                got = recover_coeffs(fam.x_jacobi, upsilon_jacobi(fam.params, F), n, F.w)
                want = jacobi_table_coeffs(n, a, b)
            for j in js:
                ok &= got[j + 2] == want[j + 2]
            out[n] = [str(v) for v in got]
        return ok, {"coefficients": out}
    raise ValueError(f"unknown fixture kind {kind!r}")


def run_all(path=None, names=None):
    results = []
    for case in load(path):
        if names and case["name"] not in names:
            continue
        try:
            ok, detail = run_case(case)
        except Exception as exc:  # a fixture that errors is a failing fixture
            ok, detail = False, {"error": f"{type(exc).__name__}: {exc}"}
        results.append({"name": case["name"], "status": "PASS" if ok else "FAIL", **detail})
    return results
