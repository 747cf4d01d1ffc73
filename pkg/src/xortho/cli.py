"""Command line front end: generate families, run verification suites, emit tables.

Exit codes: 0 success, 1 usage error, 2 parameter constraint violated,
3 exact division failed, 4 at least one check failed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

from gmpy2 import mpq

from . import __version__
from .algebra import Inconsistent, MultiPoly, NotDivisible, rat
from .classical import HahnParams, JacobiParams, ParamViolation
from .combinatorics import CombinatoricsError, parse_pair
from .quadrature import PreconditionFailed, QuadratureNonConvergent, cross_orthogonality, weight_and_norm
from .recurrence import (
    Underdetermined,
    rational_fit,
    recover_coeffs,
    residual,
    upsilon_hahn,
    upsilon_jacobi,
    window_fails,
)
from .xhahn import OmegaZeroOnGrid, XHahnFamily, hahn_admissible, admissibility_equivalences
from .xjacobi import XJacobiFamily, convth_scan, jacobi_admissible

SCHEMA = "xortho/1"
EXIT_OK, EXIT_USAGE, EXIT_PARAM, EXIT_NOTDIV, EXIT_FAIL = 0, 1, 2, 3, 4
SUITES = ("eigen", "orthogonality", "duality", "admissible", "darboux", "limit", "recurrence", "boundary")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# -- argument helpers ----------------------------------------------------------------------


def parse_range(text):
    """'3', '1..4' (inclusive) or '1,2,5'."""
    text = text.strip()
    try:
        if ".." in text:
            lo, hi = text.split("..")
            return list(range(int(lo), int(hi) + 1))
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise UsageError(f"bad index range {text!r}") from exc


def parse_rational(text):
    try:
        return rat(text)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise UsageError(f"bad rational {text!r}: {exc}") from exc


def parse_poly(text):
    """Polynomial in x (and N) from text such as '3/2*x^2 - x'."""
    import sympy

    if "." in text:
        raise UsageError("decimal coefficients rejected; write them as p/q")
    x, N = sympy.symbols("x N")
    try:
        expr = sympy.sympify(text.replace("^", "**"), locals={"x": x, "N": N}, rational=True)
        poly = sympy.Poly(sympy.expand(expr), x, N)
    except (sympy.SympifyError, sympy.PolynomialError, TypeError) as exc:
        raise UsageError(f"cannot parse polynomial {text!r}") from exc
    out = MultiPoly.const(0)
    for (dx, dn), c in poly.terms():
        c = sympy.Rational(c)
        out = out + MultiPoly.var("x", dx) * MultiPoly.var("N", dn) * mpq(int(c.p), int(c.q))
    return out


def _pair(args):
    try:
        F = parse_pair(args.F)
        F.require_nonempty()
    except CombinatoricsError as exc:
        raise UsageError(str(exc)) from exc
    return F


def _family(args, kind=None):
    kind = kind or args.family
    F = _pair(args)
    strict = not args.allow_degenerate
    a, b = parse_rational(args.alpha), parse_rational(args.beta)
    if kind == "xhahn":
        if args.N is None:
            raise UsageError("--N is required for the Hahn family")
        return XHahnFamily(HahnParams(a, b, args.N), F, strict)
    return XJacobiFamily(JacobiParams(a, b), F, strict)


def _indices(args, fam):
    if args.n:
        return [n for n in parse_range(args.n)]
    if isinstance(fam, XHahnFamily):
        return fam.sigma_N()
    return [n for n in range(fam.u, fam.u + 6) if fam.in_sigma(n)]


def _threads(args):
    if args.threads:
        return args.threads
    try:
        return max(1, int(os.environ.get("XORTHO_THREADS", "1")))
    except ValueError:
        return 1


def _header(args, fam):
    out = {
        "schema": SCHEMA,
        "family": "xhahn" if isinstance(fam, XHahnFamily) else "xjacobi",
        "alpha": str(fam.alpha),
        "beta": str(fam.beta),
        "F": {"F1": list(fam.F.f1), "F2": list(fam.F.f2)},
    }
    if isinstance(fam, XHahnFamily):
        out["N"] = fam.N
    if fam.degenerate:
        out["degenerate"] = fam.degenerate
    return out


def _emit(obj, fmt, rows=None, columns=None):
    if fmt == "json":
        print(json.dumps(obj, indent=2, default=str))
    elif fmt == "csv":
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(columns)
        wr.writerows(rows)
        sys.stdout.write(buf.getvalue())
    else:
        widths = [max(len(str(c)), *(len(str(r[i])) for r in rows)) if rows else len(str(c)) for i, c in enumerate(columns)]
        print("  ".join(str(c).ljust(w) for c, w in zip(columns, widths)))
        for r in rows:
            print("  ".join(str(v).ljust(w) for v, w in zip(r, widths)))


# -- gen -----------------------------------------------------------------------------------------


def cmd_gen(args):
    fam = _family(args)
    poly = fam.x_hahn if isinstance(fam, XHahnFamily) else fam.x_jacobi
    ns = _indices(args, fam)
    items = [{"n": n, "poly": poly(n).to_json(), "text": str(poly(n))} for n in ns]
    obj = {**_header(args, fam), "omega": fam.omega.to_json(), "polynomials": items}
    if args.operator:
        op = fam.second_order_op()
        if isinstance(fam, XHahnFamily):
            obj["operator"] = {str(s): {"num": str(c.num), "den": str(c.den)} for s, c in sorted(op.coeffs.items())}
        else:
            obj["operator"] = [{"num": str(c.num), "den": str(c.den)} for c in op.coeffs]
    rows = [(it["n"], it["text"]) for it in items]
    _emit(obj, args.format, rows, ["n", "polynomial"])
    return EXIT_OK


# -- verify ------------------------------------------------------------------------------------


def _check(suite, name, ok, **detail):
    status = ok if isinstance(ok, str) else ("PASS" if ok else "FAIL")
    return {"suite": suite, "check": name, "status": status, **detail}


def _degree_checks(suite, fam, poly, ns):
    out = []
    for n in ns:
        if not fam.in_sigma(n):
            continue
        if fam.degenerate:
            out.append(_check(suite, f"degree {n}", "SKIP", reason="degenerate parameters"))
        else:
            out.append(_check(suite, f"degree {n}", poly(n).degree("x") == n, degree=poly(n).degree("x")))
    return out


def suite_eigen(fam, ns, args):
    poly = fam.x_hahn if isinstance(fam, XHahnFamily) else fam.x_jacobi
    out = [
        _check("eigen", f"residual n={n}", fam.eigen_residual(n).is_zero())
        for n in ns
        if fam.in_sigma(n)
    ]
    return out + _degree_checks("eigen", fam, poly, ns)


def suite_orthogonality(fam, ns, args):
    if isinstance(fam, XHahnFamily):
        try:
            idx = fam.sigma_N()
            G = fam.gram_matrix(idx)
        except OmegaZeroOnGrid as exc:
            return [_check("orthogonality", "measure", False, witness=int(exc.args[0]))]
        out = []
        for i, r in enumerate(idx):
            off = [idx[j] for j in range(len(idx)) if j != i and G[i][j] != 0]
            out.append(_check("orthogonality", f"row r={r} off-diagonal zero", not off, witnesses=off))
            out.append(_check("orthogonality", f"norm r={r}", G[i][i] == fam.predicted_norm(r) and G[i][i] != 0, value=str(G[i][i])))
        return out
    try:
        out = []
        offs = [n - fam.u for n in ns if fam.in_sigma(n)]
        for m in offs:
            desc, val, pred = weight_and_norm(fam, m)
            rel = abs(val - pred) / abs(pred)
            out.append(_check("orthogonality", f"norm n={m}", rel <= args.rtol, relative_error=rel, nodes=desc["nodes"]))
        worst = cross_orthogonality(fam, offs)
        out.append(_check("orthogonality", "cross terms", worst <= args.cross_tol, worst=worst))
        return out
    except PreconditionFailed as exc:
        return [_check("orthogonality", "weight hypotheses", "SKIP", reason=exc.which)]
    except QuadratureNonConvergent as exc:
        return [_check("orthogonality", "quadrature", False, reason=str(exc))]


def suite_duality(fam, ns, args):
    if not isinstance(fam, XHahnFamily):
        return [_check("duality", "duality", "SKIP", reason="Hahn family only")]
    us = range(0, min(5, fam.N - fam.F.k1) + 1)
    vs = [v for v in fam.sigma_N()]
    bad = [(u, v) for u in us for v in vs if not fam.duality_check(u, v)]
    out = [_check("duality", "xi/zeta duality", not bad, witnesses=bad[:5])]
    ks = range(0, fam.N - fam.F.k1 + 1)
    out.append(_check("duality", "Omega via Phi", all(fam.omega_phi_check(n) for n in ks)))
    out.append(_check("duality", "Lambda via Psi", all(fam.lambda_psi_check(n) for n in ks)))
    M, inv = fam.dual_gram_matrix()
    ok = all(M[i][j] == (inv[i] if i == j else 0) for i in range(len(M)) for j in range(len(M)))
    out.append(_check("duality", "dual orthogonality", ok))
    return out


def suite_admissible(fam, ns, args):
    out = []
    if isinstance(fam, XHahnFamily):
        adm = hahn_admissible(fam.params, fam.F)
        eq = admissibility_equivalences(fam)
        consistent = eq["rho_definite"] == eq["admissible"] == eq["omega_ratio_definite"]
        out.append(_check("admissible", "equivalent characterisations agree", consistent, **eq))
        if adm.admissible:
            out.append(_check("admissible", "sign prediction", eq["ratio_sign"] == eq["predicted_ratio_sign"]))
    else:
        adm = jacobi_admissible(fam.params, fam.F)
    verdict = "Admissible" if adm.admissible else "NotAdmissible"
    ok = True
    if args.expect is not None:
        ok = (args.expect == "admissible") == adm.admissible
    if args.expect_witness is not None:
        ok = ok and adm.witness == args.expect_witness
    out.append(_check("admissible", "verdict", ok, verdict=verdict, witness=adm.witness, sign=adm.sign))
    return out


def suite_darboux(fam, ns, args):
    out = []
    if isinstance(fam, XHahnFamily):
        if not fam.F.f2:
            return [_check("darboux", "factorisation", "SKIP", reason="F2 empty")]
        for name, ok in fam.darboux_checks().items():
            out.append(_check("darboux", name, ok))
        return out
    for side, part in ((1, fam.F.f1), (2, fam.F.f2)):
        if part:
            for name, ok in fam.darboux_checks(side).items():
                out.append(_check("darboux", f"side {side}: {name}", ok))
    return out


def _jacobi_of(fam, args):
    if isinstance(fam, XJacobiFamily):
        return fam
    return XJacobiFamily(JacobiParams(fam.alpha, fam.beta), fam.F, strict=not args.allow_degenerate)


def suite_limit(fam, ns, args):
    jf = _jacobi_of(fam, args)
    ms = [n for n in range(jf.u, jf.u + 5) if jf.in_sigma(n)] if isinstance(fam, XHahnFamily) else ns
    out = [_check("limit", f"Hahn limit n={n}", jf.limit_from_hahn(n)) for n in ms if jf.in_sigma(n)]
    out.append(_check("limit", "Omega limit", jf.omega_limit_from_hahn()))
    return out


def suite_boundary(fam, ns, args):
    jf = _jacobi_of(fam, args)
    out = [
        _check("boundary", f"Omega({at:+d}) closed form", jf.omega_boundary(at) == jf.omega(mpq(at)))
        for at in (1, -1)
    ]
    p, rhs = jf.base_relation()
    out.append(_check("boundary", "first polynomial via lowered Omega", p == rhs))
    return out


def suite_recurrence(fam, ns, args):
    F = fam.F
    if args.upsilon:
        U = parse_poly(args.upsilon)
    elif isinstance(fam, XHahnFamily):
        U = upsilon_hahn(fam.params, F)
    else:
        U = upsilon_jacobi(fam.params, F)
    poly = fam.x_hahn if isinstance(fam, XHahnFamily) else fam.x_jacobi
    if fam.degenerate:
        out = [_check("recurrence", "degree of Upsilon", "SKIP", reason="degenerate parameters", upsilon=str(U))]
    else:
        out = [_check("recurrence", "degree of Upsilon", U.degree("x") == F.w, upsilon=str(U))]
    idx = [n for n in ns if fam.in_sigma(n) and n - F.w >= 0]
    if isinstance(fam, XHahnFamily):
        # indices beyond N + u leave the finite family
        idx = [n for n in idx if n + F.w <= fam.N + fam.u]
    for n in idx:
        try:
            coeffs = recover_coeffs(poly, U, n, F.w)
            ok = residual(poly, U, n, coeffs).is_zero()
            out.append(_check("recurrence", f"order {2 * F.w + 1} at n={n}", ok))
        except Inconsistent as exc:
            out.append(_check("recurrence", f"order {2 * F.w + 1} at n={n}", False, inconsistent_row=exc.row))
        except Underdetermined as exc:
            out.append(_check("recurrence", f"order {2 * F.w + 1} at n={n}", False, reason=str(exc)))
    if idx and not args.upsilon:
        n = idx[-1]
        name = f"window {F.w - 1} fails at n={n}"
        if fam.degenerate:
            out.append(_check("recurrence", name, "SKIP", reason="degenerate parameters"))
        else:
            out.append(_check("recurrence", name, window_fails(fam, U, n, F.w - 1)))
    return out


SUITE_FUNCS = {
    "eigen": suite_eigen,
    "orthogonality": suite_orthogonality,
    "duality": suite_duality,
    "admissible": suite_admissible,
    "darboux": suite_darboux,
    "limit": suite_limit,
    "recurrence": suite_recurrence,
    "boundary": suite_boundary,
}

FAMILY_SUITES = {
    "xhahn": ("eigen", "orthogonality", "duality", "admissible", "darboux", "recurrence"),
    "xjacobi": ("eigen", "orthogonality", "admissible", "darboux", "limit", "recurrence", "boundary"),
}


def _run_suite(name, fam, ns, args):
    try:
        return SUITE_FUNCS[name](fam, ns, args)
    except ParamViolation as exc:
        return [_check(name, "parameters", "SKIP", reason=str(exc))]


def run_suites(fam, suites, ns, args):
    """Checks from every suite, in a deterministic order regardless of thread count."""
    with ThreadPoolExecutor(max_workers=_threads(args)) as pool:
        futures = {s: pool.submit(_run_suite, s, fam, ns, args) for s in suites}
        return [c for s in suites for c in futures[s].result()]


def cmd_verify(args):
    if args.fixture is not None:
        from .fixtures import run_all

        results = run_all(args.fixture_file, args.fixture or None)
        rows = [(r["name"], r["status"]) for r in results]
        _emit({"schema": SCHEMA, "fixtures": results}, args.format, rows, ["fixture", "status"])
        return EXIT_OK if all(r["status"] == "PASS" for r in results) else EXIT_FAIL
    fam = _family(args)
    suites = FAMILY_SUITES[args.family] if args.suite == "all" else (args.suite,)
    ns = _indices(args, fam)
    checks = run_suites(fam, suites, ns, args)
    failed = [c for c in checks if c["status"] == "FAIL"]
    obj = {**_header(args, fam), "suite": args.suite, "checks": checks, "passed": not failed}
    rows = [(c["suite"], c["check"], c["status"]) for c in checks]
    _emit(obj, args.format, rows, ["suite", "check", "status"])
    return EXIT_FAIL if failed else EXIT_OK


# -- admissible ---------------------------------------------------------------------------------


def cmd_admissible(args):
    F = _pair(args)
    a, b = parse_rational(args.alpha), parse_rational(args.beta)
    if args.family == "xhahn":
        if args.N is None:
            raise UsageError("--N is required for the Hahn family")
        adm = hahn_admissible(HahnParams(a, b, args.N), F)
        extra = {"notes": adm.notes}
        values = [(x, str(v)) for x, v in adm.values]
    else:
        adm = jacobi_admissible(JacobiParams(a, b), F)
        extra = {"scan": convth_scan(JacobiParams(a, b), F, strict=not args.allow_degenerate)}
        values = [(x, s) for x, s in adm.values]
    obj = {
        "schema": SCHEMA,
        "family": args.family,
        "alpha": str(a),
        "beta": str(b),
        "F": {"F1": list(F.f1), "F2": list(F.f2)},
        "verdict": "Admissible" if adm.admissible else "NotAdmissible",
        "witness": adm.witness,
        "sign": adm.sign,
        "values": values,
        **extra,
    }
    if args.family == "xhahn":
        obj["N"] = args.N
    _emit(obj, args.format, values, ["x", "H" if args.family == "xhahn" else "sign H"])
    return EXIT_OK


# -- recurrence-table -------------------------------------------------------------------------


def cmd_recurrence_table(args):
    fam = _family(args)
    F = fam.F
    hahn_side = isinstance(fam, XHahnFamily)
    U = upsilon_hahn(fam.params, F) if hahn_side else upsilon_jacobi(fam.params, F)
    poly = fam.x_hahn if hahn_side else fam.x_jacobi
    ns = [n for n in _indices(args, fam) if fam.in_sigma(n)]
    table = {}
    for n in ns:
        c_n = mpq(n) if args.normalization == "n" else mpq(1)
        try:
            table[n] = recover_coeffs(poly, U, n, F.w, c_n)
        except Inconsistent as exc:
            print(f"no recurrence of order {2 * F.w + 1} at n={n} (row {exc.row})", file=sys.stderr)
            return EXIT_FAIL
    js = range(-F.w, F.w + 1)
    obj = {
        **_header(args, fam),
        "order": 2 * F.w + 1,
        "normalization": args.normalization,
        "upsilon": U.to_json(),
        "upsilon_text": str(U),
        "coefficients": {str(n): {str(j): str(v) for j, v in zip(js, vs)} for n, vs in table.items()},
    }
    if args.fit:
        fits = {}
        for i, j in enumerate(js):
            fit = rational_fit(ns, [table[n][i] for n in ns])
            fits[str(j)] = None if fit is None else {"num": str(fit[0]), "den": str(fit[1])}
        obj["rational_fit"] = fits
    if args.format == "csv":
        rows = [
            (n, j, int(rat(v).numerator), int(rat(v).denominator))
            for n, vs in table.items()
            for j, v in zip(js, vs)
        ]
        _emit(obj, "csv", rows, ["n", "j", "numerator", "denominator"])
    else:
        rows = [(n, j, str(v)) for n, vs in table.items() for j, v in zip(js, vs)]
        _emit(obj, args.format, rows, ["n", "j", "A_j(n)"])
    return EXIT_OK


# -- limit-check --------------------------------------------------------------------------------


def cmd_limit_check(args):
    fam = _family(args, "xjacobi")
    ns = _indices(args, fam)
    checks = [_check("limit", f"n={n}", fam.limit_from_hahn(n)) for n in ns if fam.in_sigma(n)]
    checks.append(_check("limit", "Omega", fam.omega_limit_from_hahn()))
    failed = any(c["status"] == "FAIL" for c in checks)
    obj = {**_header(args, fam), "checks": checks, "passed": not failed}
    _emit(obj, args.format, [(c["check"], c["status"]) for c in checks], ["check", "status"])
    return EXIT_FAIL if failed else EXIT_OK


# -- parser ---------------------------------------------------------------------------------------


def _common(p, family=True, need_family=True):
    if family:
        p.add_argument("family", choices=("xhahn", "xjacobi"), nargs=None if need_family else "?", default="xhahn")
    p.add_argument("--alpha", required=True, help="rational p/q")
    p.add_argument("--beta", required=True, help="rational p/q")
    p.add_argument("--N", type=int, default=None, help="positive integer (Hahn only)")
    p.add_argument("--F", required=True, help='pair, e.g. "F1=1,2;F2=1"')
    p.add_argument("--n", default=None, help="indices: 3, 1..4 or 1,2,5")
    p.add_argument("--format", choices=("json", "csv", "pretty"), default="json")
    p.add_argument("--allow-degenerate", action="store_true", help="accept parameters where degrees drop")
    p.add_argument("--threads", type=int, default=None, help="worker threads (default XORTHO_THREADS or 1)")


def build_parser():
    parser = _Parser(prog="xortho", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", help="emit polynomials and Omega")
    _common(g)
    g.add_argument("--operator", action="store_true", help="include the second order operator")

    v = sub.add_parser("verify", help="run verification suites")
    v.add_argument("family", choices=("xhahn", "xjacobi"), nargs="?", default="xhahn")
    v.add_argument("--alpha")
    v.add_argument("--beta")
    v.add_argument("--N", type=int, default=None)
    v.add_argument("--F")
    v.add_argument("--n", default=None)
    v.add_argument("--format", choices=("json", "csv", "pretty"), default="json")
    v.add_argument("--allow-degenerate", action="store_true")
    v.add_argument("--threads", type=int, default=None)
    v.add_argument("--suite", choices=SUITES + ("all",), default="all")
    v.add_argument("--expect", choices=("admissible", "not-admissible"), default=None)
    v.add_argument("--expect-witness", type=int, default=None)
    v.add_argument("--upsilon", default=None, help="override Upsilon, e.g. 'x^3 + x'")
    v.add_argument("--rtol", type=float, default=1e-8, help="relative tolerance for quadrature norms")
    v.add_argument("--cross-tol", type=float, default=1e-10, help="bound for normalised cross integrals")
    v.add_argument("--fixture", nargs="*", default=None, help="run shipped worked examples (optionally by name)")
    v.add_argument("--fixture-file", default=None, help="alternative fixture JSON")

    a = sub.add_parser("admissible", help="classify parameters")
    _common(a)

    r = sub.add_parser("recurrence-table", help="recurrence coefficients A_j(n)")
    _common(r)
    r.add_argument("--normalization", choices=("1", "n"), default="1", help="c_n in Upsilon c_n p_n")
    r.add_argument("--fit", action="store_true", help="fit each A_j(n) by a rational function of n")

    lc = sub.add_parser("limit-check", help="Hahn to Jacobi limit by symbolic N")
    _common(lc, family=False)
    return parser


COMMANDS = {
    "gen": cmd_gen,
    "verify": cmd_verify,
    "admissible": cmd_admissible,
    "recurrence-table": cmd_recurrence_table,
    "limit-check": cmd_limit_check,
}


def _attach_values(argv):
    """Join '--alpha -7/2' into '--alpha=-7/2' so negative rationals are not read as flags."""
    out = []
    it = iter(argv)
    for tok in it:
        if tok in ("--alpha", "--beta"):
            out.append(f"{tok}={next(it, '')}")
        else:
            out.append(tok)
    return out


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(_attach_values(sys.argv[1:] if argv is None else argv))
    if args.command == "verify" and args.fixture is None:
        missing = [o for o in ("alpha", "beta", "F") if getattr(args, o) is None]
        if missing:
            parser.error("verify needs " + ", ".join(f"--{m}" for m in missing) + " (or --fixture)")
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"xortho: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParamViolation as exc:
        print(f"xortho: parameter constraint violated: {exc}", file=sys.stderr)
        return EXIT_PARAM
    except NotDivisible as exc:
        print(f"xortho: exact division failed: {exc}", file=sys.stderr)
        return EXIT_NOTDIV


if __name__ == "__main__":
    sys.exit(main())
