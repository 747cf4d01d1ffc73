"""Higher order recurrence relations for the exceptional families.

The recurrence has the shape  sum_{j=-w}^{w} A_j(n) p_{n+j} = Upsilon(x) c_n p_n.
Upsilon comes from a first order difference (Hahn) or differential (Jacobi)
equation whose right-hand side is an Omega polynomial of the involuted pair.
Coefficients A_j(n) are recovered by exact linear solving.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

from gmpy2 import mpq

from .algebra import (
    X,
    ZERO,
    AlgebraError,
    Inconsistent,
    MultiPoly,
    NVAR,
    Singular,
    as_poly,
    nullspace,
    poch,
    rat,
    solve_linear,
)
from .classical import HahnParams, JacobiParams
from .combinatorics import PairF, involution
from .xhahn import XHahnFamily
from .xjacobi import XJacobiFamily


class InvolutionUndefined(ValueError):
    pass


class Underdetermined(AlgebraError):
    pass


# -- the eigenvalue polynomial ------------------------------------------------------------


def _involuted(F, allow_empty):
    """(G, max F1, max F2) with the empty-set conventions I(empty)=empty, max(empty)=-1."""
    if not allow_empty and (not F.f1 or not F.f2):
        raise InvolutionUndefined("both components must be nonempty for the involution")
    g1 = involution(F.f1) if F.f1 else ()
    g2 = involution(F.f2) if F.f2 else ()
    m1 = F.f1[-1] if F.f1 else -1
    m2 = F.f2[-1] if F.f2 else -1
    return PairF(g1, g2), m1, m2


def _hahn_omega(alpha, beta, npoly, G):
    """Omega polynomial for arbitrary (possibly negative or symbolic) N."""
    if G.is_empty():
        return MultiPoly.const(1)
    fam = XHahnFamily(HahnParams(alpha, beta, None), G, strict=False)
    fam.Np = as_poly(npoly)
    return fam.omega


def _jacobi_omega(alpha, beta, G):
    if G.is_empty():
        return MultiPoly.const(1)
    return XJacobiFamily(JacobiParams(alpha, beta), G, strict=False).omega


def upsilon_rhs_hahn(params, F, variant="corrected"):
    """Right-hand side R(x) of Upsilon(x) - Upsilon(x-1) = R(x).

    ``variant='literal'`` uses the parameter shifts (-a+m1+m2+2, -b+m1-m2,
    -N-3-m1) at -x; ``'corrected'`` uses (-a-m1-m2-2, -b-m1+m2, -N+m1-1)
    at -x, which is what the recurrence actually satisfies.
    """
    a, b = params.alpha, params.beta
    G, m1, m2 = _involuted(F, allow_empty=(variant == "corrected"))
    if variant == "literal":
        om = _hahn_omega(-a + m1 + m2 + 2, -b + m1 - m2, -params.npoly - 3 - m1, G)
    elif variant == "corrected":
        om = _hahn_omega(-a - m1 - m2 - 2, -b - m1 + m2, -params.npoly + m1 - 1, G)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    return om.subs("x", -X)


def upsilon_rhs_jacobi(params, F, variant="corrected"):
    """Right-hand side of Upsilon' = R.

    Same parameter shifts as the Hahn version, evaluated at x (not -x).
    """
    a, b = params.alpha, params.beta
    G, m1, m2 = _involuted(F, allow_empty=(variant == "corrected"))
    if variant == "literal":
        return _jacobi_omega(-a + m1 + m2 + 2, -b + m1 - m2, G)
    if variant == "corrected":
        return _jacobi_omega(-a - m1 - m2 - 2, -b - m1 + m2, G)
    raise ValueError(f"unknown variant {variant!r}")


def antidifference(R, at_zero=0):
    """U with U(x) - U(x-1) = R(x) and U(0) = at_zero.

    Coefficients of R may involve N; the solve is triangular from the top power.
    """
    U = ZERO
    rem = as_poly(R)
    for e in range(rem.degree("x"), -1, -1):
        # the top power of x^{e+1} - (x-1)^{e+1} is (e+1) x^e
        term = X ** (e + 1) * rem.coeff("x", e) * (mpq(1) / (e + 1))
        U = U + term
        rem = rem - (term - term.subs("x", X - 1))
    if not rem.is_zero():
        raise AlgebraError("antidifference left a remainder")
    return U + at_zero


def _scalar_or_poly(v):
    v = as_poly(v)
    return v.constant_term() if v.is_constant() else v


def antiderivative(R, point=0, value=0):
    """U with U' = R and U(point) = value."""
    U = ZERO
    for e, c in enumerate(R.coeffs("x")):
        U = U + X ** (e + 1) * (mpq(1) / (e + 1)) * c
    return U - U(rat(point)) + value


def upsilon_hahn(params, F, variant="corrected"):
    """Degree-w_F eigenvalue polynomial, normalised by Upsilon(0) = 0."""
    return antidifference(upsilon_rhs_hahn(params, F, variant))


def upsilon_jacobi_raw(params, F, variant="corrected"):
    """Antiderivative of the Jacobi right-hand side vanishing at x = 1."""
    return antiderivative(upsilon_rhs_jacobi(params, F, variant), 1, 0)


def upsilon_jacobi(params, F):
    """Limit of N^{-w} Upsilon_Hahn(N(1-x)/2) as N grows.

    This is the raw antiderivative rescaled; the limit fixes both the scale
    and the anchor Upsilon(1) = 0.
    """
    hp = HahnParams(params.alpha, params.beta, None)
    UH = upsilon_hahn(hp, F).subs("x", NVAR * (1 - X) * mpq(1, 2))
    top = UH.degree("N")
    lim = UH.coeff("N", top)
    raw = upsilon_jacobi_raw(params, F)
    if top != F.w or not proportional(lim, raw):
        raise AlgebraError("Hahn limit of Upsilon disagrees with the Jacobi equation")
    return lim


# -- recovering coefficients --------------------------------------------------------------


def _coeff_matrix(columns, target):
    polys = [as_poly(c) for c in columns] + [as_poly(target)]
    D = max((p.degree("x") for p in polys if not p.is_zero()), default=0)
    A = [[_scalar_or_poly(p.coeff("x", d)) for p in polys[:-1]] for d in range(D + 1)]
    b = [_scalar_or_poly(polys[-1].coeff("x", d)) for d in range(D + 1)]
    return A, b


def recover_coeffs(poly, upsilon, n, w, c_n=1):
    """Exact A_{-w..w}(n) with sum_j A_j p_{n+j} = Upsilon c_n p_n.

    ``poly`` maps an index to its polynomial (zero off the index set).  Raises
    Inconsistent when no window-w relation exists, Underdetermined when the
    solution is not unique.
    """
    cols = [poly(n + j) for j in range(-w, w + 1)]
    present = [i for i, c in enumerate(cols) if not as_poly(c).is_zero()]
    A, b = _coeff_matrix([cols[i] for i in present], upsilon * poly(n) * c_n)
    try:
        sol = solve_linear(A, b)
    except Singular as exc:
        raise Underdetermined(str(exc)) from exc
    out = [mpq(0)] * (2 * w + 1)
    for i, v in zip(present, sol):
        out[i] = v
    return out


def residual(poly, upsilon, n, coeffs, c_n=1):
    w = (len(coeffs) - 1) // 2
    total = -(upsilon * poly(n) * c_n)
    for j, a in zip(range(-w, w + 1), coeffs):
        if a:
            total = total + poly(n + j) * a
    return total


def upsilon_oracle(poly, n, w):
    """Every Upsilon of degree <= w admitting a window-w relation at index n.

    Returns a basis (list of polynomials) modulo nothing: the constants are
    always present; a genuine recurrence adds one more direction.
    """
    cols = [poly(n + j) for j in range(-w, w + 1)] + [-(X**i) * poly(n) for i in range(w + 1)]
    A, _ = _coeff_matrix(cols, ZERO)
    out = []
    for v in nullspace(A):
        y = v[-(w + 1):]
        out.append(sum((X**i * c for i, c in enumerate(y)), ZERO))
    return out


def proportional(p, q):
    """True when p = c q for a nonzero rational c."""
    p, q = as_poly(p), as_poly(q)
    if p.is_zero() or q.is_zero():
        return p.is_zero() and q.is_zero()
    e, c = p.leading_term()
    d = q.terms.get(e)
    return d is not None and p * d == q * c


def same_up_to_constant_and_scale(p, q):
    return proportional(p - p.coeff("x", 0), q - q.coeff("x", 0))


# -- the F = (empty, {1}) worked example ----------------------------------------------------


def hahn_table_coeffs(n, alpha, beta, N):
    """Closed-form A_{-2..2}(n) for F = (empty, {1}) with c_n = n."""
    a, b, N = rat(alpha), rat(beta), rat(N)
    n = mpq(n)
    binom3 = n * (n - 1) * (n - 2) / 6
    binom2 = n * (n - 1) / 2
    Am2 = (
        3 * (b - a - 2) * binom3 * (a + n + 1) * poch(b + n - 2, 2) * poch(N - n + 2, 2)
        * poch(a + b + N + n - 1, 2)
        / ((a + 1) * (a + n - 1) * poch(a + b + 2 * n - 4, 4))
    )
    Am1 = (
        2 * (a + b) * (a + b + 2 * N + 2) * binom2 * (a + n + 1) * (N - n + 2) * (a + b + N + n)
        * poch(b + n - 2, 2)
        / ((a + 1) * (a + b + 2 * n - 4) * poch(a + b + 2 * n - 2, 3))
    )
    A1 = (
        (a + b) * (a + b + 2 * N + 2) * n * (b + n - 2) * (a + b + n) * poch(a + n, 2)
        / ((a + 1) * (a + b + 2 * n + 2) * poch(a + b + 2 * n - 2, 3))
    )
    A2 = (
        (b - a - 2) * n * (b + n - 2) * poch(a + n, 2) * poch(a + b + n, 2)
        / (2 * (a + 1) * (b + n) * poch(a + b + 2 * n - 1, 4))
    )
    A0 = (
        -(a + n - 1) * (b + n - 4) * Am2 / ((a + n + 1) * (b + n - 2) * poch(N - n + 2, 2))
        + (a + n) * (b + n - 3) * Am1 / ((a + n + 1) * (b + n - 2) * (N - n + 2))
        + (a + n + 2) * (b + n - 1) * (N - n + 1) * A1 / ((a + n + 1) * (b + n - 2))
        - (a + n + 3) * (b + n) * poch(N - n, 2) * A2 / ((a + n + 1) * (b + n - 2))
    )
    return [Am2, Am1, A0, A1, A2]


def hahn_table_upsilon(alpha, beta, N):
    a, b, N = rat(alpha), rat(beta), rat(N)
    return X * X * ((b - a - 2) / (2 * (a + 1))) + X * (
        (2 * b * a + 3 * b - a + 2 * N - 2 + 2 * N * a) / (2 * (a + 1))
    )


def jacobi_table_coeffs(n, alpha, beta):
    """Closed-form A_{-2..2}(n) for the Jacobi family with F = (empty, {1})."""
    a, b = rat(alpha), rat(beta)
    n = mpq(n)
    Am2 = (
        (b - a - 2) * (a + n + 1) * (a + n - 2) * poch(b + n - 2, 2)
        / (2 * (a + 1) * poch(a + b + 2 * n - 4, 4))
    )
    Am1 = (
        -2 * (a + b) * (a + n - 1) * (a + n + 1) * poch(b + n - 2, 2)
        / ((a + 1) * (a + b + 2 * n - 4) * poch(a + b + 2 * n - 2, 3))
    )
    A1 = (
        -2 * (a + b) * n * (a + n + 1) * (b + n - 2) * (a + b + n)
        / ((a + 1) * (a + b + 2 * n + 2) * poch(a + b + 2 * n - 2, 3))
    )
    A2 = (
        (b - a - 2) * (n + 1) * n / 2 * (b + n - 2) * poch(a + b + n, 2)
        / ((a + 1) * (b + n) * poch(a + b + 2 * n - 1, 4))
    )
    A0 = (
        -(n - 1) * (n - 2) * (b + n - 4) * Am2 / ((a + n - 2) * (a + n + 1) * (b + n - 2))
        - (n - 1) * (a + n) * (b + n - 3) * Am1 / ((a + n - 1) * (a + n + 1) * (b + n - 2))
        - (a + n + 2) * (a + n) * (b + n - 1) * A1 / (n * (a + n + 1) * (b + n - 2))
        - (a + n + 3) * (a + n) * (b + n) * A2 / (n * (n + 1) * (b + n - 2))
    )
    return [Am2, Am1, A0, A1, A2]


def jacobi_table_upsilon(alpha, beta):
    """The printed Jacobi Upsilon, read as (1-x)(2+3a+b+(a-b+2)x)/(8(a+1))."""
    a, b = rat(alpha), rat(beta)
    return (1 - X) * (2 + 3 * a + b + (a - b + 2) * X) / (8 * (a + 1))


# -- verification reports ------------------------------------------------------------------


@dataclass
class Recurrence:
    order: int
    upsilon: MultiPoly
    coeffs_by_n: dict = field(default_factory=dict)
    residual_zero: dict = field(default_factory=dict)

    def to_json(self):
        return {
            "order": self.order,
            "upsilon": self.upsilon.to_json(),
            "upsilon_text": str(self.upsilon),
            "coefficients": {
                str(n): [str(v) for v in vs] for n, vs in sorted(self.coeffs_by_n.items())
            },
            "residual_zero": {str(n): ok for n, ok in sorted(self.residual_zero.items())},
        }

    def to_csv(self):
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(["n", "j", "numerator", "denominator"])
        w = (self.order - 1) // 2
        for n, vs in sorted(self.coeffs_by_n.items()):
            for j, v in zip(range(-w, w + 1), vs):
                v = rat(v)
                wr.writerow([n, j, int(v.numerator), int(v.denominator)])
        return buf.getvalue()


def family_poly(fam):
    if isinstance(fam, XHahnFamily):
        return fam.x_hahn
    return fam.x_jacobi


def verify_recurrence(fam, upsilon, ns, c=lambda n: 1, w=None):
    """Recover coefficients and check residuals over ``ns``; window w_F by default."""
    w = fam.F.w if w is None else w
    poly = family_poly(fam)
    rec = Recurrence(order=2 * w + 1, upsilon=upsilon)
    for n in ns:
        coeffs = recover_coeffs(poly, upsilon, n, w, c(n))
        rec.coeffs_by_n[n] = coeffs
        rec.residual_zero[n] = residual(poly, upsilon, n, coeffs, c(n)).is_zero()
    return rec


def window_fails(fam, upsilon, n, w):
    """True when no relation of half-width ``w`` exists at index n."""
    try:
        recover_coeffs(family_poly(fam), upsilon, n, w)
    except Inconsistent:
        return True
    return False


def rational_fit(ns, values, spare=2):
    """Exact P(n)/Q(n) (Q monic) of smallest total degree through the data.

    A candidate is accepted only if the system is overdetermined by at least
    ``spare`` points, so every fit is confirmed by values it was not built from.
    Returns (P, Q) as polynomials in n, or None.
    """
    pts = [(rat(n), rat(v)) for n, v in zip(ns, values)]
    for total in range(len(pts) - spare):
        for dq in range(total + 1):
            dp = total - dq
            if len(pts) < dp + dq + 1 + spare:
                continue
            # unknowns p_0..p_dp, q_0..q_{dq-1}; q_dq = 1
            rows = [[n**i for i in range(dp + 1)] + [-v * n**i for i in range(dq)] for n, v in pts]
            rhs = [v * n**dq for n, v in pts]
            try:
                sol = solve_linear(rows, rhs)
            except (Inconsistent, Singular):
                continue
            P = MultiPoly.from_coeffs(sol[: dp + 1], "n")
            Q = MultiPoly.from_coeffs(sol[dp + 1:] + [mpq(1)], "n")
            if all(Q(n=n) != 0 for n, _ in pts):
                return P, Q
    return None


def recurrence_json(rec, **meta):
    return json.dumps({"schema": "xortho/1", **meta, **rec.to_json()}, indent=2)
