"""Exceptional Jacobi polynomials: Wronskian-type determinants of Jacobi polynomials."""

from __future__ import annotations

from functools import cached_property
from math import comb, factorial

from gmpy2 import mpq

from .algebra import (
    ONE,
    NVAR,
    X,
    MultiPoly,
    RationalFn,
    count_real_roots,
    det_poly,
    exact_div,
    poch,
    rat,
)
from .classical import JacobiParams, ParamViolation, jacobi, lam
from .combinatorics import vandermonde
from .operators import DerivOp
from .xhahn import Admissibility, XHahnFamily, poch_signed, sign_verdict
from .classical import HahnParams


class GammaPole(ValueError):
    def __init__(self, x):
        super().__init__(f"Gamma pole in the admissibility function at x={x}")
        self.x = x


def _sign(v):
    return (v > 0) - (v < 0)


def gamma_sign(y):
    """Sign of Gamma(y) for rational y that is not a pole: (-1)^(poles crossed)."""
    y = rat(y)
    if y > 0:
        return 1
    if y.denominator == 1:
        raise ZeroDivisionError(f"Gamma has a pole at {y}")
    crossed = int(-(y.numerator // y.denominator))  # poles 0, -1, ..., above y
    return -1 if crossed % 2 else 1


def _floor(v):
    v = rat(v)
    return int(v.numerator // v.denominator)


class XJacobiFamily:
    """Exceptional Jacobi family for fixed (alpha, beta) and pair F."""

    def __init__(self, params, F, strict=True):
        if not isinstance(params, JacobiParams):
            params = JacobiParams(*params)
        F.require_nonempty()
        self.degenerate = params.violations(F)
        if strict and self.degenerate:
            raise ParamViolation("; ".join(self.degenerate))
        self.params = params
        self.F = F
        self.alpha = params.alpha
        self.beta = params.beta
        self._p = {}

    @property
    def u(self):
        return self.F.u

    def in_sigma(self, n):
        return n >= self.u and (n - self.u) not in self.F.f1

    def _rows(self, columns, extra):
        """F1 and F2 rows; ``extra`` is the (1+x) exponent offset k-j+extra."""
        a, b, k = self.alpha, self.beta, self.F.k
        rows = []
        for f in self.F.f1:
            p = jacobi(f, a, b)
            rows.append([p.diff("x", j - 1) * (-1) ** (j - 1) for j in columns])
        for f in self.F.f2:
            rows.append(
                [
                    jacobi(f, a + j - 1, -b - j + 1) * (X + 1) ** (k - j + extra) * poch(b - f, j - 1)
                    for j in columns
                ]
            )
        return rows

    @property
    def _den(self):
        k2 = self.F.k2
        return (X + 1) ** (k2 * (k2 - 1))

    def x_jacobi(self, n):
        if n in self._p:
            return self._p[n]
        if not self.in_sigma(n):
            self._p[n] = MultiPoly.const(0)
            return self._p[n]
        cols = range(1, self.F.k + 2)
        p = jacobi(n - self.u, self.alpha, self.beta)
        top = [p.diff("x", j - 1) * (-1) ** (j - 1) for j in cols]
        out = exact_div(det_poly([top] + self._rows(cols, 1)), self._den)
        self._p[n] = out
        return out

    @cached_property
    def omega(self):
        cols = range(1, self.F.k + 1)
        return exact_div(det_poly(self._rows(cols, 0)), self._den)

    def leading_coefficient(self, n):
        a, b, F = self.alpha, self.beta, self.F
        m = n - self.u
        e = comb(F.k1 + 1, 2) + comb(F.k2, 2)
        num = vandermonde(F.f1) * vandermonde(F.f2)
        for i in [m] + list(F.f1):
            num *= poch(a + b + i + 1, i)
        for i in F.f2:
            num *= poch(a - b + i + 1, i)
        for i in [m] + list(F.f1):
            for g in F.f2:
                num *= b + i - g
        for f in F.f1:
            num *= f - m
        den = mpq((-1) ** e * 2 ** (n + e) * factorial(m))
        for f in F.f1 + F.f2:
            den *= factorial(f)
        return num / den

    # -- closed forms -----------------------------------------------------------------

    def omega_boundary(self, at):
        """Closed-form product for Omega(+1) or Omega(-1)."""
        a, b, F = self.alpha, self.beta, self.F
        comps = ((F.f1, 1), (F.f2, -1))
        num = mpq(1)
        for comp, eps in comps:
            kj = len(comp)
            shift = a if at == 1 else eps * b
            num *= vandermonde(comp)
            for i in range(1, kj + 1):
                num *= poch(shift + i, kj - i + 1)
            for f in comp:
                num *= poch_signed(shift + kj + 1, f - kj)
            for i in range(kj):
                for j in range(i + 1, kj):
                    num *= a + eps * b + comp[i] + comp[j] + 1
        fact = mpq(1)
        for f in F.f1 + F.f2:
            fact *= factorial(f)
        e = comb(F.k1, 2) + comb(F.k2, 2)
        if at == 1:
            den = mpq(-2) ** e * fact
            for i in range(1, min(F.k1, F.k2) + 1):
                den *= poch(a + i, F.k - 2 * i + 1)
            for f in F.f1:
                for g in F.f2:
                    num *= (a + f + g + 1) * (b + f - g)
            return num / den
        if at == -1:
            den = mpq(-1) ** sum(F.f1 + F.f2) * mpq(2) ** e * fact
            for j in range(1, min(F.k1, F.k2) + 1):
                for i in range(j - F.k1, F.k2 - j + 1):
                    num *= b - i
            return num / den
        raise ValueError("boundary point must be +1 or -1")

    def z_constant(self):
        a, b, F = self.alpha, self.beta, self.F
        s = F.s
        num = mpq(1)
        for f in F.f1:
            num *= poch(f + a + b + 1, min(f, s))
        for f in F.f2:
            num *= poch(b - f, s)
        return num / mpq(-2) ** (s * (2 * F.k1 - s + 1) // 2)

    def base_relation(self):
        """(P_{u_F}, z * Omega of the lowered pair at shifted parameters)."""
        s = self.F.s
        down = self.F.down()
        if down.is_empty():
            om = ONE
        else:
            om = XJacobiFamily(
                JacobiParams(self.alpha + s, self.beta + s), down, strict=False
            ).omega
        return self.x_jacobi(self.u), om * self.z_constant()

    # -- limits from the Hahn side ------------------------------------------------------

    def upsilon_n(self, n):
        a, F = self.alpha, self.F
        m = n - self.u
        e = comb(F.k1 + 1, 2) + comb(F.k2, 2)
        num = mpq(-1) ** n * mpq(-2) ** e * factorial(m)
        den = poch(a + 1, m)
        for f in F.f1 + F.f2:
            num *= factorial(f)
            den *= poch(a + 1, f)
        return num / den

    def upsilon_omega(self):
        a, F = self.alpha, self.F
        e = comb(F.k1, 2) + comb(F.k2, 2)
        num = mpq(-1) ** (self.u + F.k1) * mpq(-2) ** e
        den = mpq(1)
        for f in F.f1 + F.f2:
            num *= factorial(f)
            den *= poch(a + 1, f)
        return num / den

    def _hahn_symbolic(self):
        return XHahnFamily(HahnParams(self.alpha, self.beta, None), self.F, strict=False)

    def limit_from_hahn(self, n):
        """Top N-power of h_n((1-x)N/2) equals upsilon_n P_n (exact, symbolic N)."""
        h = self._hahn_symbolic().x_hahn(n).subs("x", (1 - X) * NVAR / 2)
        if h.degree("N") > n:
            return False
        return h.coeff("N", n) == self.x_jacobi(n) * self.upsilon_n(n)

    def omega_limit_from_hahn(self):
        d = self.u + self.F.k1
        om = self._hahn_symbolic().omega.subs("x", (1 - X) * NVAR / 2)
        if om.degree("N") > d:
            return False
        return om.coeff("N", d) == self.omega * self.upsilon_omega()

    # -- differential operator ----------------------------------------------------------

    def eigenvalue(self, n):
        return -lam(mpq(n - self.u), self.alpha, self.beta)

    def second_order_op(self):
        a, b, F = self.alpha, self.beta, self.F
        om = self.omega
        d1 = RationalFn(om.diff(), om)
        d2 = RationalFn(om.diff("x", 2), om)
        one_m = 1 - X * X
        h1 = RationalFn(b - a - 2 * F.k2 - (a + b + 2 * F.k1 + 2) * X) - d1 * (one_m * 2)
        h0 = (
            RationalFn(MultiPoly.const(-lam(mpq(F.k1), a, b)))
            + d1 * (a - b + 2 * F.k2 + (2 * F.k1 + a + b) * X)
            + d2 * one_m
        )
        return DerivOp([h0, h1, one_m])

    def eigen_residual(self, n):
        """Omega^2 (D P_n + lambda(n-u) P_n) as a polynomial."""
        a, b, F = self.alpha, self.beta, self.F
        om = self.omega
        d1, d2 = om.diff(), om.diff("x", 2)
        p = self.x_jacobi(n)
        one_m = 1 - X * X
        c2 = one_m * om * om
        c1 = (b - a - 2 * F.k2 - (a + b + 2 * F.k1 + 2) * X) * om * om - one_m * 2 * d1 * om
        c0 = (
            -lam(mpq(F.k1), a, b) * om * om
            + (a - b + 2 * F.k2 + (2 * F.k1 + a + b) * X) * d1 * om
            + one_m * d2 * om
        )
        return c2 * p.diff("x", 2) + c1 * p.diff() + c0 * p - self.eigenvalue(n) * om * om * p

    # -- Darboux factorisation ------------------------------------------------------------

    def _reduced(self, pair):
        if pair.is_empty():
            return None
        return XJacobiFamily(self.params, pair, strict=False)

    def reduced_operator(self, pair):
        fam = self._reduced(pair)
        if fam is not None:
            return fam.second_order_op()
        a, b = self.alpha, self.beta
        return DerivOp([MultiPoly.const(0), b - a - (a + b + 2) * X, 1 - X * X])

    def reduced_poly(self, pair, n):
        fam = self._reduced(pair)
        return jacobi(n, self.alpha, self.beta) if fam is None else fam.x_jacobi(n)

    def darboux_factor(self, side):
        """(A, B, reduced pair, constant) removing the maximum of F1 (side 1) or F2 (side 2)."""
        a, b, F = self.alpha, self.beta, self.F
        red = F.drop(side)
        om = self.omega
        fam_r = self._reduced(red)
        om_r = fam_r.omega if fam_r is not None else ONE
        one_m = 1 - X * X
        if side == 1:
            A = DerivOp([RationalFn(-om.diff(), om_r), RationalFn(om, om_r)])
            B = DerivOp(
                [
                    RationalFn(
                        -(one_m * om_r.diff() + ((a - b + 2 * F.k2) + (a + b + 2 * F.k1) * X) * om_r),
                        om,
                    ),
                    RationalFn(one_m * om_r, om),
                ]
            )
            const = lam(mpq(F.f1[-1]), a, b)
        else:
            A = DerivOp(
                [
                    RationalFn(-((1 + X) * om.diff() - (b + F.k1 - F.k2 + 1) * om), om_r),
                    RationalFn((1 + X) * om, om_r),
                ]
            )
            B = DerivOp(
                [
                    RationalFn(-((1 - X) * om_r.diff() + (a + F.k) * om_r), om),
                    RationalFn((1 - X) * om_r, om),
                ]
            )
            const = lam(mpq(F.f2[-1]) - b, a, b)
        return A, B, red, const

    def darboux_checks(self, side, ns=range(3)):
        A, B, red, c = self.darboux_factor(side)
        D = self.second_order_op()
        D_red = self.reduced_operator(red)
        cid = DerivOp.identity(c)
        out = {
            "reduced = BA - c": D_red == (B @ A) - cid,
            "full = AB - c": D == (A @ B) - cid,
        }
        a, b = self.alpha, self.beta
        u_red = red.u if not red.is_empty() else 0
        f = (self.F.f1 if side == 1 else self.F.f2)[-1]
        fwd, back = [], []
        for n in ns:
            if n in self.F.f1:
                continue
            p = self.x_jacobi(n + self.u)
            q = self.reduced_poly(red, n + u_red)
            fwd.append(RationalFn(p) == A.apply(q))
            k = -(n - f) * (n + f + a + b + 1) if side == 1 else -(n + a + f + 1) * (n + b - f)
            back.append(B.apply(p) == RationalFn(q * k))
        out["A intertwines"] = all(fwd)
        out["B intertwines"] = all(back)
        return out

    # -- weight hypotheses --------------------------------------------------------------

    def omega_roots_in_interval(self):
        """Number of distinct real roots of Omega in [-1, 1] (exact Sturm count)."""
        return count_real_roots(self.omega, mpq(-1), mpq(1))

    def weight_hypotheses(self):
        F = self.F
        return {
            "alpha+k+1>0": self.alpha + F.k + 1 > 0,
            "beta+k1-k2+1>0": self.beta + F.k1 - F.k2 + 1 > 0,
            "omega root-free on [-1,1]": self.omega_roots_in_interval() == 0,
        }


# -- admissibility -------------------------------------------------------------------------


def jacobi_H_parts(x, alpha, beta, F):
    """(rational part, Gamma-ratio sign) of the Jacobi admissibility function at x.

    H = rational * Gamma(x+a+1) Gamma(x+b+1) / Gamma(x+a+b+1), where the
    rational part already includes 1/(2x+a+b+1).
    """
    a, b = rat(alpha), rat(beta)
    r = mpq(1)
    for f in F.f1:
        r *= (x - f) * (x + f + a + b + 1)
    for f in F.f2:
        r *= (x + b - f) * (x + f + a + 1)
    d = 2 * x + a + b + 1
    if d == 0:
        raise GammaPole(x)
    r /= d
    for y in (x + a + 1, x + b + 1):
        if y <= 0 and y.denominator == 1:
            raise GammaPole(x)
    y = x + a + b + 1
    if y <= 0 and y.denominator == 1:
        return mpq(0), 0  # 1/Gamma vanishes
    s = gamma_sign(x + a + 1) * gamma_sign(x + b + 1) * gamma_sign(y)
    return r, s


def jacobi_H_sign(x, alpha, beta, F):
    r, s = jacobi_H_parts(x, alpha, beta, F)
    return _sign(r) * s


def jacobi_H_value(x, alpha, beta, F, dps=50):
    """High-precision value of the Jacobi admissibility function (mpmath)."""
    import mpmath

    r, s = jacobi_H_parts(x, alpha, beta, F)
    if r == 0 or s == 0:
        return mpmath.mpf(0)
    with mpmath.workdps(dps):
        a, b = rat(alpha), rat(beta)
        q = lambda v: mpmath.mpf(int(v.numerator)) / int(v.denominator)
        g = mpmath.gamma(q(x + a + 1)) * mpmath.gamma(q(x + b + 1)) / mpmath.gamma(q(x + a + b + 1))
        return q(r) * g


def jacobi_check_range(alpha, beta, F):
    a, b = rat(alpha), rat(beta)
    m1 = F.f1[-1] if F.f1 else 0
    m2 = -_floor(b) + F.f2[-1] if F.f2 else 0
    return max(m1, m2, -_floor(a), -_floor(b), -_floor(a + b)) + 1


def jacobi_admissible(params, F):
    """H >= 0 on the finite range 0..max(...)+1 that decides admissibility."""
    if not isinstance(params, JacobiParams):
        params = JacobiParams(*params)
    bad = [v for v in params.violations(None)]
    if bad:
        raise ParamViolation("; ".join(bad))
    a, b = params.alpha, params.beta
    top = max(jacobi_check_range(a, b, F), 0)
    values = [(x, jacobi_H_sign(x, a, b, F)) for x in range(top + 1)]
    witness = next((x for x, s in values if s < 0), None)
    sign, _ = sign_verdict(values)
    return Admissibility(witness is None, 1 if witness is None else sign, witness, values)


def convth_scan(params, F, strict=True):
    """Evaluate admissibility and the weight hypotheses side by side.

    Reports which implications between them are instantiated by this example.
    """
    if not isinstance(params, JacobiParams):
        params = JacobiParams(*params)
    fam = XJacobiFamily(params, F, strict=strict)
    adm = jacobi_admissible(params, F)
    hyp = fam.weight_hypotheses()
    a, b, s = params.alpha, params.beta, F.s
    extra = a + b + s + 1 > 0
    report = {
        "admissible": adm.admissible,
        "witness": adm.witness,
        **hyp,
        "alpha+beta+s+1": str(a + b + s + 1),
        "alpha+beta+s+1>0": extra,
        "omega roots in [-1,1]": fam.omega_roots_in_interval(),
    }
    hyps_hold = all(hyp.values())
    report["hypotheses imply admissible"] = (not hyps_hold) or adm.admissible
    report["admissible implies sign conditions"] = (not adm.admissible) or (
        hyp["alpha+k+1>0"] and hyp["beta+k1-k2+1>0"]
    )
    report["admissible with extra condition implies root-free"] = (
        not (adm.admissible and extra)
    ) or hyp["omega root-free on [-1,1]"]
    down = F.down()
    if not down.is_empty():
        try:
            d_adm = jacobi_admissible(JacobiParams(a + s, b + s), down)
            report["lowered admissible"] = d_adm.admissible
            report["lowered witness"] = d_adm.witness
        except ParamViolation as exc:
            report["lowered admissible"] = None
            report["lowered error"] = str(exc)
    return report
