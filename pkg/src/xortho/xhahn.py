"""Exceptional Hahn polynomials built from Casorati determinants of Hahn polynomials.

For a pair F = (F1, F2) the family member of index n is the (k+1)x(k+1)
determinant whose first row holds h_{n-u}(x+j-1), whose F1 rows hold
h_f(x+j-1) and whose F2 rows hold

    s_{k-j+1}^{N-k+1}(x) s_{j-1}^{N+b+1}(x+j-1) h_f^{a,-b,b+N}(x+j-1),

divided by prod_{i=1}^{k2} (N-x-k+1)_{k2-i} (N+b-x-i+2)_{i-1}.  Omega is
the k x k determinant of the F rows (one more factor of (N-x-k+1) per F2 row
in the denominator) and Lambda the same with column k replaced by k+1.
"""

from __future__ import annotations

from functools import cached_property

from gmpy2 import mpq

from .algebra import (
    ONE,
    X,
    ZERO,
    RationalFn,
    as_poly,
    binom,
    det_poly,
    exact_div,
    poch,
    rat,
)
from .classical import (
    DiscreteMeasure,
    HahnParams,
    ParamViolation,
    dual_hahn,
    dual_hahn_mass,
    hahn,
    hahn_leading,
    lam,
    s_poly,
)
from .combinatorics import sigma_N_of, vandermonde
from .operators import DiffOp


class NotInSigma(ValueError):
    pass


class OmegaZeroOnGrid(ValueError):
    def __init__(self, x):
        super().__init__(f"Omega(x)Omega(x+1) vanishes at x={x}")
        self.x = x


def poch_signed(a, m):
    """(a)_m extended to negative m by (a)_{-m} = 1/((a-1)(a-2)...(a-m))."""
    a = rat(a)
    if m >= 0:
        return poch(a, m)
    return 1 / poch(a + m, -m)


def hat(u):
    """max(-floor(u), 0) for rational u."""
    u = rat(u)
    fl = u.numerator // u.denominator
    return max(-int(fl), 0)


class XHahnFamily:
    """Exceptional Hahn family for fixed (alpha, beta, N) and pair F."""

    def __init__(self, params, F, strict=True):
        if not isinstance(params, HahnParams):
            params = HahnParams(*params)
        F.require_nonempty()
        # Violations make degrees drop (or poles appear); strict=False records them instead.
        self.degenerate = params.violations(F)
        if strict and self.degenerate:
            raise ParamViolation("; ".join(self.degenerate))
        self.params = params
        self.F = F
        self.alpha = params.alpha
        self.beta = params.beta
        self.Np = params.npoly
        self._h = {}

    # -- determinant rows -----------------------------------------------------------

    def _f2_entry(self, f, j, shift_hahn=None):
        """Entry of an F2 row in column j (1-based)."""
        k, Np, b = self.F.k, self.Np, self.beta
        h = hahn(f, self.alpha, -b, Np + b) if shift_hahn is None else shift_hahn
        return (
            s_poly(k - j + 1, Np - k + 1)
            * s_poly(j - 1, Np + b + 1, X + (j - 1))
            * h.shift("x", j - 1)
        )

    def _f_rows(self, columns):
        rows = []
        for f in self.F.f1:
            h = hahn(f, self.alpha, self.beta, self.Np)
            rows.append([h.shift("x", j - 1) for j in columns])
        for f in self.F.f2:
            h = hahn(f, self.alpha, -self.beta, self.Np + self.beta)
            rows.append([self._f2_entry(f, j, h) for j in columns])
        return rows

    def _denominator(self, extra):
        """prod_{i=1}^{k2} (N-x-k+1)_{k2-i+extra} (N+b-x-i+2)_{i-1}."""
        k, k2, Np, b = self.F.k, self.F.k2, self.Np, self.beta
        out = ONE
        for i in range(1, k2 + 1):
            out = out * poch(Np - X - k + 1, k2 - i + extra) * poch(Np + b - X - i + 2, i - 1)
        return out

    def casorati_matrix(self, n):
        k = self.F.k
        cols = range(1, k + 2)
        hn = hahn(n - self.u, self.alpha, self.beta, self.Np)
        return [[hn.shift("x", j - 1) for j in cols]] + self._f_rows(cols)

    # -- basic data ---------------------------------------------------------------------

    @property
    def u(self):
        return self.F.u

    @property
    def N(self):
        return self.params.N

    def in_sigma(self, n):
        return n >= self.u and (n - self.u) not in self.F.f1

    def sigma_N(self):
        return sigma_N_of(self.F, self.N)

    def x_hahn(self, n):
        """h_n^F; the zero polynomial for n outside the index set."""
        if n in self._h:
            return self._h[n]
        if not self.in_sigma(n):
            self._h[n] = ZERO
            return ZERO
        det = det_poly(self.casorati_matrix(n))
        out = exact_div(det, self._denominator(0))
        self._h[n] = out
        return out

    def x_hahn_alternative(self, n):
        """The column-combined form: shifted-parameter Hahn polynomials at x."""
        if not self.in_sigma(n):
            return ZERO
        a, b, Np, k = self.alpha, self.beta, self.Np, self.F.k

        def lam_prod(m, j):
            out = mpq(1)
            for i in range(j - 1):
                out *= lam(mpq(m), a, b) - lam(mpq(i), a, b)
            return out

        rows = []
        m = n - self.u
        for top in [m] + list(self.F.f1):
            rows.append(
                [
                    hahn(top - j + 1, a + j - 1, b + j - 1, Np - j + 1) * lam_prod(top, j)
                    for j in range(1, k + 2)
                ]
            )
        for f in self.F.f2:
            rows.append(
                [
                    s_poly(k - j + 1, Np - k + 1)
                    * hahn(f, a + j - 1, -b - j + 1, Np + b)
                    * (poch(a + f + 1, j - 1) * poch(b - f, j - 1))
                    for j in range(1, k + 2)
                ]
            )
        den = self._denominator(0)
        scale = mpq(1)
        for i in range(k + 1):
            scale *= poch(a + 1, i)
        return exact_div(det_poly(rows), den) / scale

    def leading_coefficient(self, n):
        """Predicted leading coefficient of h_n^F from the Vandermonde/Pochhammer product."""
        a, b, F = self.alpha, self.beta, self.F
        m = n - self.u
        out = vandermonde(F.f1) * vandermonde(F.f2)
        for i in [m] + list(F.f1):
            out *= hahn_leading(i, a, b)
        for i in F.f2:
            out *= hahn_leading(i, a, -b)
        for i in [m] + list(F.f1):
            for g in F.f2:
                out *= b + i - g
        for f in F.f1:
            out *= f - m
        return out

    @cached_property
    def omega(self):
        cols = range(1, self.F.k + 1)
        return exact_div(det_poly(self._f_rows(cols)), self._denominator(1))

    def omega_leading_coefficient(self):
        a, b, F = self.alpha, self.beta, self.F
        out = vandermonde(F.f1) * vandermonde(F.f2)
        for f in F.f1:
            out *= hahn_leading(f, a, b)
        for g in F.f2:
            out *= hahn_leading(g, a, -b)
        for f in F.f1:
            for g in F.f2:
                out *= b + f - g
        return out

    @cached_property
    def lambda_numerator(self):
        """(N-x-k+1) Lambda_F, a polynomial."""
        k = self.F.k
        cols = list(range(1, k)) + [k + 1]
        det = det_poly(self._f_rows(cols))
        return exact_div(det * (self.Np - X - k + 1), self._denominator(1))

    @cached_property
    def lambda_fn(self):
        return RationalFn(self.lambda_numerator, self.Np - X - self.F.k + 1)

    # -- dual family ----------------------------------------------------------------------

    def _dual_rows(self, n, columns):
        a, b, Np = self.alpha, self.beta, self.Np
        rows = []
        for f in self.F.f1:
            z = lam(mpq(f), a, b)
            rows.append([as_poly(dual_hahn(n + j - 1, a, b, Np)(z)) for j in columns])
        for f in self.F.f2:
            z = lam(mpq(f), a, -b)
            rows.append([as_poly(dual_hahn(n + j - 1, a, -b, Np + b)(z)) for j in columns])
        return rows

    def q_dual(self, n):
        """Bordered dual Hahn determinant q_n^F (polynomial in its argument x)."""
        a, b, Np, k = self.alpha, self.beta, self.Np, self.F.k
        cols = range(1, k + 2)
        top = [dual_hahn(n + j - 1, a, b, Np) for j in cols]
        det = det_poly([top] + self._dual_rows(n, cols))
        ann = ONE
        for f in self.F.f1:
            ann = ann * (X - lam(mpq(f), a, b))
        for f in self.F.f2:
            ann = ann * (X - lam(mpq(f) - b, a, b))
        return exact_div(det, ann)

    def phi_det(self, n):
        k = self.F.k
        return _scalar(det_poly(self._dual_rows(n, range(1, k + 1))))

    def psi_det(self, n):
        k = self.F.k
        return _scalar(det_poly(self._dual_rows(n, list(range(1, k)) + [k + 1])))

    def kappa(self):
        out = ONE
        for f in self.F.f1:
            out = out * poch(-self.Np, f)
        for f in self.F.f2:
            out = out * poch(-self.Np - self.beta, f)
        return _scalar(out)

    def xi(self, u):
        k, k1, k2 = self.F.k, self.F.k1, self.F.k2
        Np, b = self.Np, self.beta
        e = (k + 1) * (2 * u + k) // 2
        out = as_poly((-1) ** e)
        out = out * poch(Np - u + 1, u) ** (k1 + 1)
        for i in range(k1):
            out = out * poch(Np - u - k1 + 1 + i, k1 - i)
        out = out * poch(Np + b - u + 1, u) ** k2
        for i in range(k2):
            out = out * poch(Np + b - u - i + 1, i)
        return _scalar(out)

    def zeta(self, v):
        a, b = self.alpha, self.beta
        m = mpq(v - self.u)
        out = as_poly(poch(-self.Np, v - self.u))
        for f in self.F.f1:
            out = out * (lam(m, a, b) - lam(mpq(f), a, b))
        for f in self.F.f2:
            out = out * (lam(m, a, b) - lam(mpq(f) - b, a, b))
        return _scalar(out)

    def duality_sides(self, u, v, xi_scale=1):
        """(kappa zeta_v q_u(lambda(v-u_F)), xi_u h_v^F(u))."""
        a, b = self.alpha, self.beta
        z = lam(mpq(v - self.u), a, b)
        lhs = as_poly(self.kappa()) * self.zeta(v) * as_poly(self.q_dual(u)(z))
        rhs = as_poly(self.xi(u)) * rat(xi_scale) * as_poly(self.x_hahn(v)(mpq(u)))
        return lhs, rhs

    def duality_check(self, u, v, xi_scale=1):
        lhs, rhs = self.duality_sides(u, v, xi_scale)
        return lhs == rhs

    def omega_phi_check(self, n):
        """xi_n Omega(n) = (-1)^{k2} kappa (-N)_{n+k1} Phi_n."""
        lhs = as_poly(self.xi(n)) * as_poly(self.omega(mpq(n)))
        rhs = as_poly(self.kappa()) * poch(-self.Np, n + self.F.k1) * self.phi_det(n) * (-1) ** self.F.k2
        return lhs == rhs

    def lambda_psi_check(self, n):
        """xi_n (N-n-k+1) Lambda(n) = (-1)^{k2+1} kappa (-N)_{n+k1} Psi_n."""
        lhs = as_poly(self.xi(n)) * as_poly(self.lambda_numerator(mpq(n)))
        rhs = (
            as_poly(self.kappa())
            * poch(-self.Np, n + self.F.k1)
            * self.psi_det(n)
            * (-1) ** (self.F.k2 + 1)
        )
        return lhs == rhs

    # -- second order difference operator --------------------------------------------

    def _op_polys(self):
        """Polynomials (c_m, c_0, c_p) with Omega(x)Omega(x+1) D = c_m S_-1 + c_0 + c_p S_1."""
        a, b, Np = self.alpha, self.beta, self.Np
        k, k1, k2 = self.F.k, self.F.k1, self.F.k2
        om = self.omega
        om1 = om.shift("x", 1)
        L = self.lambda_numerator
        c_m = X * (X - b - Np - 1 + k2) * om1 * om1
        c_p = (X + a + k + 1) * (X - Np + k1) * om * om
        base = -(X + k) * (X - b - Np - 1 + k) - (X + a + 1 + k) * (X - Np + k)
        # (x+a+k)(x-N-1+k) Lambda/Omega = -(x+a+k) L/Omega since L = (N-x-k+1) Lambda
        delta = -(X + a + k + 1) * L.shift("x", 1) * om + (X + a + k) * L * om1
        c_0 = base * om * om1 + delta
        return c_m, c_0, c_p

    def second_order_op(self):
        c_m, c_0, c_p = self._op_polys()
        den = self.omega * self.omega.shift("x", 1)
        return DiffOp({-1: RationalFn(c_m, den), 0: RationalFn(c_0, den), 1: RationalFn(c_p, den)})

    def eigenvalue(self, n):
        return lam(as_poly(n - self.u), self.alpha, self.beta)

    def eigen_residual(self, n):
        """Omega(x)Omega(x+1) (D h_n - lambda(n-u) h_n) as a polynomial."""
        c_m, c_0, c_p = self._op_polys()
        h = self.x_hahn(n)
        den = self.omega * self.omega.shift("x", 1)
        return c_m * h.shift("x", -1) + c_0 * h + c_p * h.shift("x", 1) - den * h * self.eigenvalue(n)

    # -- measures --------------------------------------------------------------------------

    def _require_concrete(self):
        if self.N is None:
            raise ParamViolation("a concrete positive integer N is required")
        return self.N

    def omega_mass(self, x):
        a, b, F = self.alpha, self.beta, self.F
        N = self._require_concrete()
        den = rat(self.omega(mpq(x))) * rat(self.omega(mpq(x + 1)))
        if den == 0:
            raise OmegaZeroOnGrid(x)
        return binom(a + F.k + x, x) * binom(b + N - F.k2 - x, N - F.k1 - x) / den

    def x_measure(self):
        """The exceptional Hahn measure on {0..N-k1} (see also ``admissible``)."""
        N = self._require_concrete()
        return DiscreteMeasure(
            tuple((mpq(x), self.omega_mass(x)) for x in range(N - self.F.k1 + 1))
        )

    def rho_mass(self, r):
        """Mass of the Christoffel-transformed dual Hahn measure at lambda(r - u)."""
        a, b = self.alpha, self.beta
        N = self._require_concrete()
        m = mpq(r - self.u)
        out = dual_hahn_mass(int(m), a, b, N)
        for f in self.F.f1:
            out *= lam(m, a, b) - lam(mpq(f), a, b)
        for f in self.F.f2:
            out *= lam(m, a, b) - lam(mpq(f) - b, a, b)
        return out

    def rho_measure(self):
        """Atoms at lambda(r-u), r in sigma_{N;F}; zero masses at r = u+f, f in F1 dropped."""
        a, b = self.alpha, self.beta
        atoms = []
        for r in range(self.u, self.u + self._require_concrete() + 1):
            mass = self.rho_mass(r)
            if mass != 0:
                atoms.append((lam(mpq(r - self.u), a, b), mass))
        return DiscreteMeasure(tuple(atoms))

    def predicted_norm(self, r):
        """(-N)^2_{r-u} rho(r) / ((a+1)_k (b+1)_{k1-k2} w_*(r-u)^2)."""
        a, b, F = self.alpha, self.beta, self.F
        N = self._require_concrete()
        m = r - self.u
        w = dual_hahn_mass(m, a, b, N)
        return (
            poch(mpq(-N), m) ** 2
            * self.rho_mass(r)
            / (poch(a + 1, F.k) * poch_signed(b + 1, F.k1 - F.k2) * w * w)
        )

    def gram_matrix(self, indices=None):
        indices = self.sigma_N() if indices is None else indices
        mu = self.x_measure()
        polys = [self.x_hahn(n) for n in indices]
        return [[mu.inner(p, q) for q in polys] for p in polys]

    def dual_gram_matrix(self):
        """sum_n q_n(lambda(s-u)) q_n(lambda(r-u)) / <q_n, q_n>_rho over n = 0..N-k1."""
        rho = self.rho_measure()
        N = self._require_concrete()
        qs = [self.q_dual(n) for n in range(N - self.F.k1 + 1)]
        norms = [rho.inner(q, q) for q in qs]
        pts = rho.points
        return [
            [sum(q(p) * q(s) / nn for q, nn in zip(qs, norms)) for s in pts] for p in pts
        ], [1 / m for m in rho.masses]

    # -- Darboux factorisation -------------------------------------------------------------

    def darboux_factor(self):
        """(A_F, B_F) removing max F2.  Returns (A, B, reduced family, constant)."""
        if not self.F.f2:
            raise ValueError("F2 is empty; no F2 element to remove")
        a, b, Np = self.alpha, self.beta, self.Np
        k, k1, k2 = self.F.k, self.F.k1, self.F.k2
        red_pair = self.F.drop(2)
        om = self.omega
        om_r = (
            XHahnFamily(self.params, red_pair, strict=False).omega
            if not red_pair.is_empty()
            else ONE
        )
        A = DiffOp(
            {
                0: RationalFn((-X + b + Np - k2 + 1) * om.shift("x", 1), om_r.shift("x", 1)),
                1: RationalFn(-(-X + Np - k1) * om, om_r.shift("x", 1)),
            }
        )
        B = DiffOp(
            {
                -1: RationalFn(-X * om_r.shift("x", 1), om),
                0: RationalFn((X + a + k) * om_r, om),
            }
        )
        f = self.F.f2[-1]
        const = (a + f + 1) * (b - f)
        return A, B, red_pair, const

    def reduced_operator(self, pair):
        """Second order operator of the family for another pair (classical Hahn if empty)."""
        if pair.is_empty():
            a, b, Np = self.alpha, self.beta, self.Np
            return DiffOp(
                {
                    -1: X * (X - b - Np - 1),
                    0: -(X * (X - b - Np - 1)) - (X + a + 1) * (X - Np),
                    1: (X + a + 1) * (X - Np),
                }
            )
        return XHahnFamily(self.params, pair, strict=False).second_order_op()

    def reduced_poly(self, pair, n):
        if pair.is_empty():
            return hahn(n, self.alpha, self.beta, self.Np)
        return XHahnFamily(self.params, pair, strict=False).x_hahn(n)

    def darboux_checks(self, ns=range(4)):
        """Operator identities and intertwining for the F2 factorisation."""
        A, B, red, c = self.darboux_factor()
        D_red = self.reduced_operator(red)
        D = self.second_order_op()
        cid = DiffOp.identity(c)
        out = {
            "reduced = BA - c": D_red == (B @ A) - cid,
            "full = AB - c": D == (A @ B) - cid,
        }
        u_red = red.u if not red.is_empty() else 0
        inter = []
        for n in ns:
            if n in self.F.f1:
                continue
            lhs = self.x_hahn(n + self.u)
            rhs = A.apply(self.reduced_poly(red, n + u_red))
            inter.append(RationalFn(lhs) == rhs)
        out["intertwining"] = all(inter)
        return out


def _scalar(p):
    p = as_poly(p)
    return p.constant_term() if p.is_constant() else p


# -- admissibility -------------------------------------------------------------------------


def hahn_H(x, alpha, beta, N, F):
    """The Hahn admissibility function at the integer x."""
    a, b = rat(alpha), rat(beta)
    out = mpq(1)
    for f in F.f1:
        out *= (x - f) * (x + f + a + b + 1)
    for f in F.f2:
        out *= (x + b - f) * (x + f + a + 1)
    den = poch(x + a + b + 1, N + 1) * poch(b + 1, x)
    if den == 0:
        raise ParamViolation(f"admissibility function has a pole at x={x}")
    return out * (2 * x + a + b + 1) * poch(a + 1, x) / den


def _sign(v):
    return (v > 0) - (v < 0)


def sign_verdict(values):
    """(sign, witness) for a list of (x, value): constant sign ignoring zeros.

    The witness is the first x whose sign disagrees with the majority sign.
    """
    signs = [(x, _sign(v)) for x, v in values if v != 0]
    if not signs:
        return 0, None
    pos = sum(1 for _, s in signs if s > 0)
    neg = len(signs) - pos
    if pos == 0 or neg == 0:
        return signs[0][1], None
    major = 1 if pos > neg else -1 if neg > pos else signs[0][1]
    witness = next(x for x, s in signs if s != major)
    return 0, witness


class Admissibility:
    def __init__(self, admissible, sign=0, witness=None, values=None, notes=None):
        self.admissible = admissible
        self.sign = sign
        self.witness = witness
        self.values = values or []
        self.notes = notes or {}

    def __bool__(self):
        return self.admissible

    def __repr__(self):
        if self.admissible:
            return f"Admissible(sign={self.sign:+d})"
        return f"NotAdmissible(witness={self.witness})"


def hahn_admissible(params, F, check_n_independence=True):
    """Constant sign of the admissibility function on x = 0..N (zeros ignored)."""
    if not isinstance(params, HahnParams):
        params = HahnParams(*params)
    N = params.N
    if N is None:
        raise ParamViolation("Hahn admissibility needs a concrete N")
    a, b = params.alpha, params.beta
    bad = [v for v in params.violations(None) if "alpha" in v or "beta" in v]
    for name, v in (("alpha", a), ("beta", b)):
        if v.denominator == 1 and -N <= v <= -1:
            bad.append(f"{name} lies in -N..-1")
    if (a + b).denominator == 1 and -N <= a + b <= -1:
        bad.append("alpha + beta lies in -N..-1")
    support = set(range(N + 1)) - set(F.f1) - {f - b for f in F.f2}
    if not support:
        bad.append("{0..N} is covered by F1 and F2 - beta")
    if bad:
        raise ParamViolation("; ".join(bad))
    values = [(x, hahn_H(x, a, b, N, F)) for x in range(N + 1)]
    sign, witness = sign_verdict(values)
    notes = {}
    h = hat(a + b + 1)
    if check_n_independence and N > h:
        others = {}
        for M in sorted({h + 1, N + 1, N + 5} - {N}):
            if M <= h:
                continue
            try:
                others[M] = bool(hahn_admissible(HahnParams(a, b, M), F, check_n_independence=False))
            except ParamViolation:
                continue
        notes["n_independent"] = all(v == (witness is None and sign != 0) for v in others.values())
        notes["checked_N"] = sorted(others)
    return Admissibility(witness is None and sign != 0, sign, witness, values, notes)


def admissibility_equivalences(fam):
    """The three equivalent characterisations of admissibility for a concrete family.

    Returns dict with booleans 'rho_definite', 'admissible', 'omega_ratio_definite'
    and the observed signs.
    """
    N = fam._require_concrete()
    a, b, F = fam.alpha, fam.beta, fam.F
    rho = fam.rho_measure()
    rho_sign = rho.sign()
    adm = hahn_admissible(fam.params, F, check_n_independence=False)
    ratios = []
    for n in range(N - F.k1 + 1):
        num = rat(fam.omega(mpq(n))) * rat(fam.omega(mpq(n + 1)))
        den = binom(a + F.k + n, n) * binom(b + N - F.k2 - n, N - F.k1 - n)
        ratios.append(num / den if den != 0 else None)
    ok = all(r is not None and r != 0 for r in ratios)
    rsign = 0
    if ok:
        if all(r > 0 for r in ratios):
            rsign = 1
        elif all(r < 0 for r in ratios):
            rsign = -1
    pref = poch(a + 1, F.k) * poch_signed(b + 1, F.k1 - F.k2)
    return {
        "rho_definite": rho_sign != 0,
        "admissible": adm.admissible,
        "omega_ratio_definite": rsign != 0,
        "rho_sign": rho_sign,
        "H_sign": adm.sign,
        "ratio_sign": rsign,
        "predicted_ratio_sign": _sign(pref) * adm.sign,
        "support_size": len(rho),
    }
