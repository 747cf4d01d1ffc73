"""Classical dual Hahn, Hahn and Jacobi polynomials, their measures and identities.

Normalisations:

    R_n(z)  = sum_j (-1)^j (-n)_j (-N+j)_{n-j} / ((a+1)_j j!) prod_{i<j} (z - i(a+b+1+i))
    h_n(x)  = (-N)_n 3F2(-n, -x, n+a+b+1; a+1, -N; 1)
    P_n(x)  = 2^-n sum_j C(n+a, j) C(n+b, n-j) (x-1)^(n-j) (x+1)^j

``N`` may be a positive integer or any polynomial in the indeterminate N
(the Hahn parameter of h^{a,-b,b+N} is N + b, for instance).  The dual Hahn
polynomial is returned as a polynomial in x standing for its argument z.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import factorial

from gmpy2 import mpq

from .algebra import (
    NVAR,
    ONE,
    X,
    ZERO,
    AlgebraError,
    MultiPoly,
    as_poly,
    binom,
    det_poly,
    exact_div,
    poch,
    rat,
)


class ParamError(ValueError):
    pass


class ParamPole(ParamError):
    pass


class ParamViolation(ParamError):
    pass


def is_negative_integer(v):
    v = rat(v)
    return v.denominator == 1 and v < 0


def _neg_int_between(v, lo, hi):
    """True when v is an integer with lo <= v <= hi."""
    v = rat(v)
    return v.denominator == 1 and lo <= v <= hi


@dataclass(frozen=True)
class HahnParams:
    """alpha, beta exact rationals; N a positive int or None for the symbolic N."""

    alpha: object
    beta: object
    N: object = None

    def __post_init__(self):
        object.__setattr__(self, "alpha", rat(self.alpha))
        object.__setattr__(self, "beta", rat(self.beta))
        if self.N is not None:
            if int(self.N) != self.N or int(self.N) < 1:
                raise ParamViolation(f"N must be a positive integer, got {self.N}")
            object.__setattr__(self, "N", int(self.N))

    @property
    def symbolic(self):
        return self.N is None

    @property
    def npoly(self):
        return NVAR if self.N is None else MultiPoly.const(self.N)

    def violations(self, F=None, finite=False):
        """Names of violated parameter constraints (empty list when valid).

        ``finite`` adds the stronger constraints needed for the measure on
        {0..N}: alpha, beta avoid -1..-N, alpha+beta avoids -1..-2N-1,
        alpha-beta avoids -1..-N and beta avoids 0..max F2.
        """
        a, b = self.alpha, self.beta
        out = []
        for name, v in (("alpha", a), ("beta", b), ("alpha + beta", a + b)):
            if is_negative_integer(v):
                out.append(f"{name} is a negative integer")
        if F is not None and F.f2:
            m = F.f2[-1]
            if is_negative_integer(a - b):
                out.append("alpha - beta is a negative integer")
            if is_negative_integer(b - m - 1):
                out.append("beta - max(F2) - 1 is a negative integer")
        if finite:
            if self.N is None:
                out.append("a concrete positive integer N is required")
                return out
            N = self.N
            for name, v in (("alpha", a), ("beta", b)):
                if _neg_int_between(v, -N, -1):
                    out.append(f"{name} lies in -N..-1")
            if _neg_int_between(a + b, -2 * N - 1, -1):
                out.append("alpha + beta lies in -2N-1..-1")
            if F is not None and F.f2:
                if _neg_int_between(a - b, -N, -1):
                    out.append("alpha - beta lies in -N..-1")
                if _neg_int_between(b, 0, F.f2[-1]):
                    out.append("beta lies in 0..max(F2)")
        return out

    def validate(self, F=None, finite=False):
        v = self.violations(F, finite)
        if v:
            raise ParamViolation("; ".join(v))
        return self


@dataclass(frozen=True)
class JacobiParams:
    alpha: object
    beta: object

    def __post_init__(self):
        object.__setattr__(self, "alpha", rat(self.alpha))
        object.__setattr__(self, "beta", rat(self.beta))

    def violations(self, F=None):
        a, b = self.alpha, self.beta
        out = []
        for name, v in (("alpha", a), ("beta", b), ("alpha + beta", a + b)):
            if is_negative_integer(v):
                out.append(f"{name} is a negative integer")
        if F is not None and F.f2:
            if is_negative_integer(a - b):
                out.append("alpha - beta is a negative integer")
            if is_negative_integer(b - F.f2[-1] - 1):
                out.append("beta - max(F2) - 1 is a negative integer")
        return out

    def validate(self, F=None):
        v = self.violations(F)
        if v:
            raise ParamViolation("; ".join(v))
        return self


@dataclass(frozen=True)
class DiscreteMeasure:
    """Finitely many atoms (point, mass)."""

    atoms: tuple

    def __post_init__(self):
        pts = [p for p, _ in self.atoms]
        if len(set(pts)) != len(pts):
            raise ValueError("measure points must be distinct")

    @property
    def points(self):
        return [p for p, _ in self.atoms]

    @property
    def masses(self):
        return [m for _, m in self.atoms]

    def __len__(self):
        return len(self.atoms)

    def integrate(self, f):
        """Sum of mass * f(point); ``f`` is a polynomial or a callable."""
        total = mpq(0)
        for p, m in self.atoms:
            total += m * (f(p) if callable(f) else f)
        return total

    def inner(self, p, q):
        return self.integrate(lambda t: p(t) * q(t))

    def sign(self):
        """+1 / -1 when every mass has that sign, else 0."""
        if all(m > 0 for m in self.masses):
            return 1
        if all(m < 0 for m in self.masses):
            return -1
        return 0


def lam(x, alpha, beta):
    """The eigenvalue sequence x(x + alpha + beta + 1) (x may be a polynomial)."""
    return x * (x + rat(alpha) + rat(beta) + 1)


def _npoly(N):
    return as_poly(N)


@lru_cache(maxsize=None)
def _hahn_cached(n, alpha, beta, npar):
    total = ZERO
    s = n + alpha + beta + 1
    minus_x = -X
    for j in range(n + 1):
        den = poch(alpha + 1, j)
        if den == 0:
            raise ParamPole(f"(alpha+1)_{j} vanishes for alpha={alpha}")
        c = poch(mpq(-n), j) * poch(s, j) / (den * factorial(j))
        if c == 0:
            continue
        total = total + poch(minus_x, j) * poch(-npar + j, n - j) * c
    return total


def hahn(n, alpha, beta, N):
    """Hahn polynomial h_n^{alpha,beta,N}(x); zero for n < 0."""
    if n < 0:
        return ZERO
    return _hahn_cached(n, rat(alpha), rat(beta), _npoly(N))


@lru_cache(maxsize=None)
def _dual_hahn_cached(n, alpha, beta, npar):
    total = ZERO
    prod = ONE
    for j in range(n + 1):
        if j > 0:
            i = j - 1
            prod = prod * (X - i * (alpha + beta + 1 + i))
        den = poch(alpha + 1, j)
        if den == 0:
            raise ParamPole(f"(alpha+1)_{j} vanishes for alpha={alpha}")
        c = (-1) ** j * poch(mpq(-n), j) / (den * factorial(j))
        total = total + prod * poch(-npar + j, n - j) * c
    return total


def dual_hahn(n, alpha, beta, N):
    """Dual Hahn polynomial R_n^{alpha,beta,N} as a polynomial in its argument."""
    if n < 0:
        return ZERO
    return _dual_hahn_cached(n, rat(alpha), rat(beta), _npoly(N))


def dual_hahn_at(n, alpha, beta, N, point):
    """R_n^{alpha,beta,N}(lambda^{alpha,beta}(point))."""
    return dual_hahn(n, alpha, beta, N)(lam(point, alpha, beta))


@lru_cache(maxsize=None)
def _jacobi_cached(n, a, b):
    total = ZERO
    xm, xp = X - 1, X + 1
    for j in range(n + 1):
        c = binom(n + a, j) * binom(n + b, n - j)
        if c:
            total = total + xm ** (n - j) * xp**j * c
    return total / mpq(2) ** n


def jacobi(n, alpha, beta):
    """Jacobi polynomial P_n^{alpha,beta}(x); zero for n < 0."""
    if n < 0:
        return ZERO
    return _jacobi_cached(n, rat(alpha), rat(beta))


def hahn_leading(n, alpha, beta):
    """Leading coefficient (a+b+n+1)_n / (a+1)_n of h_n^{a,b,N}."""
    return poch(rat(alpha) + rat(beta) + n + 1, n) / poch(rat(alpha) + 1, n)


def dual_hahn_recurrence(n, alpha, beta, N):
    """(A_n, B_n, C_n) with z R_n = A_n R_{n+1} + B_n R_n + C_n R_{n-1}."""
    a, b = rat(alpha), rat(beta)
    Np = _npoly(N)
    A = as_poly(n + a + 1)
    B = -(Np * -1 + n) * (n + a + 1) - (Np * -1 + n - b - 1) * n
    C = (Np * -1 + n - b - 1) * (Np * -1 + n - 1) * n
    out = (A, B, C)
    return tuple(v.constant_term() if v.is_constant() else v for v in out)


def check_dual_hahn_recurrence(n, alpha, beta, N):
    A, B, C = dual_hahn_recurrence(n, alpha, beta, N)
    lhs = X * dual_hahn(n, alpha, beta, N)
    rhs = (
        dual_hahn(n + 1, alpha, beta, N) * A
        + dual_hahn(n, alpha, beta, N) * B
        + dual_hahn(n - 1, alpha, beta, N) * C
    )
    return lhs == rhs


def hahn_mass(x, alpha, beta, N):
    """binom(x+a, x) binom(b+N-x, N-x): the Hahn weight at the integer x."""
    return binom(x + rat(alpha), x) * binom(rat(beta) + N - x, N - x)


def dual_hahn_mass(x, alpha, beta, N):
    """Mass of the dual Hahn weight at lambda(x), x = 0..N."""
    a, b = rat(alpha), rat(beta)
    num = (2 * x + a + b + 1) * poch(a + 1, x) * poch(mpq(-N), x) * factorial(N)
    den = (-1) ** x * poch(x + a + b + 1, N + 1) * poch(b + 1, x) * factorial(x)
    if den == 0:
        raise ParamPole(f"dual Hahn mass has a pole at x={x}")
    return num / den


def _require_concrete(N):
    if isinstance(N, MultiPoly) or N is None or int(N) != N or int(N) < 1:
        raise ParamViolation("a concrete positive integer N is required")
    return int(N)


def hahn_weight(alpha, beta, N):
    N = _require_concrete(N)
    return DiscreteMeasure(tuple((mpq(x), hahn_mass(x, alpha, beta, N)) for x in range(N + 1)))


def dual_hahn_weight(alpha, beta, N):
    N = _require_concrete(N)
    return DiscreteMeasure(
        tuple((lam(mpq(x), alpha, beta), dual_hahn_mass(x, alpha, beta, N)) for x in range(N + 1))
    )


def hahn_norm(n, alpha, beta, N):
    """<h_n, h_n> = (-N)_n^2 / w_*(n); zero for n > N."""
    N = _require_concrete(N)
    if n > N:
        return mpq(0)
    return poch(mpq(-N), n) ** 2 / dual_hahn_mass(n, alpha, beta, N)


def dual_hahn_norm(n, alpha, beta, N):
    N = _require_concrete(N)
    if n > N:
        return mpq(0)
    return poch(mpq(-N), n) ** 2 / (binom(rat(alpha) + n, n) * binom(rat(beta) + N - n, N - n))


# -- identities ------------------------------------------------------------------


def s_poly(j, u, x=X):
    """s_j^u(x) = (u - x)_j."""
    return poch(as_poly(u) - x, j)


def check_hahn_difference(n, alpha, beta, N, perturb=0):
    """h_n(x+1) - h_n(x) = lambda(n)/(a+1) h_{n-1}^{a+1,b+1,N-1}(x)."""
    a, b = rat(alpha), rat(beta)
    Np = _npoly(N)
    h = hahn(n, a, b, Np)
    lhs = h.shift("x", 1) - h
    rhs = hahn(n - 1, a + 1, b + 1, Np - 1) * (lam(mpq(n), a, b) / (a + 1)) + perturb
    return lhs == rhs


def check_hahn_s_weighted(n, alpha, beta, N, k, j):
    """The s-weighted column identity relating h^{a,-b,b+N} at x+j-1 and x+j-2."""
    a, b = rat(alpha), rat(beta)
    Np = _npoly(N)
    h = hahn(n, a, -b, Np + b)
    lhs = (
        s_poly(k + 1 - j, Np - k + 1) * s_poly(j - 1, Np + b - j + 2) * h.shift("x", j - 1)
        - s_poly(k + 2 - j, Np - k + 1) * s_poly(j - 2, Np + b - j + 3) * h.shift("x", j - 2)
    )
    rhs = (
        s_poly(k + 1 - j, Np - k + 1)
        * s_poly(j - 2, Np + b - j + 3)
        * hahn(n, a + 1, -b - 1, Np + b).shift("x", j - 2)
        * ((a + n + 1) * (b - n) / (a + 1))
    )
    return lhs == rhs


def check_dual_hahn_reflection(n, alpha, beta, N):
    """R_n^{a,b,N}(lambda^{a,b}(x - b)) = R_n^{a,-b,b+N}(lambda^{a,-b}(x)) as polynomials in x."""
    a, b = rat(alpha), rat(beta)
    Np = _npoly(N)
    lhs = dual_hahn(n, a, b, Np).subs("x", lam(X - b, a, b))
    rhs = dual_hahn(n, a, -b, Np + b).subs("x", lam(X, a, -b))
    return lhs == rhs


def check_duality(n, m, alpha, beta, N):
    """(-N)_m h_n(m) = (-N)_n R_m(lambda(n))."""
    a, b = rat(alpha), rat(beta)
    Np = _npoly(N)
    lhs = poch(-Np, m) * hahn(n, a, b, Np)(mpq(m))
    rhs = poch(-Np, n) * dual_hahn_at(m, a, b, Np, mpq(n))
    return as_poly(lhs) == as_poly(rhs)


def check_jacobi_derivative(n, alpha, beta):
    """(P_n^{a,b})' = (n+a+b+1)/2 P_{n-1}^{a+1,b+1}."""
    a, b = rat(alpha), rat(beta)
    return jacobi(n, a, b).diff() == jacobi(n - 1, a + 1, b + 1) * ((n + a + b + 1) / 2)


def check_jacobi_weighted_derivative(n, alpha, beta):
    """((1+x) P_n^{a,-b})' = (b+1) P_n^{a,-b} - (b-n) P_n^{a+1,-b-1}."""
    a, b = rat(alpha), rat(beta)
    lhs = ((X + 1) * jacobi(n, a, -b)).diff()
    rhs = jacobi(n, a, -b) * (b + 1) - jacobi(n, a + 1, -b - 1) * (b - n)
    return lhs == rhs


def hahn_jacobi_limit(n, alpha, beta):
    """Exact form of h_n((1-x)N/2)/(-N)_n -> n! P_n / (a+1)_n.

    Returns (top N-coefficient of h_n((1-x)N/2) times (-1)^n, expected
    n! P_n/(a+1)_n, N-degree).  (-N)_n has leading term (-1)^n N^n.
    """
    a, b = rat(alpha), rat(beta)
    h = hahn(n, a, b, NVAR).subs("x", (1 - X) * NVAR / 2)
    deg = h.degree("N")
    top = h.coeff("N", n) * (-1) ** n
    expected = jacobi(n, a, b) * (mpq(factorial(n)) / poch(a + 1, n))
    return top, expected, deg


# -- Christoffel transform ---------------------------------------------------------


class DegeneratePhi(AlgebraError):
    def __init__(self, n):
        super().__init__(f"Phi_{n} vanishes")
        self.n = n


def christoffel(ortho, F, count=None):
    """Orthogonal polynomials for prod_{f in F}(x - f) * mu from those of mu.

    ``ortho`` lists p_0, p_1, ... (at least count + |F| of them).  Returns
    q_0..q_{count-1} built from the bordered (k+1)x(k+1) determinant divided
    by the annihilator polynomial of F.
    """
    F = [rat(f) for f in F]
    k = len(F)
    count = len(ortho) - k if count is None else count
    if k == 0:
        return list(ortho[:count])
    ann = ONE
    for f in F:
        ann = ann * (X - f)
    out = []
    for n in range(count):
        rows = [[ortho[n + j] for j in range(k + 1)]]
        for f in F:
            rows.append([MultiPoly.const(ortho[n + j](f)) for j in range(k + 1)])
        out.append(exact_div(det_poly(rows), ann))
    return out


def christoffel_phi(ortho, F, n):
    """Phi_n = det(p_{n+j-1}(f_i))."""
    F = [rat(f) for f in F]
    k = len(F)
    return det_poly([[MultiPoly.const(ortho[n + j](f)) for j in range(k)] for f in F]).constant_term()


def christoffel_norm(ortho, F, n, norm_n, lead):
    """Predicted <q_n, q_n> under the transformed measure:

    (-1)^k lead(n+k)/lead(n) * Phi_n * Phi_{n+1} * <p_n, p_n>.
    ``lead`` maps an index to the leading coefficient of p_index.
    """
    k = len(F)
    return (
        (-1) ** k
        * lead(n + k)
        / lead(n)
        * christoffel_phi(ortho, F, n)
        * christoffel_phi(ortho, F, n + 1)
        * norm_n
    )
