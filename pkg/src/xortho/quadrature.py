"""Gauss-Jacobi quadrature with node doubling, used for the Jacobi norm check."""

from __future__ import annotations

import numpy as np
from scipy.special import roots_jacobi

from .algebra import count_real_roots, rat
from gmpy2 import mpq


class QuadratureNonConvergent(RuntimeError):
    pass


class PreconditionFailed(ValueError):
    def __init__(self, which):
        super().__init__(f"weight hypothesis fails: {which}")
        self.which = which


def _to_float_poly(p):
    """Coefficients (ascending) of a univariate MultiPoly in x as floats."""
    return np.array([float(c) for c in p.coeffs("x")] or [0.0])


def gauss_jacobi(f, a, b, start=16, rtol=1e-10, cap=4096, atol=0.0):
    """Integral of f(x) (1-x)^a (1+x)^b over (-1, 1).

    The node count doubles until two successive estimates agree to ``rtol``
    relative, or to ``atol`` absolute (for integrals that should vanish).
    Returns (value, nodes used).
    """
    n = start
    prev = None
    while n <= cap:
        x, w = roots_jacobi(n, float(a), float(b))
        val = float(np.dot(w, f(x)))
        if prev is not None and abs(val - prev) <= max(rtol * abs(val), atol):
            return val, n
        prev = val
        n *= 2
    raise QuadratureNonConvergent(f"no agreement to {rtol} within {cap} nodes")


def integrate_against_weight(fam, p, q, rtol=1e-10, atol=0.0):
    """Integral of p q (1-x)^{a+k} (1+x)^{b+k1-k2} / Omega^2 on (-1, 1)."""
    F = fam.F
    a = fam.alpha + F.k
    b = fam.beta + F.k1 - F.k2
    cp, cq, co = _to_float_poly(p), _to_float_poly(q), _to_float_poly(fam.omega)

    def g(x):
        om = np.polynomial.polynomial.polyval(x, co)
        return (
            np.polynomial.polynomial.polyval(x, cp)
            * np.polynomial.polynomial.polyval(x, cq)
            / (om * om)
        )

    return gauss_jacobi(g, a, b, rtol=rtol, atol=atol)


def check_hypotheses(fam):
    F = fam.F
    if not fam.alpha + F.k + 1 > 0:
        raise PreconditionFailed("alpha + k + 1 > 0")
    if not fam.beta + F.k1 - F.k2 + 1 > 0:
        raise PreconditionFailed("beta + k1 - k2 + 1 > 0")
    if count_real_roots(fam.omega, mpq(-1), mpq(1)) != 0:
        raise PreconditionFailed("Omega has no zero on [-1, 1]")


def weight_and_norm(fam, n):
    """(weight description, quadrature norm, predicted norm) for P_{n+u}.

    The predicted value is 2^{a+b+1} H(n)/n! with H evaluated through
    high-precision Gamma values.
    """
    import mpmath

    from .xjacobi import jacobi_H_value

    check_hypotheses(fam)
    F = fam.F
    p = fam.x_jacobi(n + fam.u)
    val, nodes = integrate_against_weight(fam, p, p)
    with mpmath.workdps(50):
        a, b = rat(fam.alpha), rat(fam.beta)
        ab = mpmath.mpf(int((a + b).numerator)) / int((a + b).denominator)
        pred = mpmath.power(2, ab + 1) * jacobi_H_value(n, a, b, F) / mpmath.factorial(n)
    desc = {
        "exponent_minus": str(fam.alpha + F.k),
        "exponent_plus": str(fam.beta + F.k1 - F.k2),
        "omega": str(fam.omega),
        "nodes": nodes,
    }
    return desc, val, float(pred)


def cross_orthogonality(fam, ns, rtol=1e-10):
    """max |<P_i, P_j>| / sqrt(<P_i,P_i><P_j,P_j>) over i < j in ``ns`` (offsets from u)."""
    polys = {n: fam.x_jacobi(n + fam.u) for n in ns}
    norms = {n: integrate_against_weight(fam, p, p, rtol)[0] for n, p in polys.items()}
    worst = 0.0
    for i in ns:
        for j in ns:
            if i < j:
                scale = abs(norms[i] * norms[j]) ** 0.5
                v, _ = integrate_against_weight(fam, polys[i], polys[j], rtol, atol=1e-13 * scale)
                worst = max(worst, abs(v) / scale)
    return worst
