"""Independent reference computations built on sympy, used only by tests."""

import sympy
from gmpy2 import mpq

from xortho.algebra import MultiPoly

x, N, n = sympy.symbols("x N n")
_SYMS = {"x": x, "N": N, "n": n}


def to_sympy(p):
    expr = sympy.Integer(0)
    for (ex, eN, en), c in p.terms.items():
        expr += sympy.Rational(int(c.numerator), int(c.denominator)) * x**ex * N**eN * n**en
    return expr


def from_sympy(expr):
    poly = sympy.Poly(sympy.expand(expr), x, N, n)
    out = MultiPoly.const(0)
    for (ex, eN, en), c in poly.terms():
        c = sympy.Rational(c)
        out = out + MultiPoly.var("x", ex) * MultiPoly.var("N", eN) * MultiPoly.var("n", en) * mpq(int(c.p), int(c.q))
    return out


def srat(q):
    q = mpq(q)
    return sympy.Rational(int(q.numerator), int(q.denominator))


def hahn_3f2(deg, a, b, Nv, xv):
    """(-N)_n 3F2(-n, n+a+b+1, -x; a+1, -N; 1) summed term by term in sympy."""
    a, b = srat(a), srat(b)
    total = sympy.Integer(0)
    for j in range(deg + 1):
        total += (
            sympy.rf(-deg, j) * sympy.rf(deg + a + b + 1, j) * sympy.rf(-xv, j)
            / (sympy.rf(a + 1, j) * sympy.factorial(j))
            * sympy.rf(-Nv + j, deg - j)
        )
    return sympy.expand(total)


def jacobi_sympy(deg, a, b):
    return sympy.expand(sympy.jacobi(deg, srat(a), srat(b), x))
