"""Exact rational scalars, multivariate polynomials and rational functions.

Everything in the package computes over the rationals.  Scalars are
``gmpy2.mpq``; polynomials live in the fixed ring Q[x, N, n] with a
graded-lex term order x > N > n.
"""

from __future__ import annotations

import json
from fractions import Fraction
from math import factorial

from gmpy2 import mpq

VARS = ("x", "N", "n")
_VAR_INDEX = {v: i for i, v in enumerate(VARS)}
_ZERO_EXP = (0, 0, 0)


class AlgebraError(Exception):
    pass


class NotDivisible(AlgebraError):
    """Raised when an exact polynomial division leaves a remainder."""

    def __init__(self, remainder):
        super().__init__(f"division is not exact; remainder starts with {remainder.leading_term()}")
        self.remainder = remainder


class Singular(AlgebraError):
    pass


class Inconsistent(AlgebraError):
    def __init__(self, row):
        super().__init__(f"linear system is inconsistent at row {row}")
        self.row = row


def rat(value) -> mpq:
    """Coerce ints, Fractions, mpq and "p/q" strings to an exact rational.

    Floats and decimal strings are refused: they would silently lose
    precision.
    """
    if isinstance(value, bool):
        raise TypeError("bool is not a rational")
    if isinstance(value, (int, Fraction)) or type(value) is type(mpq()):
        return mpq(value)
    if isinstance(value, str):
        s = value.strip()
        if "." in s or "e" in s.lower():
            raise ValueError(f"decimal literal {value!r} rejected; write it as p/q")
        if "/" in s:
            p, q = s.split("/")
            if int(q) == 0:
                raise ZeroDivisionError(value)
            return mpq(int(p), int(q))
        return mpq(int(s))
    if isinstance(value, MultiPoly) and value.is_constant():
        return value.constant_term()
    raise TypeError(f"cannot convert {value!r} to an exact rational")


def _key(e):
    return (e[0] + e[1] + e[2], e[0], e[1], e[2])


class MultiPoly:
    """Polynomial in Q[x, N, n] stored as {exponent triple: nonzero mpq}."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms=None):
        self.terms = {} if terms is None else {e: c for e, c in terms.items() if c != 0}
        self._hash = None

    @classmethod
    def _raw(cls, terms):
        p = cls.__new__(cls)
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def const(cls, c):
        c = rat(c)
        return cls._raw({_ZERO_EXP: c} if c != 0 else {})

    @classmethod
    def var(cls, name, power=1):
        e = [0, 0, 0]
        e[_VAR_INDEX[name]] = power
        return cls._raw({tuple(e): mpq(1)})

    @classmethod
    def from_coeffs(cls, coeffs, name="x"):
        """Univariate polynomial from ascending coefficients."""
        i = _VAR_INDEX[name]
        terms = {}
        for d, c in enumerate(coeffs):
            c = rat(c)
            if c != 0:
                e = [0, 0, 0]
                e[i] = d
                terms[tuple(e)] = c
        return cls._raw(terms)

    # -- predicates and accessors -------------------------------------------------

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return not self.terms or (len(self.terms) == 1 and _ZERO_EXP in self.terms)

    def constant_term(self):
        return self.terms.get(_ZERO_EXP, mpq(0))

    def variables(self):
        used = set()
        for e in self.terms:
            for i in range(3):
                if e[i]:
                    used.add(VARS[i])
        return [v for v in VARS if v in used]

    def degree(self, name=None):
        """Degree in one indeterminate, or total degree when ``name`` is None.

        The zero polynomial has degree -1.
        """
        if not self.terms:
            return -1
        if name is None:
            return max(sum(e) for e in self.terms)
        i = _VAR_INDEX[name]
        return max(e[i] for e in self.terms)

    def leading_term(self):
        if not self.terms:
            return (_ZERO_EXP, mpq(0))
        e = max(self.terms, key=_key)
        return (e, self.terms[e])

    def leading_coeff(self, name="x"):
        """Coefficient of the top power of ``name`` (a polynomial in the others)."""
        return self.coeff(name, self.degree(name))

    def coeff(self, name, power):
        i = _VAR_INDEX[name]
        out = {}
        for e, c in self.terms.items():
            if e[i] == power:
                f = list(e)
                f[i] = 0
                out[tuple(f)] = c
        return MultiPoly._raw(out)

    def coeffs(self, name="x"):
        """Ascending coefficient list of a polynomial in the single variable ``name``."""
        i = _VAR_INDEX[name]
        d = self.degree(name)
        out = [mpq(0)] * (d + 1)
        for e, c in self.terms.items():
            if any(e[j] for j in range(3) if j != i):
                raise ValueError(f"polynomial is not univariate in {name}: {self}")
            out[e[i]] = c
        return out

    # -- arithmetic -------------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, MultiPoly):
            return other
        return MultiPoly.const(other)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e)
            if v is None:
                out[e] = c
            else:
                v = v + c
                if v == 0:
                    del out[e]
                else:
                    out[e] = v
        return MultiPoly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            c = rat(other)
            if c == 0:
                return MultiPoly._raw({})
            return MultiPoly._raw({e: v * c for e, v in self.terms.items()})
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = (e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2])
                v = out.get(e)
                out[e] = c1 * c2 if v is None else v + c1 * c2
        return MultiPoly._raw({e: c for e, c in out.items() if c != 0})

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            raise ValueError("negative power")
        result = ONE
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __truediv__(self, other):
        if isinstance(other, MultiPoly):
            if other.is_constant() and not other.is_zero():
                other = other.constant_term()
            else:
                return exact_div(self, other)
        c = rat(other)
        return MultiPoly._raw({e: v / c for e, v in self.terms.items()})

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.terms == other.terms
        try:
            return self.terms == MultiPoly.const(other).terms
        except TypeError:
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    # -- calculus and substitution -----------------------------------------------

    def diff(self, name="x", times=1):
        i = _VAR_INDEX[name]
        p = self
        for _ in range(times):
            out = {}
            for e, c in p.terms.items():
                if e[i]:
                    f = list(e)
                    f[i] -= 1
                    out[tuple(f)] = c * e[i]
            p = MultiPoly._raw(out)
        return p

    def subs(self, name, value):
        """Substitute a polynomial (or scalar) for one indeterminate."""
        i = _VAR_INDEX[name]
        value = self._coerce(value)
        groups = {}
        for e, c in self.terms.items():
            f = list(e)
            f[i] = 0
            groups.setdefault(e[i], {})[tuple(f)] = c
        powers = {0: ONE}
        result = ZERO
        for d in sorted(groups):
            while max(powers) < d:
                m = max(powers)
                powers[m + 1] = powers[m] * value
            result = result + MultiPoly._raw(groups[d]) * powers[d]
        return result

    def shift(self, name="x", by=1):
        """p(name + by)."""
        return self.subs(name, MultiPoly.var(name) + by)

    def __call__(self, value=None, **values):
        """Evaluate.  ``p(3)`` substitutes x; keywords substitute named variables.

        Returns an mpq when the result is constant, else a MultiPoly.
        """
        p = self
        if value is not None:
            values = dict(values, x=value)
        for name, v in values.items():
            p = p.subs(name, v)
        return p.constant_term() if p.is_constant() else p

    # -- presentation ---------------------------------------------------------------

    def __repr__(self):
        return f"MultiPoly({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, key=_key, reverse=True):
            c = self.terms[e]
            mono = "*".join(
                VARS[i] if e[i] == 1 else f"{VARS[i]}^{e[i]}" for i in range(3) if e[i]
            )
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if mono and a == 1:
                body = mono
            elif mono:
                body = f"{a}*{mono}"
            else:
                body = str(a)
            parts.append((sign, body))
        first_sign, first = parts[0]
        s = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s

    def to_json(self):
        names = self.variables() or ["x"]
        idx = [_VAR_INDEX[v] for v in names]
        terms = []
        for e in sorted(self.terms, key=_key, reverse=True):
            c = self.terms[e]
            terms.append(
                {
                    "exp": [e[i] for i in idx],
                    "num": str(c.numerator),
                    "den": str(c.denominator),
                }
            )
        return {"vars": names, "terms": terms}

    @classmethod
    def from_json(cls, obj):
        if isinstance(obj, str):
            obj = json.loads(obj)
        idx = [_VAR_INDEX[v] for v in obj["vars"]]
        terms = {}
        for t in obj["terms"]:
            e = [0, 0, 0]
            for i, d in zip(idx, t["exp"]):
                e[i] = int(d)
            c = mpq(int(t["num"]), int(t["den"]))
            if c != 0:
                terms[tuple(e)] = c
        return cls._raw(terms)


ZERO = MultiPoly._raw({})
ONE = MultiPoly._raw({_ZERO_EXP: mpq(1)})
X = MultiPoly.var("x")
NVAR = MultiPoly.var("N")
NIDX = MultiPoly.var("n")


def as_poly(value):
    return value if isinstance(value, MultiPoly) else MultiPoly.const(value)


def poch(base, j):
    """Rising factorial (base)_j = base (base+1) ... (base+j-1); (base)_0 = 1."""
    if j < 0:
        raise ValueError("Pochhammer length must be nonnegative")
    if isinstance(base, MultiPoly):
        out = ONE
        for i in range(j):
            out = out * (base + i)
        return out
    base = rat(base)
    out = mpq(1)
    for i in range(j):
        out *= base + i
    return out


def binom(a, j):
    """Generalised binomial coefficient C(a, j) for rational a and integer j >= 0."""
    if j < 0:
        return mpq(0)
    a = rat(a)
    out = mpq(1)
    for i in range(j):
        out *= a - i
    return out / factorial(j)


def exact_div(p, q):
    """Return p/q, raising NotDivisible when q does not divide p."""
    p = as_poly(p)
    q = as_poly(q)
    if q.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if q.is_constant():
        return p / q.constant_term()
    qe, qc = q.leading_term()
    rem = dict(p.terms)
    quot = {}
    q_items = list(q.terms.items())
    while rem:
        e = max(rem, key=_key)
        c = rem[e]
        d = (e[0] - qe[0], e[1] - qe[1], e[2] - qe[2])
        if d[0] < 0 or d[1] < 0 or d[2] < 0:
            raise NotDivisible(MultiPoly._raw(rem))
        t = c / qc
        quot[d] = t
        for f, v in q_items:
            g = (f[0] + d[0], f[1] + d[1], f[2] + d[2])
            w = rem.get(g, 0) - v * t
            if w == 0:
                rem.pop(g, None)
            else:
                rem[g] = w
    return MultiPoly._raw(quot)


def divmod_univariate(p, q, name="x"):
    """Euclidean division of univariate polynomials over Q."""
    a = p.coeffs(name) if not p.is_zero() else []
    b = q.coeffs(name)
    if not b:
        raise ZeroDivisionError
    quot = [mpq(0)] * max(len(a) - len(b) + 1, 0)
    a = list(a)
    lb = b[-1]
    while len(a) >= len(b) and a:
        c = a[-1] / lb
        s = len(a) - len(b)
        quot[s] = c
        for i, v in enumerate(b):
            a[s + i] -= c * v
        a.pop()
        while a and a[-1] == 0:
            a.pop()
    return MultiPoly.from_coeffs(quot, name), MultiPoly.from_coeffs(a, name)


def _univariate_var(*polys):
    names = set()
    for p in polys:
        names.update(p.variables())
    if len(names) <= 1:
        return names.pop() if names else "x"
    return None


def poly_gcd(p, q):
    """Monic gcd.  Univariate inputs use Euclid over Q; others go through sympy."""
    if p.is_zero():
        return monic(q) if not q.is_zero() else ZERO
    if q.is_zero():
        return monic(p)
    name = _univariate_var(p, q)
    if name is not None:
        a, b = p, q
        while not b.is_zero():
            _, r = divmod_univariate(a, b, name)
            a, b = b, r
        return monic(a)
    import sympy

    syms = sympy.symbols(VARS)
    pa = sympy.Poly.from_dict({e: sympy.Rational(int(c.numerator), int(c.denominator)) for e, c in p.terms.items()}, *syms)
    qa = sympy.Poly.from_dict({e: sympy.Rational(int(c.numerator), int(c.denominator)) for e, c in q.terms.items()}, *syms)
    g = sympy.gcd(pa, qa)
    terms = {}
    for e, c in g.as_dict().items():
        c = sympy.Rational(c)
        terms[tuple(int(v) for v in e)] = mpq(int(c.p), int(c.q))
    return monic(MultiPoly._raw(terms))


def monic(p):
    if p.is_zero():
        return p
    return p / p.leading_term()[1]


class RationalFn:
    """Quotient num/den of polynomials, reduced and with a monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, reduce=True):
        num = as_poly(num)
        den = ONE if den is None else as_poly(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            num, den = ZERO, ONE
        elif reduce and not den.is_constant():
            g = poly_gcd(num, den)
            if not g.is_constant():
                num = exact_div(num, g)
                den = exact_div(den, g)
        lc = den.leading_term()[1]
        self.num = num / lc
        self.den = den / lc

    def _coerce(self, other):
        return other if isinstance(other, RationalFn) else RationalFn(as_poly(other))

    def __add__(self, other):
        other = self._coerce(other)
        if self.den == other.den:
            return RationalFn(self.num + other.num, self.den)
        return RationalFn(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFn(-self.num, self.den, reduce=False)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        return RationalFn(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        return RationalFn(self.num * other.den, self.den * other.num)

    def __eq__(self, other):
        other = self._coerce(other)
        return self.num * other.den == other.num * self.den

    def __hash__(self):
        return hash((self.num, self.den))

    def is_zero(self):
        return self.num.is_zero()

    def is_polynomial(self):
        return self.den.is_constant()

    def as_poly(self):
        if not self.den.is_constant():
            raise NotDivisible(self.num)
        return self.num / self.den.constant_term()

    def shift(self, name="x", by=1):
        return RationalFn(self.num.shift(name, by), self.den.shift(name, by), reduce=False)

    def diff(self, name="x"):
        return RationalFn(
            self.num.diff(name) * self.den - self.num * self.den.diff(name), self.den * self.den
        )

    def __call__(self, value=None, **values):
        n = self.num(value, **values)
        d = self.den(value, **values)
        if isinstance(n, MultiPoly) or isinstance(d, MultiPoly):
            return RationalFn(as_poly(n), as_poly(d))
        if d == 0:
            raise ZeroDivisionError("rational function evaluated at a pole")
        return n / d

    def __repr__(self):
        return f"RationalFn(({self.num}) / ({self.den}))"


def det_cofactor(m):
    """Determinant by Laplace expansion along the first row.  Test oracle only."""
    n = len(m)
    if n == 0:
        return ONE
    if n == 1:
        return as_poly(m[0][0])
    total = ZERO
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        term = as_poly(m[0][j]) * det_cofactor(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def det_poly(m):
    """Exact determinant of a square polynomial matrix by Bareiss elimination."""
    n = len(m)
    if n == 0:
        return ONE
    if any(len(row) != n for row in m):
        raise ValueError("matrix is not square")
    a = [[as_poly(v) for v in row] for row in m]
    sign = 1
    prev = ONE
    for k in range(n - 1):
        if a[k][k].is_zero():
            for i in range(k + 1, n):
                if not a[i][k].is_zero():
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return ZERO
        piv = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                v = piv * a[i][j] - a[i][k] * a[k][j]
                a[i][j] = exact_div(v, prev) if not prev.is_constant() else v / prev.constant_term()
            a[i][k] = ZERO
        prev = piv
    d = a[n - 1][n - 1]
    return d if sign == 1 else -d


def det_rat(m):
    """Exact determinant of a square rational matrix by Gaussian elimination."""
    n = len(m)
    a = [[rat(v) for v in row] for row in m]
    det = mpq(1)
    for k in range(n):
        p = next((i for i in range(k, n) if a[i][k] != 0), None)
        if p is None:
            return mpq(0)
        if p != k:
            a[k], a[p] = a[p], a[k]
            det = -det
        det *= a[k][k]
        inv = 1 / a[k][k]
        for i in range(k + 1, n):
            f = a[i][k] * inv
            if f:
                for j in range(k, n):
                    a[i][j] -= f * a[k][j]
    return det


def _row_reduce(a, ncols):
    """In-place reduced row echelon form over Q; returns pivot columns."""
    rows = len(a)
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [v * inv for v in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [u - f * v for u, v in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return pivots


def solve_linear(A, b):
    """Exact solution of A x = b for square or overdetermined consistent systems.

    Raises Inconsistent(row) when the equations cannot all hold, with ``row``
    the first equation (in input order) that contradicts the earlier ones,
    and Singular when the solution is not unique.
    """
    ncols = len(A[0]) if A else 0
    aug = [[rat(v) for v in row] + [rat(bi)] for row, bi in zip(A, b)]
    reduced = [list(r) for r in aug]
    pivots = _row_reduce(reduced, ncols)
    if any(reduced[i][ncols] != 0 for i in range(len(pivots), len(reduced))):
        lo, hi = 1, len(aug)
        while lo < hi:
            mid = (lo + hi) // 2
            part = [list(r) for r in aug[:mid]]
            piv = _row_reduce(part, ncols)
            if any(part[i][ncols] != 0 for i in range(len(piv), len(part))):
                hi = mid
            else:
                lo = mid + 1
        raise Inconsistent(lo - 1)
    if len(pivots) < ncols:
        raise Singular(f"rank {len(pivots)} < {ncols} unknowns")
    sol = [mpq(0)] * ncols
    for r, c in enumerate(pivots):
        sol[c] = reduced[r][ncols]
    return sol


def nullspace(A):
    """Basis of the right null space of a rational matrix."""
    ncols = len(A[0]) if A else 0
    a = [[rat(v) for v in row] for row in A]
    pivots = _row_reduce(a, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [mpq(0)] * ncols
        v[f] = mpq(1)
        for r, c in enumerate(pivots):
            v[c] = -a[r][f]
        basis.append(v)
    return basis


def sturm_sequence(p):
    """Sturm chain of a univariate polynomial in x (p, p', -rem, ...)."""
    seq = [p, p.diff("x")]
    while not seq[-1].is_zero() and seq[-1].degree("x") > 0:
        _, r = divmod_univariate(seq[-2], seq[-1])
        seq.append(-r)
    if seq[-1].is_zero():
        seq.pop()
    return seq


def _sign_changes(values):
    signs = [v for v in values if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if (a < 0) != (b < 0))


def count_real_roots(p, lo, hi):
    """Number of distinct real roots of p in the closed interval [lo, hi].

    Exact Sturm count; endpoint roots are included.
    """
    if p.is_zero():
        raise ValueError("zero polynomial has infinitely many roots")
    lo, hi = rat(lo), rat(hi)
    # square-free part keeps the Sturm chain well defined at repeated roots
    g = poly_gcd(p, p.diff("x")) if p.degree("x") > 0 else ONE
    q = exact_div(p, g) if not g.is_constant() else p
    seq = sturm_sequence(q)
    v_lo = _sign_changes([s(lo) for s in seq])
    v_hi = _sign_changes([s(hi) for s in seq])
    count = v_lo - v_hi  # roots in (lo, hi]
    if q(lo) == 0:
        count += 1
    return count
