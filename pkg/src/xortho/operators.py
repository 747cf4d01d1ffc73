"""Shift-difference and differential operators with rational-function coefficients."""

from __future__ import annotations

from math import comb

from .algebra import MultiPoly, RationalFn


def _rf(c):
    return c if isinstance(c, RationalFn) else RationalFn(c)


class DiffOp:
    """sum_j c_j(x) S_j where S_j f(x) = f(x + j)."""

    def __init__(self, coeffs):
        self.coeffs = {int(j): _rf(c) for j, c in coeffs.items() if not _rf(c).is_zero()}

    @classmethod
    def identity(cls, scale=1):
        return cls({0: RationalFn(MultiPoly.const(scale))})

    def apply(self, f):
        f = _rf(f)
        out = RationalFn(MultiPoly.const(0))
        for j, c in self.coeffs.items():
            out = out + c * f.shift("x", j)
        return out

    def __call__(self, f):
        return self.apply(f)

    def __matmul__(self, other):
        """Composition: (self @ other)(f) = self(other(f))."""
        out = {}
        for i, c in self.coeffs.items():
            for j, d in other.coeffs.items():
                term = c * d.shift("x", i)
                out[i + j] = out[i + j] + term if i + j in out else term
        return DiffOp(out)

    def __add__(self, other):
        out = dict(self.coeffs)
        for j, c in other.coeffs.items():
            out[j] = out[j] + c if j in out else c
        return DiffOp(out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, s):
        return DiffOp({j: c * s for j, c in self.coeffs.items()})

    def __eq__(self, other):
        keys = set(self.coeffs) | set(other.coeffs)
        zero = RationalFn(MultiPoly.const(0))
        return all(self.coeffs.get(j, zero) == other.coeffs.get(j, zero) for j in keys)

    def __repr__(self):
        inner = ", ".join(f"{j}: {c!r}" for j, c in sorted(self.coeffs.items()))
        return f"DiffOp({{{inner}}})"


class DerivOp:
    """sum_i c_i(x) d^i/dx^i, coefficients indexed by derivative order."""

    def __init__(self, coeffs):
        self.coeffs = [_rf(c) for c in coeffs]

    @classmethod
    def identity(cls, scale=1):
        return cls([RationalFn(MultiPoly.const(scale))])

    @property
    def order(self):
        return len(self.coeffs) - 1

    def apply(self, f):
        f = _rf(f)
        out = RationalFn(MultiPoly.const(0))
        d = f
        for i, c in enumerate(self.coeffs):
            if i:
                d = d.diff("x")
            if not c.is_zero():
                out = out + c * d
        return out

    def __call__(self, f):
        return self.apply(f)

    def __matmul__(self, other):
        n = len(self.coeffs) + len(other.coeffs) - 1
        out = [RationalFn(MultiPoly.const(0)) for _ in range(n)]
        for j, b in enumerate(other.coeffs):
            derivs = [b]
            for _ in range(len(self.coeffs) - 1):
                derivs.append(derivs[-1].diff("x"))
            for i, a in enumerate(self.coeffs):
                if a.is_zero():
                    continue
                for l in range(i + 1):
                    term = derivs[i - l]
                    if term.is_zero():
                        continue
                    out[l + j] = out[l + j] + a * term * comb(i, l)
        return DerivOp(out)

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        zero = RationalFn(MultiPoly.const(0))
        a = self.coeffs + [zero] * (n - len(self.coeffs))
        b = other.coeffs + [zero] * (n - len(other.coeffs))
        return DerivOp([u + v for u, v in zip(a, b)])

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, s):
        return DerivOp([c * s for c in self.coeffs])

    def __eq__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        zero = RationalFn(MultiPoly.const(0))
        a = self.coeffs + [zero] * (n - len(self.coeffs))
        b = other.coeffs + [zero] * (n - len(other.coeffs))
        return all(u == v for u, v in zip(a, b))

    def __repr__(self):
        return f"DerivOp({self.coeffs!r})"
