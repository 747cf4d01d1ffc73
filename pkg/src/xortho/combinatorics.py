"""Finite sets of positive integers and the pairs F = (F1, F2) that index families."""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

from gmpy2 import mpq


class CombinatoricsError(ValueError):
    pass


class F1NotProper(CombinatoricsError):
    pass


def _as_set(values):
    s = tuple(sorted(set(int(v) for v in values)))
    if any(v <= 0 for v in s):
        raise CombinatoricsError(f"set elements must be positive integers: {s}")
    return s


@dataclass(frozen=True)
class PairF:
    """A pair of finite sets of positive integers, each kept sorted ascending."""

    f1: tuple = ()
    f2: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "f1", _as_set(self.f1))
        object.__setattr__(self, "f2", _as_set(self.f2))

    @property
    def k1(self):
        return len(self.f1)

    @property
    def k2(self):
        return len(self.f2)

    @property
    def k(self):
        return len(self.f1) + len(self.f2)

    def is_empty(self):
        return not self.f1 and not self.f2

    def require_nonempty(self):
        if self.is_empty():
            raise CombinatoricsError("at least one of F1, F2 must be nonempty")

    @property
    def u(self):
        return u_of(self)

    @property
    def w(self):
        return w_of(self)

    @property
    def s(self):
        return s_of(self.f1)

    def down(self):
        """F-down: ((F1)-down, F2)."""
        return PairF(f_down(self.f1), self.f2)

    def drop(self, side, i=None):
        """Remove the i-th element (1-based, default the maximum) of component ``side``."""
        comp = self.f1 if side == 1 else self.f2
        if not comp:
            raise CombinatoricsError(f"component F{side} is empty")
        i = len(comp) if i is None else i
        rest = comp[: i - 1] + comp[i:]
        return PairF(rest, self.f2) if side == 1 else PairF(self.f1, rest)

    def sigma(self, cutoff):
        return sigma_of(self, cutoff)

    def spec(self):
        return f"F1={','.join(map(str, self.f1))};F2={','.join(map(str, self.f2))}"

    def __str__(self):
        a = "{" + ",".join(map(str, self.f1)) + "}" if self.f1 else "∅"
        b = "{" + ",".join(map(str, self.f2)) + "}" if self.f2 else "∅"
        return f"({a}, {b})"


def parse_pair(text):
    """Parse "F1=1,3;F2=2" (either side may be empty, e.g. "F1=;F2=1")."""
    parts = {}
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        if "=" not in chunk:
            raise CombinatoricsError(f"malformed pair component {chunk!r}")
        name, vals = chunk.split("=", 1)
        name = name.strip().upper()
        if name not in ("F1", "F2"):
            raise CombinatoricsError(f"unknown pair component {name!r}")
        items = [v for v in vals.replace(" ", "").split(",") if v]
        try:
            parts[name] = [int(v) for v in items]
        except ValueError as exc:
            raise CombinatoricsError(f"non-integer element in {chunk!r}") from exc
    return PairF(parts.get("F1", ()), parts.get("F2", ()))


def u_of(F):
    u = sum(F.f1) + sum(F.f2) - comb(F.k1 + 1, 2) - comb(F.k2, 2)
    if u < 0:
        raise CombinatoricsError(f"u_F is negative for {F}")
    return u


def w_of(F):
    return sum(F.f1) + sum(F.f2) - comb(F.k1, 2) - comb(F.k2, 2) + 1


def sigma_of(F, cutoff):
    """Members of the index set {u, u+1, ...} minus {u + f : f in F1} up to ``cutoff``."""
    u = u_of(F)
    gaps = {u + f for f in F.f1}
    return [n for n in range(u, cutoff + 1) if n not in gaps]


def sigma_N_of(F, N):
    if F.f1 and (F.f1[-1] > N or set(F.f1) == set(range(1, N + 1))):
        raise F1NotProper(f"F1={F.f1} is not a proper subset of 1..{N}")
    if not F.f1 and N < 1:
        raise F1NotProper("N must be positive")
    out = sigma_of(F, u_of(F) + N)
    assert len(out) == N - F.k1 + 1
    return out


def involution(F):
    """I(F) = {1..max F} minus {max F - f : f in F}."""
    F = _as_set(F)
    if not F:
        raise CombinatoricsError("involution is undefined on the empty set")
    m = F[-1]
    removed = {m - f for f in F}
    return tuple(v for v in range(1, m + 1) if v not in removed)


def s_of(F):
    F = _as_set(F)
    k = len(F)
    if not F:
        return 1
    if F == tuple(range(1, k + 1)):
        return k + 1
    return next(s for s in range(1, k + 1) if s < F[s - 1])


def f_down(F):
    F = _as_set(F)
    k = len(F)
    if not F or F == tuple(range(1, k + 1)):
        return ()
    s = s_of(F)
    return tuple(f - s for f in F[s - 1:])


def vandermonde(F):
    F = _as_set(F)
    out = mpq(1)
    for i in range(len(F)):
        for j in range(i + 1, len(F)):
            out *= F[j] - F[i]
    return out
