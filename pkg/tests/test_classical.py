import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import hahn_3f2, jacobi_sympy, srat, to_sympy

from xortho.algebra import NVAR, ONE, X, exact_div, poch
from xortho.classical import (
    HahnParams,
    JacobiParams,
    ParamPole,
    ParamViolation,
    check_dual_hahn_recurrence,
    check_dual_hahn_reflection,
    check_duality,
    check_hahn_difference,
    check_hahn_s_weighted,
    check_jacobi_derivative,
    check_jacobi_weighted_derivative,
    christoffel,
    christoffel_norm,
    christoffel_phi,
    dual_hahn,
    dual_hahn_norm,
    dual_hahn_recurrence,
    dual_hahn_weight,
    hahn,
    hahn_jacobi_limit,
    hahn_leading,
    hahn_norm,
    hahn_weight,
    jacobi,
    lam,
)
from xortho.combinatorics import PairF

A, B = mpq(1, 2), mpq(1, 3)


def test_hahn_low_degrees():
    assert hahn(0, A, B, 5) == ONE
    assert hahn(-1, A, B, 5).is_zero()
    a, b = mpq(2, 7), mpq(3, 5)
    assert hahn(1, a, b, NVAR) == -NVAR + X * ((a + b + 2) / (a + 1))


@pytest.mark.parametrize("deg", range(5))
def test_hahn_matches_hypergeometric_sum(deg):
    for xv in range(6):
        assert srat(hahn(deg, A, B, 5)(mpq(xv))) == hahn_3f2(deg, A, B, 5, xv)


def test_hahn_divisible_beyond_N():
    for N in (3, 4):
        for extra in (1, 2):
            exact_div(hahn(N + extra, A, B, N), poch(-X, N + 1))


def test_hahn_pole():
    with pytest.raises(ParamPole):
        hahn(3, -2, B, 5)


def test_dual_hahn_low_degrees():
    assert dual_hahn(0, A, B, 4) == ONE
    assert dual_hahn(1, A, B, NVAR) == -NVAR + X / (A + 1)


def test_dual_hahn_vanishing():
    N = 4
    for m in (N + 1, N + 2):
        for i in range(N + 1):
            assert dual_hahn(m, A, B, N)(lam(mpq(i), A, B)) == 0


def test_duality_instance():
    assert check_duality(1, 1, A, B, 4)


def test_duality_grid():
    for a, b in [(A, B), (mpq(-1, 3), mpq(5, 2)), (mpq(7, 4), mpq(-2, 9))]:
        for N in (3, 6):
            for deg in range(5):
                for m in range(5):
                    assert check_duality(deg, m, a, b, N)


def test_dual_hahn_recurrence():
    Acoef, _, C0 = dual_hahn_recurrence(0, A, B, 4)
    assert C0 == 0
    assert dual_hahn_recurrence(1, A, B, 4)[0] == mpq(5, 2)
    for deg in range(4):
        assert check_dual_hahn_recurrence(deg, mpq(3, 7), mpq(-2, 5), 6)
        assert check_dual_hahn_recurrence(deg, A, B, NVAR)


def test_jacobi_against_sympy():
    assert jacobi(0, A, B) == ONE
    assert jacobi(1, A, B) == (X * (A + B + 2) + A - B) / 2
    for deg in range(6):
        assert to_sympy(jacobi(deg, A, B)) == jacobi_sympy(deg, A, B)


def test_jacobi_derivative_identities():
    assert jacobi(2, 0, 0).diff() == jacobi(1, 1, 1) * mpq(3, 2)
    for deg in range(1, 6):
        assert check_jacobi_derivative(deg, A, B)
        assert check_jacobi_weighted_derivative(deg, A, B)


def test_hahn_weight_and_norms():
    mu = hahn_weight(0, 0, 2)
    assert list(mu.masses) == [1, 1, 1]
    mu = hahn_weight(A, B, 3)
    assert mu.inner(ONE, ONE) == sum(mu.masses)
    h1 = hahn(1, A, B, 3)
    assert mu.inner(h1, h1) == hahn_norm(1, A, B, 3)


@pytest.mark.parametrize("a,b,N", [(A, B, 4), (mpq(-1, 3), mpq(5, 2), 5)])
def test_hahn_orthogonality(a, b, N):
    mu = hahn_weight(a, b, N)
    hs = [hahn(i, a, b, N) for i in range(N + 1)]
    for i in range(N + 1):
        for j in range(N + 1):
            assert mu.inner(hs[i], hs[j]) == (hahn_norm(i, a, b, N) if i == j else 0)


def test_dual_hahn_orthogonality():
    a, b, N = A, B, 4
    mu = dual_hahn_weight(a, b, N)
    Rs = [dual_hahn(i, a, b, N) for i in range(N + 1)]
    for i in range(N + 1):
        for j in range(N + 1):
            assert mu.inner(Rs[i], Rs[j]) == (dual_hahn_norm(i, a, b, N) if i == j else 0)


def test_hahn_identities():
    assert check_hahn_difference(2, A, B, 5)
    assert not check_hahn_difference(2, A, B, 5, perturb=1)
    assert check_dual_hahn_reflection(2, A, B, 5)
    for deg in range(4):
        assert check_hahn_difference(deg, A, B, NVAR)
        for k in (1, 2, 3):
            for j in range(2, k + 2):
                assert check_hahn_s_weighted(deg, A, B, NVAR, k, j)


def test_jacobi_limit_of_hahn():
    for deg in range(5):
        top, expected, d = hahn_jacobi_limit(deg, A, B)
        assert d == deg and top == expected


def test_params_validation():
    with pytest.raises(ParamViolation):
        HahnParams(A, B, 0)
    assert HahnParams(-1, B, 3).violations() == ["alpha is a negative integer"]
    assert JacobiParams(A, B).violations() == []
    assert "alpha - beta is a negative integer" in JacobiParams(0, 2).violations(PairF((), (1,)))


def test_christoffel_trivial_and_two_by_two():
    N = 5
    ps = [hahn(i, A, B, N) for i in range(5)]
    assert christoffel(ps, [], 3) == ps[:3]
    f = mpq(-1)
    q = christoffel(ps, [f], 3)
    for i in range(3):
        want = exact_div(ps[i] * ps[i + 1](f) - ps[i + 1] * ps[i](f), X - f)
        assert q[i] == want


def test_christoffel_orthogonality_and_norm():
    N, f = 5, mpq(-1)
    ps = [hahn(i, 0, 0, N) for i in range(N + 1)]
    qs = christoffel(ps, [f], N)
    masses = [(mpq(xv), m * (xv - f)) for xv, m in hahn_weight(0, 0, N).atoms]
    inner = lambda p, q: sum(m * p(xv) * q(xv) for xv, m in masses)
    for i in range(N):
        for j in range(N):
            if i != j:
                assert inner(qs[i], qs[j]) == 0
    lead = lambda i: hahn_leading(i, 0, 0)
    assert inner(qs[2], qs[2]) == christoffel_norm(ps, [f], 2, hahn_norm(2, 0, 0, N), lead)
    assert christoffel_phi(ps, [f], 0) == 1


rationals = st.fractions(min_value=-3, max_value=3, max_denominator=7).filter(lambda v: v.denominator > 1)


@settings(max_examples=25, deadline=None)
@given(rationals, rationals, st.integers(1, 8), st.integers(0, 6), st.integers(0, 6))
def test_duality_property(a, b, N, deg, m):
    a, b = mpq(a), mpq(b)
    if (a + b).denominator == 1:
        return
    assert check_duality(deg, m, a, b, N)
