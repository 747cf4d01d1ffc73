import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from xortho.algebra import X, det_cofactor
from xortho.classical import JacobiParams, ParamViolation, jacobi, lam
from xortho.combinatorics import PairF
from xortho.xjacobi import XJacobiFamily, convth_scan, jacobi_admissible

EMPTY_ONE = PairF((), (1,))
ONE_EMPTY = PairF((1,), ())
A, B = mpq(1, 3), mpq(7, 2)


def fam(a, b, F, strict=False):
    return XJacobiFamily(JacobiParams(a, b), F, strict)


def test_omega_empty_one():
    f = fam(A, B, EMPTY_ONE, strict=True)
    assert f.omega == (X * (A - B + 2) + A + B) / 2
    assert f.omega == jacobi(1, A, -B)
    assert f.omega(1) == A + 1 and f.omega(-1) == B - 1


@pytest.mark.parametrize("F", [EMPTY_ONE, ONE_EMPTY, PairF((1,), (1,)), PairF((1, 2), ()), PairF((2,), (1, 3))])
def test_boundary_closed_forms(F):
    f = fam(A, B, F)
    assert f.omega_boundary(1) == f.omega(1)
    assert f.omega_boundary(-1) == f.omega(-1)
    assert f.omega.degree("x") == f.u + F.k1


def test_one_empty_boundary():
    assert fam(A, B, ONE_EMPTY).omega_boundary(1) == A + 1


def test_wronskian_n0():
    f = fam(0, 0, ONE_EMPTY, strict=True)
    p0 = f.x_jacobi(0)
    assert p0.degree("x") == 0
    # columns carry alternating signs on the derivatives
    rows = [[jacobi(m, 0, 0), -jacobi(m, 0, 0).diff()] for m in (0, 1)]
    assert p0 == det_cofactor(rows) == -1


@pytest.mark.parametrize("F", [EMPTY_ONE, ONE_EMPTY, PairF((1,), (1,)), PairF((2, 3), (1,))])
def test_base_relation(F):
    p, rhs = fam(A, B, F).base_relation()
    assert p == rhs


def test_degrees_and_leading_coefficients():
    f = fam(A, B, PairF((1,), (1,)))
    for n in [m for m in range(f.u, f.u + 5) if f.in_sigma(m)]:
        p = f.x_jacobi(n)
        assert p.degree("x") == n and p.leading_term()[1] == f.leading_coefficient(n)


@pytest.mark.parametrize("F,ns", [(ONE_EMPTY, [0]), (EMPTY_ONE, [1, 2, 3])])
def test_limit_from_hahn(F, ns):
    a, b = (0, 0) if F == ONE_EMPTY else (mpq(1, 2), mpq(7, 3))
    f = fam(a, b, F)
    for n in ns:
        assert f.limit_from_hahn(n)
    assert f.omega_limit_from_hahn()


def test_limit_from_hahn_degenerate_example():
    f = fam(0, 2, EMPTY_ONE)
    assert all(f.limit_from_hahn(n) for n in (1, 2, 3))


@pytest.mark.parametrize("a,b,F,ns", [(0, 2, EMPTY_ONE, range(1, 5)), (0, 0, ONE_EMPTY, (0, 2, 3)), (A, B, PairF((1,), (2,)), (2, 4, 5, 6))])
def test_eigen_identity(a, b, F, ns):
    f = fam(a, b, F)
    for n in ns:
        assert f.eigen_residual(n).is_zero()
    assert f.eigenvalue(f.u) == 0


def test_darboux():
    checks = fam(0, 2, EMPTY_ONE).darboux_checks(2)
    assert all(checks.values()), checks
    f = fam(A, B, ONE_EMPTY)
    checks = f.darboux_checks(1)
    assert all(checks.values()), checks
    assert f.darboux_factor(1)[3] == lam(mpq(1), A, B) == A + B + 2
    assert all(fam(A, B, PairF((1,), (2,))).darboux_checks(2).values())


def test_admissibility_examples():
    assert jacobi_admissible(JacobiParams(0, 2), EMPTY_ONE).admissible
    bad = jacobi_admissible(JacobiParams(0, mpq(1, 2)), EMPTY_ONE)
    assert not bad.admissible and bad.witness is not None
    with pytest.raises(ParamViolation):
        jacobi_admissible(JacobiParams(-1, 2), EMPTY_ONE)


def test_convth_final_example():
    rep = convth_scan(JacobiParams(mpq(-3, 2), mpq(-9, 7)), PairF((2, 3, 4), (1, 2)), strict=False)
    assert rep["admissible"]
    assert not rep["alpha+beta+s+1>0"]
    assert rep["omega root-free on [-1,1]"]
    assert rep["lowered admissible"] is False and rep["lowered witness"] == 0


def test_convth_implications():
    good = convth_scan(JacobiParams(0, 3), EMPTY_ONE, strict=False)
    assert good["admissible"] and all(good[k] for k in ("alpha+k+1>0", "beta+k1-k2+1>0", "omega root-free on [-1,1]"))
    bad = convth_scan(JacobiParams(0, mpq(1, 2)), EMPTY_ONE, strict=False)
    assert not bad["admissible"]
    assert not all(bad[k] for k in ("alpha+k+1>0", "beta+k1-k2+1>0", "omega root-free on [-1,1]"))


REGION_IN = [(0, mpq(5, 2)), (mpq(-1, 2), mpq(3, 2)), (mpq(-3, 2), mpq(2, 3)), (mpq(-7, 4), mpq(1, 3))]
REGION_OUT = [(0, mpq(1, 2)), (mpq(-3, 2), mpq(3, 2)), (mpq(-5, 2), mpq(2, 3)), (mpq(1, 2), mpq(-1, 2))]


@pytest.mark.parametrize("a,b", REGION_IN)
def test_region_inside(a, b):
    assert jacobi_admissible(JacobiParams(a, b), EMPTY_ONE).admissible


@pytest.mark.parametrize("a,b", REGION_OUT)
def test_region_outside(a, b):
    assert not jacobi_admissible(JacobiParams(a, b), EMPTY_ONE).admissible


rationals = st.fractions(min_value=-4, max_value=4, max_denominator=9).filter(lambda v: v.denominator > 1)
small_pairs = st.tuples(st.frozensets(st.integers(1, 3), max_size=2), st.frozensets(st.integers(1, 3), max_size=2)).filter(
    lambda p: p[0] or p[1]
)


@settings(max_examples=40, deadline=None)
@given(rationals, rationals, small_pairs)
def test_boundary_property(a, b, p):
    a, b = mpq(a), mpq(b)
    if (a + b).denominator == 1 or (a - b).denominator == 1:
        return
    f = fam(a, b, PairF(*p))
    assert f.omega_boundary(1) == f.omega(1)
    assert f.omega_boundary(-1) == f.omega(-1)


@settings(max_examples=15, deadline=None)
@given(rationals, rationals, small_pairs)
def test_eigen_property(a, b, p):
    a, b = mpq(a), mpq(b)
    if (a + b).denominator == 1 or (a - b).denominator == 1:
        return
    f = fam(a, b, PairF(*p))
    for n in [m for m in range(f.u, f.u + 3) if f.in_sigma(m)]:
        assert f.eigen_residual(n).is_zero()
