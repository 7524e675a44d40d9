from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ssmthom.algebra import AlgebraError, Param
from ssmthom.apps import (
    ProjectiveClass,
    aluffi_involution,
    chern_of_map,
    csm_from_ssm,
    euler_profile,
    hierarchy_test,
    locus_report,
    ssm_of_locus,
    sum_check,
)
from ssmthom.catalog import bundled_catalog
from ssmthom.solver import Underdetermined, ssm_thom

polys = st.lists(st.builds(Fraction, st.integers(-50, 50), st.integers(1, 5)), min_size=1, max_size=8)


@given(polys)
def test_aluffi_is_an_involution(p):
    while p and not p[-1]:
        p = p[:-1]
    assert aluffi_involution(aluffi_involution(p)) == p


def test_aluffi_on_symbolic_coefficients():
    d = Param.var("d")
    p = [d * 2 + 1, d - 3, d * d]
    assert aluffi_involution(aluffi_involution(p)) == [
        c if not isinstance(c, Param) or not c.is_constant() else c.constant() for c in p
    ]


def binomial_class(m: int, k: int) -> ProjectiveClass:
    """csm of a linear P^k in P^m: (1+h)^(k+1) h^(m-k)."""
    from math import comb

    coeffs = [0] * (m + 1)
    for j in range(k + 1):
        coeffs[m - k + j] = comb(k + 1, j)
    return ProjectiveClass(m, tuple(coeffs))


@pytest.mark.parametrize("m,k", [(3, 0), (3, 1), (4, 2), (5, 5)])
def test_euler_profile_of_linear_subspaces(m, k):
    prof = euler_profile(binomial_class(m, k))
    assert prof.euler_characteristic == k + 1
    assert prof.degree == 1
    # a generic codim-j linear section of P^k is P^(k-j); signs alternate with j
    assert list(prof.chi) == [(-1) ** j * (k + 1 - j) for j in range(k + 1)]


def test_chern_of_linear_embedding():
    # c(F) = (1+h)^(n-m)
    assert [c[k + 1] for k, c in enumerate(chern_of_map(3, 5, 1))] == [2, 1, 0]


def test_chern_of_map_symbolic():
    c1 = chern_of_map(5, 6, "d")[0]
    d = Param.var("d")
    assert c1[1] == d * 7 - 6


def test_csm_of_whole_space():
    one = ProjectiveClass.one(4)
    assert euler_profile(csm_from_ssm(one)).euler_characteristic == 5


def test_ssm_needs_enough_degree():
    T = ssm_thom("A1", 1, 3)
    with pytest.raises(AlgebraError):
        ssm_of_locus(T, chern_of_map(5, 6, 2), 5)


def test_locus_report_numeric():
    T = ssm_thom("A2", 1, 5)
    rep = locus_report(T, 5, 6, 2)
    assert rep.profile.degree == 525
    assert rep.profile.euler_characteristic == -5978
    assert rep.ssm[5] == -9128


def test_hierarchy_small():
    assert str(hierarchy_test("A2", "A1", 0, 1)) == "below (witness 2a)"
    assert str(hierarchy_test("A1", "A2", 0, 2)) == "not-below (witness 0)"


def test_hierarchy_needs_degree():
    with pytest.raises(ValueError):
        hierarchy_test("A2", "A3", 0, 2)


def test_sum_rule_ell1():
    rep = sum_check(bundled_catalog(1), 6)
    assert rep.passed and rep.chern_ok and rep.tilde_ok


def test_sum_rule_detects_missing_entry():
    cat = bundled_catalog(0)
    short = cat.with_entries(e for e in cat if e.name != "I22")
    with pytest.raises(Underdetermined):
        # without I22 the remaining entries cannot even be interpolated at degree 4
        sum_check(short, 4)


def test_projective_class_arithmetic():
    h = ProjectiveClass.monomial(3, 1)
    assert (h * h * h * h).is_zero()
    assert (ProjectiveClass.one(3) + h)[1] == Fraction(1)
