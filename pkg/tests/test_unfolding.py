import pytest

from ssmthom.catalog import GenotypeSpec
from ssmthom.classification import genotype
from ssmthom.unfolding import (
    UnfoldingError,
    check_stabilization,
    derive_entry,
    normal_basis,
    stable_jet_bound,
)

X2Y3 = GenotypeSpec.build([("x", [1, 0]), ("y", [0, 1])], ["x^2", "y^3"])


def rendered(g, ell, bound=None):
    g = g.with_ell(ell)
    bound = bound or stable_jet_bound(g)
    return sorted(v.render(g.names) for v in normal_basis(g, bound))


def test_x2y3_ell0_parameters():
    assert rendered(X2Y3, 0) == sorted(["y*e1", "y^2*e1", "x*e2", "y*e2", "xy*e2"])


def test_x2y3_ell1_parameters():
    extra = ["x*e3", "y*e3", "xy*e3", "y^2*e3", "xy^2*e3"]
    assert rendered(X2Y3, 1) == sorted(["y*e1", "y^2*e1", "x*e2", "y*e2", "xy*e2"] + extra)


def test_x2y3_ell0_weights():
    e = derive_entry(X2Y3, 0)
    unfolding = [(2, -1), (2, -2), (-1, 3), (0, 2), (-1, 2)]
    assert sorted(e.source_weights) == sorted([(1, 0), (0, 1)] + unfolding)
    assert sorted(e.target_weights) == sorted([(2, 0), (0, 3)] + unfolding)
    assert e.codim == 7


def test_x2y3_ell1_codim():
    e = derive_entry(X2Y3, 1)
    assert e.codim == 12
    assert e.torus_rank == 3


def test_a2():
    e = derive_entry(genotype(0, "A2"), 0)
    assert e.source_weights == ((1,), (2,))
    assert e.target_weights == ((3,), (2,))


def test_a1_ell1_padding_gets_its_own_coordinate():
    e = derive_entry(genotype(0, "A1"), 1)
    assert e.source_weights == ((1, 0), (-1, 1))
    assert sorted(e.target_weights) == sorted([(2, 0), (0, 1), (-1, 1)])


def test_d1_ell1():
    e = derive_entry(genotype(1, "d1"), 1)
    assert sorted(e.source_weights) == [(1,)] * 12
    assert sorted(e.target_weights) == [(1,)] * 9 + [(2,)] * 4


def test_zero_weight_is_rejected():
    g = GenotypeSpec.build([("x", [1]), ("y", [0])], ["x^2", "y^2"])
    with pytest.raises(UnfoldingError, match="non-quasi-homogeneous"):
        derive_entry(g, 0)


def test_small_jet_bound_is_detected():
    g = X2Y3.with_ell(1)
    with pytest.raises(UnfoldingError, match="jet bound too small"):
        normal_basis(g, 3)
    assert not check_stabilization(g, 2)
    assert check_stabilization(g, stable_jet_bound(g))


@pytest.mark.parametrize("ell", [0, 1, 2])
def test_independent_of_jet_bound(ell):
    g = genotype(ell, "I23") if ell != 1 else genotype(1, "c3")
    e = derive_entry(g, ell)
    again = derive_entry(g, ell, jet_bound=stable_jet_bound(g.with_ell(ell)) + 2)
    assert sorted(e.source_weights) == sorted(again.source_weights)
