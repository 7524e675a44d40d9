from itertools import permutations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ssmthom.algebra import ChernSeries, enumerate_partitions, poly_mul, series_mul, split_to_roots
from ssmthom.bases import (
    BasisExpansion,
    chern_monomial_in_schur,
    expand,
    format_expansion,
    from_schur,
    from_schur_tilde,
    jacobi_trudi,
    latex_expansion,
    _schur_tilde_schur,
    parse_expansion,
    schur_tilde_expansion,
    straighten,
    to_schur,
    to_schur_tilde,
)
from ssmthom.solver import ssm_thom


def _sign(perm) -> int:
    inv = sum(1 for i in range(len(perm)) for j in range(i + 1, len(perm)) if perm[i] > perm[j])
    return -1 if inv % 2 else 1


def leibniz(mu, d):
    """det(c_{mu_i + j - i}) by brute-force expansion."""
    k = len(mu)
    total = ChernSeries({}, d)
    for perm in permutations(range(k)):
        term = ChernSeries.one(d)
        for i in range(k):
            term = series_mul(term, ChernSeries.c(mu[i] + perm[i] - i, d), d)
        total = total + term * _sign(perm)
    return total


PARTS6 = [p for p in enumerate_partitions(6) if p]


@pytest.mark.parametrize("lam", PARTS6)
def test_jacobi_trudi_matches_leibniz(lam):
    assert jacobi_trudi(lam, 6) == leibniz(lam, 6)


@given(st.lists(st.integers(-2, 4), min_size=1, max_size=4))
@settings(max_examples=60, deadline=None)
def test_jacobi_trudi_on_integer_vectors(mu):
    d = max(sum(mu), 0)
    if d > 8:
        return
    assert jacobi_trudi(mu, d) == leibniz(mu, d)


def test_straighten():
    assert straighten([1, 2]) == (0, ())
    assert straighten([0, 2]) == (-1, (1, 1))
    assert straighten([2, 1]) == (1, (2, 1))


def test_kostka_small():
    assert chern_monomial_in_schur((1, 1)) == {(2,): 1, (1, 1): 1}
    assert chern_monomial_in_schur((2, 1)) == {(3,): 1, (2, 1): 1}


series = st.dictionaries(st.sampled_from(enumerate_partitions(5)), st.integers(-5, 5), max_size=6)


@given(series)
@settings(deadline=None)
def test_schur_round_trip(coeffs):
    a = ChernSeries(coeffs, 5)
    assert from_schur(to_schur(a)) == a


@given(series)
@settings(max_examples=30, deadline=None)
def test_tilde_round_trip(coeffs):
    a = ChernSeries(coeffs, 5)
    assert from_schur_tilde(to_schur_tilde(a)) == a


@pytest.mark.parametrize("lam", enumerate_partitions(6))
def test_tilde_leading_term_and_stability(lam):
    for d in range(sum(lam), 9):
        e = schur_tilde_expansion(lam, d)
        assert e.homogeneous_part(sum(lam)) == {lam: 1}
        n = max(d, len(lam), 1)
        assert schur_tilde_expansion(lam, d, n=n + 1) == e


def reference_tilde(lam, d, n):
    """Direct dictionary expansion of the defining product."""
    lam_n = list(lam) + [0] * (n - len(lam))
    room = d - sum(lam)
    if room < 0:
        return {}
    poly = {(0,) * n: 1}
    def unit(i):
        return tuple(int(k == i) for k in range(n))
    for j in range(n):
        for i in range(j):
            poly = poly_mul(poly, {(0,) * n: 1, unit(i): 1, unit(j): -1}, room)
    for i in range(n):
        m = n - i + lam_n[i]
        series = {}
        c = 1
        for k in range(room + 1):
            series[tuple(k if t == i else 0 for t in range(n))] = c
            c = c * -(m + k) // (k + 1)
        poly = poly_mul(poly, series, room)
    out = {}
    for e, c in poly.items():
        sign, nu = straighten([a + b for a, b in zip(e, lam_n)])
        if sign:
            out[nu] = out.get(nu, 0) + sign * c
    return {p: c for p, c in out.items() if c}


@pytest.mark.parametrize("d", range(6))
def test_tilde_against_direct_expansion(d):
    for lam in enumerate_partitions(d):
        n = max(d, len(lam), 1)
        assert _schur_tilde_schur(lam, d, n) == reference_tilde(lam, d, n)


def test_tilde_41():
    e = schur_tilde_expansion((4, 1), 7)
    want = parse_expansion(
        "s41 - 3s411 - 3s42 - 5s51 + 6s4111 + 10s421 + 5s43 + 16s511 + 16s52 + 15s61", "schur", 7
    )
    assert e == want


def test_tilde_of_empty_partition():
    # s~_0 = 1/c(quotient) in the sense of the Schur expansion: alternating single columns
    e = schur_tilde_expansion((), 3)
    assert e == parse_expansion("1 - s1 + s2 + s11 - s3 - 2s21 - s111", "schur", 3)


@pytest.mark.parametrize("ell", [0, 1, 2])
def test_a0_is_sum_of_tildes_with_short_first_row(ell):
    d = 6
    got = to_schur_tilde(ssm_thom("A0", ell, d).series)
    want = {p: 1 for p in enumerate_partitions(d) if not p or p[0] <= ell}
    assert dict(got.items()) == want


def test_formats():
    T = ssm_thom("A1", 0, 2).series
    assert format_expansion(to_schur(T)) == "s1 - 3s2 - 2s11"
    assert latex_expansion(to_schur(T)) == r"s_{1}-3\,s_{2}-2\,s_{11}"
    t = to_schur_tilde(T)
    assert format_expansion(t) == "s~1 - s~2"
    assert latex_expansion(t) == r"\tilde{s}_{1}-\tilde{s}_{2}"


@pytest.mark.parametrize("basis", ["chern", "schur", "schur_tilde"])
def test_latex_round_trip(basis):
    T = ssm_thom("A2", 1, 6).series
    e = expand(T, basis)
    tex = latex_expansion(e)
    if basis == "chern":
        assert ChernSeries.parse(tex, 6) == T
    else:
        assert parse_expansion(tex, basis, 6) == e


def test_parse_variants():
    a = parse_expansion(r"2\,\tilde{s}_{21} - \tilde{s}_{(10,2)}", "schur_tilde", 12)
    assert dict(a.items()) == {(2, 1): 2, (10, 2): -1}
    assert parse_expansion("s~0", "schur_tilde", 0) == BasisExpansion("schur_tilde", 0, {(): 1})


@pytest.mark.parametrize("m", [1, 2])
@pytest.mark.parametrize("ell", [0, 1, 2])
def test_kernel_of_splitting(m, ell):
    for lam in enumerate_partitions(7):
        if not lam:
            continue
        vanishes = split_to_roots(jacobi_trudi(lam, sum(lam)), m, ell).is_zero()
        in_kernel = len(lam) > m and lam[m] >= m + ell + 1
        assert vanishes == in_kernel, lam
