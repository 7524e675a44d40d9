from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ssmthom.algebra import (
    AlgebraError,
    ChernSeries,
    Param,
    TorusPolynomial,
    chern_images,
    enumerate_partitions,
    euler_class,
    format_chern,
    parse_chern_terms,
    parse_coefficient,
    series_invert,
    series_mul,
    split_to_roots,
    substitute,
    total_chern,
)

D = 5
PARTS = enumerate_partitions(D)

series = st.dictionaries(
    st.sampled_from(PARTS), st.integers(-6, 6), max_size=8
).map(lambda c: ChernSeries(c, D))


@given(series, series)
def test_mul_commutes(a, b):
    assert series_mul(a, b, D) == series_mul(b, a, D)


@given(series, series, series)
@settings(max_examples=40)
def test_mul_associates(a, b, c):
    assert series_mul(series_mul(a, b, D), c, D) == series_mul(a, series_mul(b, c, D), D)


@given(series)
def test_invert(a):
    a = a + ChernSeries.one(D) * (1 - a.coefficient(()))
    assert series_mul(a, series_invert(a), D) == ChernSeries.one(D)


def test_invert_needs_unit():
    with pytest.raises(AlgebraError):
        series_invert(ChernSeries.c(1, 3))


weights = st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3)), min_size=1, max_size=3)


@given(series, series, weights, weights)
@settings(max_examples=30, deadline=None)
def test_substitute_is_multiplicative(a, b, src, tgt):
    images = chern_images(src, tgt, 2, D)
    one = TorusPolynomial.one(2, D)
    lhs = substitute(series_mul(a, b, D), images, one)
    rhs = substitute(a, images, one) * substitute(b, images, one)
    assert lhs == rhs


@given(weights, weights)
@settings(max_examples=30, deadline=None)
def test_common_weights_cancel(src, common):
    tgt = [(2 * x, y) for x, y in src]
    with_common = chern_images(src + common, tgt + common, 2, D)
    without = chern_images(src, tgt, 2, D)
    assert with_common == without


def test_chern_images_of_example_algebra():
    # (1+2a)(1+3b)/((1+a)(1+b)) through degree 3
    c = chern_images([(1, 0), (0, 1)], [(2, 0), (0, 3)], 2, 3)
    assert c[0] == TorusPolynomial(2, 3, {(1, 0): 1, (0, 1): 2})
    assert c[1] == TorusPolynomial(2, 3, {(2, 0): -1, (1, 1): 2, (0, 2): -2})
    assert c[2] == TorusPolynomial(2, 3, {(3, 0): 1, (2, 1): -2, (1, 2): -2, (0, 3): 2})


def test_total_chern_and_euler():
    assert total_chern([(1, 0), (1, 1)], 2, 2) == TorusPolynomial(
        2, 2, {(0, 0): 1, (1, 0): 2, (0, 1): 1, (2, 0): 1, (1, 1): 1}
    )
    assert euler_class([(2,), (3,)], 1) == TorusPolynomial(1, 2, {(2,): 6})
    with pytest.raises(AlgebraError, match="zero Euler"):
        euler_class([(0, 0)], 2)


def test_split_to_roots_of_c1():
    # c1 -> b1 + b2 - a1 for m=1, ell=1
    t = split_to_roots(ChernSeries.c(1, 1), 1, 1)
    assert t == TorusPolynomial(3, 1, {(1, 0, 0): -1, (0, 1, 0): 1, (0, 0, 1): 1})


def test_partitions_count():
    assert [sum(1 for p in enumerate_partitions(k) if sum(p) == k) for k in range(9)] == [
        1, 1, 2, 3, 5, 7, 11, 15, 22
    ]


def test_parse_and_format():
    a = ChernSeries.parse("(c1^2+c2) + (-3c_1^3 - 6 c_1 c_2 - 3c_3)")
    assert a.degree == 3
    assert format_chern(a) == "(c1^2+c2) + (-3c1^3-6c1c2-3c3)"
    b = ChernSeries(parse_chern_terms(r"6 c_{1}^4+ 18 c_{1}^2 c_{2}+ 20 c_{1} c_{3}-c_{2}^2+ 7 c_{4}"), 4)
    assert format_chern(b) == "6c1^4+18c1^2c2+20c1c3-c2^2+7c4"
    assert ChernSeries.parse(format_chern(b), 4) == b


def test_params():
    d = Param.var("d")
    p = (d - 1) ** 2 * 21
    assert p.evaluate({"d": 2}) == 21
    assert parse_coefficient(str(p)) == p
    assert parse_coefficient("3/4") == Fraction(3, 4)
    assert (p - p).is_constant()
