import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from gxsperner.lattice import (
    GroundSetMismatch,
    SubsetWord,
    binomial,
    diff_size,
    is_neighbor,
    layer_iter,
)


def S(n, *elements):
    return SubsetWord.from_elements(n, elements)


@st.composite
def subset_pairs(draw, max_n=80):
    n = draw(st.integers(1, max_n))
    a = draw(st.integers(0, (1 << n) - 1))
    b = draw(st.integers(0, (1 << n) - 1))
    return SubsetWord(n, a), SubsetWord(n, b)


@pytest.mark.parametrize("a, b, expected", [
    (S(4, 1, 2, 3), S(4, 2, 3, 4), 1),
    (S(4, 1, 2), S(4, 1, 2), 0),
    (S(4, 1, 2), S(4), 2),
])
def test_diff_size(a, b, expected):
    assert diff_size(a, b) == expected


def test_ground_set_mismatch():
    with pytest.raises(GroundSetMismatch, match="ground-set mismatch"):
        diff_size(S(3, 1), S(4, 1))
    with pytest.raises(GroundSetMismatch):
        is_neighbor(S(3, 1), S(4, 1))


@pytest.mark.parametrize("a, b, expected", [
    (S(4, 1, 2), S(4, 1, 3), True),
    (S(4, 1, 2), S(4, 1, 2), False),
    (S(4, 1, 2), S(4, 3, 4), False),
])
def test_is_neighbor(a, b, expected):
    assert is_neighbor(a, b) is expected


def test_binomial_small():
    assert binomial(4, 2) == 6
    for n in range(20):
        assert binomial(n, 0) == 1
    assert binomial(5, -1) == 0
    assert binomial(5, 6) == 0


def test_binomial_400_200_against_product_form():
    # product form binom(n, k) = prod_{i=1..k} (n - k + i) / i, accumulated exactly
    acc = Fraction(1)
    for i in range(1, 201):
        acc *= Fraction(200 + i, i)
    assert acc.denominator == 1
    value = binomial(400, 200)
    assert value == acc.numerator
    assert len(str(value)) == 120  # 1.0295...e119


def test_layer_iter_examples():
    assert [s.elements() for s in layer_iter(3, 1)] == [[1], [2], [3]]
    items = list(layer_iter(4, 2))
    assert len(items) == 6
    assert len({s.bits for s in items}) == 6
    assert all(len(s) == 2 for s in items)
    assert list(layer_iter(4, 5)) == []
    assert list(layer_iter(4, -1)) == []


def test_layer_iter_is_colex():
    items = [s.elements() for s in layer_iter(5, 3)]
    # colex: compare reversed sorted element lists
    assert items == sorted(items, key=lambda e: sorted(e, reverse=True))


@pytest.mark.parametrize("n", range(13))
def test_layer_iter_counts(n):
    for k in range(n + 1):
        assert sum(1 for _ in layer_iter(n, k)) == binomial(n, k)


@given(subset_pairs())
def test_diff_plus_intersection_is_size(pair):
    a, b = pair
    assert diff_size(a, b) + len(a & b) == len(a)


@given(subset_pairs())
def test_layer_difference_identity(pair):
    a, b = pair
    assert diff_size(a, b) - diff_size(b, a) == len(a) - len(b)


@given(subset_pairs())
def test_neighbor_equal_sizes(pair):
    a, b = pair
    if len(a) == len(b):
        assert is_neighbor(a, b) == (diff_size(a, b) == 1)


@pytest.mark.parametrize("n", range(65))
def test_binomial_row_sums(n):
    assert sum(binomial(n, k) for k in range(n + 1)) == 2 ** n


def test_subset_rejects_out_of_range():
    with pytest.raises(ValueError):
        SubsetWord(3, 0b1000)
    with pytest.raises(ValueError):
        SubsetWord.from_elements(3, [0])


@given(st.integers(1, 60).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, (1 << n) - 1))))
def test_text_roundtrip(case):
    n, bits = case
    s = SubsetWord(n, bits)
    assert SubsetWord.parse(n, str(s)) == s


def test_text_form():
    assert str(S(6, 5, 1, 3)) == "1,3,5"
    assert str(S(6)) == ""
    assert SubsetWord.parse(6, "") == S(6)


def test_large_ground_set():
    n = 10 ** 6
    a = SubsetWord.from_elements(n, [1, n])
    b = SubsetWord.from_elements(n, [n])
    assert diff_size(a, b) == 1
    assert a.max() == n and a.min() == 1
    assert math.comb(10, 3) == binomial(10, 3)
