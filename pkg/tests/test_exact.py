from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from forestbound import exact

small_int_matrix = st.integers(1, 6).flatmap(
    lambda r: st.integers(1, 6).flatmap(
        lambda c: st.lists(st.lists(st.integers(-4, 4), min_size=c, max_size=c), min_size=r, max_size=r)
    )
)


def test_rank_examples():
    assert exact.rank([[1, 2], [2, 4]]) == 1
    assert exact.rank([[1, 0], [0, 1]]) == 2
    assert exact.rank([[0, 0, 0]]) == 0
    assert exact.rank([]) == 0


def test_rational_rows_scaled():
    rows = [[Fraction(1, 2), Fraction(1, 3)], [Fraction(3, 2), 1]]
    assert exact.to_integer_rows(rows) == [[3, 2], [3, 2]]
    assert exact.rank(rows) == 1


def test_bareiss_stays_integral_on_large_entries():
    big = [[10**30 + i * j for j in range(5)] for i in range(5)]
    assert exact.rank(big) == sympy.Matrix(big).rank()


@given(small_int_matrix)
@settings(max_examples=150, deadline=None)
def test_rank_matches_sympy(rows):
    assert exact.rank(rows) == sympy.Matrix(rows).rank()


@given(small_int_matrix)
@settings(max_examples=100, deadline=None)
def test_nullspace_is_kernel(rows):
    basis = exact.nullspace(rows)
    n_cols = len(rows[0])
    assert len(basis) == exact.nullity(rows) == n_cols - exact.rank(rows)
    for v in basis:
        assert all(x == 0 for x in exact.matvec(rows, v))
    if basis:
        assert exact.rank(basis) == len(basis)


def test_rref_pivots():
    red, piv = exact.rref([[1, 1, 0], [0, 0, 1]])
    assert piv == [0, 2]
    assert red == [[1, 1, 0], [0, 0, 1]]


def test_nullspace_of_empty_rows():
    assert exact.nullspace([], 2) == [[1, 0], [0, 1]]


def test_transpose():
    assert exact.transpose([[1, 2, 3], [4, 5, 6]]) == [[1, 4], [2, 5], [3, 6]]


@pytest.mark.parametrize("seed", range(5))
def test_rank_matches_numpy_on_random_low_rank(seed):
    rng = np.random.default_rng(seed)
    a = rng.integers(-3, 4, size=(7, 3)) @ rng.integers(-3, 4, size=(3, 9))
    assert exact.rank(a.tolist()) == np.linalg.matrix_rank(a)
