"""
Tests for the exact linear-algebra oracle and the RatMatrix value type.
"""

from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from src.errors import DimensionError, InputError, NotSquareError, SingularMatrixError
from src.exact_linalg_oracle import (
    bareiss_det,
    cofactor_det,
    gaussian_det,
    identity_check,
    matmul,
    oracle_det,
    oracle_inverse,
)
from src.rat_matrix import RatMatrix

MAX_MATRIX = RatMatrix.from_rows([[1, 2, 3], [2, 2, 3], [3, 3, 3]])

square_matrices = st.integers(1, 5).flatmap(
    lambda n: st.lists(st.lists(st.integers(-6, 6), min_size=n, max_size=n), min_size=n, max_size=n)
)
rationals = st.builds(Fraction, st.integers(-6, 6), st.integers(1, 4))
rational_pairs = st.integers(1, 4).flatmap(
    lambda n: st.tuples(*[st.lists(st.lists(rationals, min_size=n, max_size=n), min_size=n, max_size=n)] * 2)
)


class TestRatMatrix:
    """Test the matrix value type."""

    def test_entries_are_fractions(self):
        m = RatMatrix.from_rows([[1, Fraction(1, 2)]])
        assert m.shape == (1, 2)
        assert isinstance(m[0, 0], Fraction)

    def test_rejects_floats(self):
        with pytest.raises(InputError):
            RatMatrix.from_rows([[0.5]])

    def test_rejects_ragged_rows(self):
        with pytest.raises(DimensionError):
            RatMatrix.from_rows([[1, 2], [3]])

    def test_transpose_and_submatrix(self):
        assert MAX_MATRIX.transpose() == MAX_MATRIX
        assert MAX_MATRIX.submatrix([0, 2], [1]).to_lists() == [[2], [3]]

    def test_scaling(self):
        m = RatMatrix.identity(2)
        assert m.scale_rows([2, 3]) == RatMatrix.diagonal([2, 3])
        assert m.scale_cols([2, 3]) == RatMatrix.diagonal([2, 3])


class TestDeterminants:
    """Test the three determinant paths."""

    def test_max_matrix(self):
        assert bareiss_det(MAX_MATRIX) == 3
        assert gaussian_det(MAX_MATRIX) == 3
        assert cofactor_det(MAX_MATRIX) == 3

    def test_pivot_swap(self):
        assert bareiss_det(RatMatrix.from_rows([[0, 1], [1, 0]])) == -1

    def test_singular(self):
        assert oracle_det(RatMatrix.from_rows([[1, 2], [2, 4]])) == 0

    def test_empty_matrix(self):
        assert bareiss_det(RatMatrix.from_rows([], cols=0)) == 1

    def test_not_square(self):
        with pytest.raises(NotSquareError):
            bareiss_det(RatMatrix.zeros(2, 3))

    @given(square_matrices)
    def test_paths_agree_with_sympy(self, rows):
        m = RatMatrix.from_rows(rows)
        expected = sympy.Matrix(rows).det()
        assert bareiss_det(m) == gaussian_det(m) == cofactor_det(m) == int(expected)

    def test_rational_entries(self):
        m = RatMatrix.from_rows([[Fraction(1, 2), Fraction(1, 3)], [Fraction(1, 4), 1]])
        assert bareiss_det(m) == Fraction(1, 2) - Fraction(1, 12)


class TestInverse:
    """Test Gauss-Jordan inversion and products."""

    def test_max_inverse(self):
        expected = RatMatrix.from_rows([[-1, 1, 0], [1, -2, 1], [0, 1, Fraction(-2, 3)]])
        assert oracle_inverse(MAX_MATRIX) == expected
        assert identity_check(matmul(MAX_MATRIX, expected))

    def test_singular_inverse(self):
        with pytest.raises(SingularMatrixError):
            oracle_inverse(RatMatrix.from_rows([[1, 2], [2, 4]]))

    def test_matmul_dimensions(self):
        with pytest.raises(DimensionError):
            matmul(RatMatrix.zeros(2, 3), RatMatrix.zeros(2, 3))
        assert matmul(RatMatrix.zeros(2, 3), RatMatrix.zeros(3, 1)).shape == (2, 1)

    def test_identity_check(self):
        assert identity_check(RatMatrix.identity(3))
        assert not identity_check(RatMatrix.zeros(2, 3))

    @given(square_matrices)
    def test_inverse_round_trip(self, rows):
        m = RatMatrix.from_rows(rows)
        if bareiss_det(m) == 0:
            with pytest.raises(SingularMatrixError):
                oracle_inverse(m)
        else:
            assert identity_check(matmul(oracle_inverse(m), m))


class TestAlgebraicLaws:
    """Property tests: the oracle respects products and double inversion."""

    @given(rational_pairs)
    def test_det_is_multiplicative(self, pair):
        a, b = (RatMatrix.from_rows(rows) for rows in pair)
        assert oracle_det(matmul(a, b)) == oracle_det(a) * oracle_det(b)

    @given(rational_pairs)
    def test_double_inverse(self, pair):
        m = RatMatrix.from_rows(pair[0])
        if oracle_det(m) == 0:
            return
        inverse = oracle_inverse(m)
        assert oracle_det(inverse) == 1 / oracle_det(m)
        assert oracle_inverse(inverse) == m
