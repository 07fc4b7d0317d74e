"""Tests for exact rational linear algebra."""

import random
from fractions import Fraction

import pytest
import sympy

from jetmoduli.exact_core import (
    QMatrix,
    QVector,
    binomial,
    kernel_basis,
    nullity,
    rank,
    vstack,
)
from jetmoduli.jets import random_connection_jet
from jetmoduli.lie_action import action_matrix
from jetmoduli.utils.errors import DimensionMismatchError


class TestQMatrix:
    def test_from_rows(self):
        m = QMatrix.from_rows([[1, 2], [3, Fraction(1, 2)]])
        assert (m.rows, m.cols) == (2, 2)
        assert m[1, 1] == Fraction(1, 2)
        assert m.row(0) == (Fraction(1), Fraction(2))

    def test_ragged_rows_rejected(self):
        with pytest.raises(DimensionMismatchError):
            QMatrix.from_rows([[1, 2], [3]])

    def test_wrong_entry_count_rejected(self):
        with pytest.raises(DimensionMismatchError):
            QMatrix(2, 2, (Fraction(1),))

    def test_empty_with_columns(self):
        m = QMatrix.from_rows([], cols=4)
        assert (m.rows, m.cols) == (0, 4)
        assert rank(m) == 0
        assert nullity(m) == 4

    def test_apply(self):
        m = QMatrix.from_rows([[1, 2, 3], [4, 5, 6]])
        assert m.to_rows() == [[1, 2, 3], [4, 5, 6]]
        assert m.apply([1, 0, -1]) == QVector.of([-2, -2])

    def test_apply_length_checked(self):
        with pytest.raises(DimensionMismatchError):
            QMatrix.identity(2).apply([1, 2, 3])

    def test_vstack(self):
        m = vstack([QMatrix.identity(2), QMatrix.from_rows([[1, 1]])])
        assert m.to_rows() == [[1, 0], [0, 1], [1, 1]]
        with pytest.raises(DimensionMismatchError):
            vstack([QMatrix.identity(2), QMatrix.identity(3)])


class TestRank:
    def test_identity(self):
        assert rank(QMatrix.identity(5)) == 5

    def test_zero(self):
        assert rank(QMatrix.zeros(3, 4)) == 0

    def test_dependent_rows(self):
        m = QMatrix.from_rows([[1, 2, 3], [2, 4, 6], [1, 0, 1]])
        assert rank(m) == 2

    def test_rational_entries(self):
        m = QMatrix.from_rows([[Fraction(1, 2), Fraction(1, 3)], [3, 2]])
        assert rank(m) == 1

    def test_hilbert_matrix_full_rank(self):
        size = 6
        m = QMatrix.from_rows(
            [[Fraction(1, i + j + 1) for j in range(size)] for i in range(size)]
        )
        assert rank(m) == size

    def test_bounded_by_shape(self):
        m = QMatrix.from_rows([[1, 2, 3, 4], [5, 6, 7, 8]])
        assert rank(m) == 2
        assert rank(QMatrix.from_rows([[1, 5], [2, 6], [3, 7], [4, 8]])) == 2

    @pytest.mark.parametrize("seed", range(5))
    def test_invariant_under_row_operations(self, seed):
        rng = random.Random(seed)
        rows = [[rng.randint(-3, 3) for _ in range(6)] for _ in range(5)]
        rows[4] = [a - b for a, b in zip(rows[0], rows[1], strict=True)]
        before = rank(QMatrix.from_rows(rows))
        rng.shuffle(rows)
        scales = [Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.randint(1, 4)) for _ in rows]
        scaled = [[c * a for a in row] for c, row in zip(scales, rows, strict=True)]
        assert rank(QMatrix.from_rows(scaled)) == before <= 4


class TestKernel:
    def test_kernel_vectors_annihilated(self):
        m = QMatrix.from_rows([[1, 2, 3, 4], [2, 4, 7, 9], [0, 0, 1, 1]])
        basis = kernel_basis(m)
        assert len(basis) == nullity(m) == 2
        for v in basis:
            assert m.apply(v).is_zero()

    def test_kernel_of_full_rank(self):
        assert kernel_basis(QMatrix.identity(3)) == []

    def test_kernel_of_no_rows(self):
        basis = kernel_basis(QMatrix.zeros(0, 2))
        assert [list(v.entries) for v in basis] == [[1, 0], [0, 1]]

    def test_kernel_independent(self):
        m = QMatrix.from_rows([[1, 1, 1]])
        basis = kernel_basis(m)
        stacked = QMatrix.from_rows([list(v.entries) for v in basis])
        assert rank(stacked) == len(basis) == 2


class TestBinomial:
    def test_values(self):
        assert binomial(5, 2) == 10
        assert binomial(4, 0) == 1

    def test_out_of_range_is_zero(self):
        assert binomial(2, 3) == 0
        assert binomial(-1, 0) == 0
        assert binomial(3, -1) == 0

    def test_pascal_identity(self):
        for a in range(1, 15):
            for b in range(-1, a + 2):
                assert binomial(a, b) == binomial(a - 1, b - 1) + binomial(a - 1, b)


class TestAgainstSympy:
    """sympy's exact rank is the independent oracle."""

    @pytest.mark.parametrize("seed", range(5))
    def test_random_integer_matrices(self, seed):
        rng = random.Random(seed)
        rows = [[rng.choice([-2, -1, 0, 0, 1, 3]) for _ in range(7)] for _ in range(6)]
        # a dependent row keeps some ranks below full
        rows.append([a - 2 * b for a, b in zip(rows[0], rows[1], strict=True)])
        assert rank(QMatrix.from_rows(rows)) == sympy.Matrix(rows).rank()

    def test_action_matrix(self):
        base = action_matrix(random_connection_jet(2, 1, seed=3)).base
        oracle = sympy.Matrix(base.rows, base.cols, [sympy.Rational(x) for x in base.entries])
        assert rank(base) == oracle.rank()
