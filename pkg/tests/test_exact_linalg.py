"""Tests for exact elimination over Gaussian rationals."""

from fractions import Fraction

import pytest

from sugra_bv_verifier.errors import NonInvertibleError
from sugra_bv_verifier.exact_linalg import (
    as_matrix,
    determinant,
    identity,
    inverse,
    matmul,
    matvec,
    nullspace,
    rank,
    solve,
)
from sugra_bv_verifier.exact_scalars import ZERO, GaussianRational, I


def test_inverse_of_complex_matrix() -> None:
    """Test the inverse multiplies back to the identity."""
    m = as_matrix([[1, I, 0], [Fraction(1, 2), 2, -1], [0, I, 3]])
    assert matmul(m, inverse(m)) == identity(3)
    assert matmul(inverse(m), m) == identity(3)


def test_singular_matrix_rejected() -> None:
    """Test solving with a singular matrix raises NonInvertibleError."""
    m = as_matrix([[1, 2], [2, 4]])
    with pytest.raises(NonInvertibleError, match="singular"):
        solve(m, identity(2))


def test_rank_and_nullspace() -> None:
    """Test rank-nullity and that null vectors are annihilated."""
    m = as_matrix([[1, 2, 3, 4], [2, 4, 6, 8], [0, 1, 0, I]])
    assert rank(m) == 2
    kernel = nullspace(m)
    assert len(kernel) == 2
    for v in kernel:
        assert all(x == ZERO for x in matvec(m, v))


def test_rank_of_empty_matrix() -> None:
    """Test the empty matrix has rank zero."""
    assert rank([]) == 0


def test_determinant() -> None:
    """Test determinants including a row swap."""
    assert determinant(as_matrix([[0, 1], [1, 0]])) == GaussianRational(-1)
    assert determinant(as_matrix([[2, I], [I, 2]])) == GaussianRational(5)
    assert determinant(as_matrix([[1, 2], [2, 4]])) == ZERO


def test_solve_multiple_right_hand_sides() -> None:
    """Test every column of the solution satisfies the system."""
    m = as_matrix([[2, 1], [1, 3]])
    rhs = as_matrix([[1, 0], [0, 1]])
    x = solve(m, rhs)
    assert matmul(m, x) == rhs
