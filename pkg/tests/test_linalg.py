# tests/test_linalg.py

from fractions import Fraction

import pytest
import sympy

from core.backend.algebra.linalg import (
    FiniteComplex,
    NotAComplex,
    PoincareSeries,
    Scalar,
    SparseMatrix,
    cyclotomic_modulus,
    homology_dims,
    kernel_basis,
    nullity,
    poly_from_truncation,
    rank,
    series_truncate,
    solve,
)


# ------------------ скаляры ------------------ #

@pytest.mark.parametrize(
    "n, coeffs",
    [(1, (-1, 1)), (2, (1, 1)), (3, (1, 1, 1)), (4, (1, 0, 1)), (6, (1, -1, 1)), (8, (1, 0, 0, 0, 1))],
)
def test_cyclotomic_modulus(n, coeffs):
    assert cyclotomic_modulus(n) == coeffs


def test_root_of_unity_has_exact_order():
    z = Scalar.root_of_unity(6)
    assert z ** 6 == Scalar(1)
    assert z ** 3 == Scalar(-1)
    assert z ** 2 != Scalar(1)


def test_primitive_cube_roots_sum_to_minus_one():
    z = Scalar.root_of_unity(3)
    assert z + z ** 2 == Scalar(-1)


def test_mixed_fields_are_lifted():
    i = Scalar.root_of_unity(4)
    minus_one = Scalar.root_of_unity(2)
    assert i * i == minus_one
    assert (i * i).is_rational()


def test_inverse_in_cyclotomic_field():
    z = Scalar.root_of_unity(5)
    a = z + Scalar(2)
    assert a * a.inverse() == Scalar(1)
    assert (Scalar(3) / Scalar(4)).to_fraction() == Fraction(3, 4)


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        Scalar(0).inverse()


def test_scalar_is_immutable():
    s = Scalar(1)
    with pytest.raises(AttributeError):
        s.n = 3


# ------------------ матрицы ------------------ #

def test_rank_of_dependent_rows():
    m = SparseMatrix.from_dense([[1, 2, 3], [2, 4, 6], [1, 0, 1]])
    assert rank(m) == 2
    assert nullity(m) == 1


def test_rank_over_cyclotomic_field():
    z = Scalar.root_of_unity(3)
    m = SparseMatrix.from_dense([[Scalar(1), z], [z, z * z]])
    assert rank(m) == 1


def test_rank_matches_sympy():
    data = [[1, 0, 2, 0], [0, 3, 0, 1], [1, 3, 2, 1], [2, 0, 4, 0]]
    assert rank(SparseMatrix.from_dense(data)) == sympy.Matrix(data).rank()


def test_zero_matrix_has_rank_zero():
    assert rank(SparseMatrix.zero(3, 4)) == 0
    assert SparseMatrix.zero(3, 4).is_zero()


def test_kernel_basis_vectors_are_annihilated():
    m = SparseMatrix.from_dense([[1, 1, 0], [0, 1, 1]])
    basis = kernel_basis(m)
    assert len(basis) == 1
    for v in basis:
        for row in m.dense():
            assert sum((a * b for a, b in zip(row, v)), Scalar(0)).is_zero()


def test_solve_consistent_and_inconsistent():
    m = SparseMatrix.from_dense([[1, 1], [1, -1]])
    x = solve(m, [3, 1])
    assert [v.to_fraction() for v in x] == [2, 1]
    singular = SparseMatrix.from_dense([[1, 1], [2, 2]])
    assert solve(singular, [1, 3]) is None


def test_matmul_and_transpose():
    a = SparseMatrix.from_dense([[1, 2], [0, 1]])
    b = SparseMatrix.identity(2)
    assert (a @ b).dense() == a.dense()
    assert a.transpose().get(1, 0) == Scalar(2)


# ------------------ комплексы ------------------ #

def test_homology_of_circle_chain_complex():
    # C^0 = Q^3 -> C^1 = Q^3, кограница треугольника
    d0 = SparseMatrix.from_dense([[-1, 1, 0], [0, -1, 1], [-1, 0, 1]])
    cx = FiniteComplex(0, (3, 3), (d0,))
    assert homology_dims(cx) == {0: 1, 1: 1}


def test_non_complex_is_rejected():
    d0 = SparseMatrix.from_dense([[1]])
    d1 = SparseMatrix.from_dense([[1]])
    cx = FiniteComplex(0, (1, 1, 1), (d0, d1))
    with pytest.raises(NotAComplex):
        cx.check()


def test_dimension_mismatch_is_rejected():
    with pytest.raises(ValueError):
        FiniteComplex(0, (2, 3), (SparseMatrix.zero(2, 2),))


# ------------------ ряды ------------------ #

def test_torus_point_series():
    assert series_truncate(PoincareSeries.torus_point(1), 6) == [1, 0, 1, 0, 1, 0, 1]
    assert series_truncate(PoincareSeries.torus_point(2), 4) == [1, 0, 2, 0, 3]


def test_series_arithmetic():
    p = PoincareSeries.torus_point(1)
    residual = p - p.shift(2)
    assert series_truncate(residual, 6) == [1, 0, 0, 0, 0, 0, 0]
    assert series_truncate(p * p, 4) == series_truncate(PoincareSeries.torus_point(2), 4)


def test_series_matches_sympy_expansion():
    t = sympy.Symbol("t")
    p = PoincareSeries((1, 0, 1), (1, 0, -1)) * PoincareSeries.torus_point(1)
    expansion = sympy.series((1 + t**2) / (1 - t**2) ** 2, t, 0, 9).removeO()
    expected = [int(expansion.coeff(t, k)) for k in range(9)]
    assert series_truncate(p, 8) == expected


def test_poly_from_truncation():
    assert series_truncate(poly_from_truncation([1, 0, 1]), 4) == [1, 0, 1, 0, 0]
