from fractions import Fraction as F

import pytest
import sympy
from hypothesis import given, settings, strategies as st
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from signedchip.errors import DimensionError, IntegralityError, SingularMatrixError
from signedchip.linalg import (
    Matrix,
    adjugate,
    det,
    hermite_lower,
    invert,
    mat_mul,
    mat_vec,
    smith_normal_form,
    solve,
)

L_G = Matrix([[2, 1, 0], [1, 3, -1], [0, -1, 2]])
M_G = Matrix([[2, -1, 0], [-1, 3, -1], [0, -1, 2]])
L_H = Matrix([[3, 1, -1], [1, 2, -1], [-1, -1, 3]])
M_H = Matrix([[3, -1, -1], [-1, 2, -1], [-1, -1, 3]])


def square(max_n=6, lo=-6, hi=6):
    return st.integers(1, max_n).flatmap(
        lambda n: st.lists(st.lists(st.integers(lo, hi), min_size=n, max_size=n),
                           min_size=n, max_size=n))


def test_det_examples():
    assert det(Matrix([[2, 1], [1, 2]])) == 3
    assert det(L_G) == 8
    assert det(L_H) == 12
    for n in range(5):
        assert det(Matrix.identity(n)) == 1


def test_det_needs_pivot_swap():
    assert det(Matrix([[0, 1], [1, 0]])) == -1
    assert det(Matrix([[0, 0], [1, 0]])) == 0


def test_det_rational():
    assert det(Matrix([[F(1, 2), 0], [0, F(2, 3)]])) == F(1, 3)


def test_det_non_square():
    with pytest.raises(DimensionError):
        det(Matrix([[1, 2]]))


def test_invert_examples():
    assert invert(Matrix([[2, 1], [1, 2]])) == Matrix([[F(2, 3), F(-1, 3)], [F(-1, 3), F(2, 3)]])
    assert invert(Matrix.identity(4)) == Matrix.identity(4)
    assert L_G @ invert(M_G) == Matrix([[F(3, 2), 1, F(1, 2)], [F(5, 4), F(3, 2), F(1, 4)], [0, 0, 1]])


def test_ml_inv_vectors():
    assert mat_vec(M_G @ invert(L_G), (1, 1, 1)) == (0, F(1, 2), 1)
    assert mat_vec(M_H @ invert(L_H), (1, 0, 1)) == (1, -1, 1)
    assert mat_vec(Matrix.identity(3), (4, -2, 7)) == (4, -2, 7)


def test_invert_singular():
    with pytest.raises(SingularMatrixError):
        invert(Matrix([[1, 2], [2, 4]]))


def test_adjugate_and_solve():
    adj = adjugate(L_G)
    assert adj.is_integral()
    assert L_G @ adj == Matrix.identity(3).scale(8)
    x = solve(L_G, (1, 1, 1))
    assert mat_vec(L_G, x) == (1, 1, 1)


def test_matrix_is_structural():
    assert Matrix([[F(2, 1)]]) == Matrix([[2]])
    assert isinstance(Matrix([[F(4, 2)]])[0, 0], int)
    with pytest.raises(DimensionError):
        Matrix([[1, 2], [3]])
    with pytest.raises(DimensionError):
        mat_mul(Matrix([[1, 2]]), Matrix([[1, 2]]))


def test_snf_examples():
    assert smith_normal_form(Matrix([[2, 1], [1, 2]])).d == (1, 3)
    assert smith_normal_form(Matrix.identity(4)).d == (1, 1, 1, 1)
    assert smith_normal_form(L_H).d == (1, 1, 12)
    assert smith_normal_form(L_G).d == (1, 1, 8)
    with pytest.raises(IntegralityError):
        smith_normal_form(Matrix([[F(1, 2)]]))


def _check_snf(a):
    res = smith_normal_form(a)
    n = a.rows
    assert res.u @ a @ res.v == Matrix.diagonal(list(res.d))
    assert abs(det(res.u)) == 1 and abs(det(res.v)) == 1
    for i in range(n - 1):
        if res.d[i] == 0:
            assert res.d[i + 1] == 0
        else:
            assert res.d[i + 1] % res.d[i] == 0
    assert all(x >= 0 for x in res.d)
    return res


@settings(max_examples=150, deadline=None)
@given(square())
def test_snf_properties_against_sympy(rows):
    a = Matrix(rows)
    res = _check_snf(a)
    expected = sympy_snf(sympy.Matrix(rows), domain=sympy.ZZ)
    assert tuple(abs(int(expected[i, i])) for i in range(a.rows)) == res.d


@settings(max_examples=150, deadline=None)
@given(square())
def test_det_and_inverse_against_sympy(rows):
    a = Matrix(rows)
    d = det(a)
    assert d == int(sympy.Matrix(rows).det())
    if d:
        inv = invert(a)
        assert a @ inv == Matrix.identity(a.rows)
        assert inv @ a == Matrix.identity(a.rows)
    else:
        with pytest.raises(SingularMatrixError):
            invert(a)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 5).flatmap(
    lambda n: st.tuples(*[st.lists(st.lists(st.integers(-5, 5), min_size=n, max_size=n),
                                   min_size=n, max_size=n)] * 2)))
def test_det_multiplicative(pair):
    a, b = Matrix(pair[0]), Matrix(pair[1])
    assert det(a @ b) == det(a) * det(b)


@settings(max_examples=100, deadline=None)
@given(square(max_n=5))
def test_hermite_lower(rows):
    a = Matrix(rows)
    if det(a) == 0:
        with pytest.raises(SingularMatrixError):
            hermite_lower(a)
        return
    h = hermite_lower(a)
    n = a.rows
    for i in range(n):
        assert h[i, i] > 0
        for j in range(i + 1, n):
            assert h[i, j] == 0
        for j in range(i):
            assert 0 <= h[i, j] < h[i, i]
    # same column lattice: each basis expresses the other integrally
    assert (invert(h) @ a).is_integral()
    assert (invert(a) @ h).is_integral()
    assert abs(det(h)) == abs(det(a))
