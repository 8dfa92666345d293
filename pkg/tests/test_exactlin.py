from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from cobordcalc.exactlin import (Cyclotomic, Matrix, column_space_basis, cokernel_data,
                                 cyclotomic_polynomial, intersection_basis, inverse,
                                 invariant_factors, kernel_basis, rank, rref,
                                 smith_normal_form, solve, subspace_combine)


def int_matrices(max_rows=5, max_cols=5, lo=-4, hi=4):
    return st.integers(1, max_rows).flatmap(lambda m: st.integers(1, max_cols).flatmap(
        lambda n: st.lists(st.lists(st.integers(lo, hi), min_size=n, max_size=n),
                           min_size=m, max_size=m)))


def sym(rows):
    return sympy.Matrix(rows)


@given(int_matrices())
def test_rank_matches_sympy(rows):
    assert rank(Matrix(rows)) == sym(rows).rank()


@given(int_matrices())
def test_rref_matches_sympy(rows):
    R, piv = rref(Matrix(rows))
    R2, piv2 = sym(rows).rref()
    assert tuple(piv) == tuple(piv2)
    assert [[Fraction(int(x.p), int(x.q)) for x in R2.row(i)] for i in range(R2.rows)] == \
        [list(map(Fraction, r)) for r in R.rows]


@given(int_matrices())
def test_kernel_is_exact(rows):
    A = Matrix(rows)
    K = kernel_basis(A)
    assert K.ncols == A.ncols - rank(A)
    assert (A @ K).is_zero()
    assert rank(K) == K.ncols


@given(int_matrices())
def test_cokernel_projection(rows):
    A = Matrix(rows)
    P, c = cokernel_data(A)
    assert c == A.nrows - rank(A)
    assert (P @ A).is_zero()
    assert rank(P) == c


@given(int_matrices(), int_matrices())
def test_subspace_dimensions(r1, r2):
    m = len(r1)
    V1 = Matrix(r1)
    V2 = Matrix([row[:1] * len(r2[0]) for row in r1]) if len(r2) != m else Matrix(r2)
    d = subspace_combine(V1, V2, m)
    assert d["sumDim"] + d["intersectionDim"] == rank(V1) + rank(V2)
    assert d["codimOfSum"] == m - d["sumDim"]
    B = intersection_basis(V1, V2)
    assert rank(B) == d["intersectionDim"]
    # every intersection vector lies in both spans
    assert rank(V1.hstack(B)) == rank(V1) and rank(V2.hstack(B)) == rank(V2)


@given(int_matrices(4, 4))
def test_solve_and_inverse(rows):
    A = Matrix(rows)
    b = A @ Matrix([[1]] * A.ncols)
    X = solve(A, b)
    assert X is not None and A @ X == b
    if A.nrows == A.ncols:
        if rank(A) == A.nrows:
            assert A @ inverse(A) == Matrix.identity(A.nrows)
        else:
            with pytest.raises(ZeroDivisionError):
                inverse(A)


def test_column_space_basis_keeps_original_columns():
    A = Matrix([[1, 2, 0], [2, 4, 1]])
    B = column_space_basis(A)
    assert B == Matrix([[1, 0], [2, 1]])


@settings(max_examples=60)
@given(int_matrices(4, 4, -6, 6))
def test_smith_form_matches_sympy(rows):
    A = Matrix(rows)
    U, D, V = smith_normal_form(A)
    assert U @ A @ V == D
    f = invariant_factors(A)
    assert all(b % a == 0 for a, b in zip(f, f[1:]))
    from sympy.matrices.normalforms import smith_normal_form as snf
    S = snf(sym(rows), domain=sympy.ZZ)
    ref = [abs(int(S[i, i])) for i in range(min(S.shape)) if S[i, i] != 0]
    assert f == ref


def test_smith_rejects_fractions():
    with pytest.raises(ValueError):
        smith_normal_form(Matrix([[Fraction(1, 2)]]))


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6, 8, 9, 12])
def test_cyclotomic_polynomials(n):
    x = sympy.Symbol("x")
    ref = sympy.Poly(sympy.cyclotomic_poly(n, x), x).all_coeffs()[::-1]
    assert list(cyclotomic_polynomial(n)) == [int(c) for c in ref]


coeffs = st.lists(st.integers(-5, 5), min_size=1, max_size=4)


@given(coeffs, coeffs, coeffs)
def test_cyclotomic_field_axioms(a, b, c):
    x, y, z = Cyclotomic(12, a), Cyclotomic(12, b), Cyclotomic(12, c)
    assert (x + y) * z == x * z + y * z
    assert (x * y) * z == x * (y * z)
    if y:
        assert (x / y) * y == x


@given(coeffs, coeffs)
def test_cyclotomic_product_matches_sympy(a, b):
    n = 5
    t = sympy.Symbol("t")
    phi = sympy.cyclotomic_poly(n, t)
    pa = sum(c * t ** k for k, c in enumerate(a))
    pb = sum(c * t ** k for k, c in enumerate(b))
    ref = sympy.Poly(sympy.rem(sympy.expand(pa * pb), phi, t), t).all_coeffs()[::-1]
    got = (Cyclotomic(n, a) * Cyclotomic(n, b)).coeffs
    ref = [sympy.Rational(r) for r in ref] + [0] * (len(got) - len(ref))
    assert [Fraction(int(r.p), int(r.q)) for r in map(sympy.Rational, ref)] == list(got)


def test_roots_of_unity():
    q = Cyclotomic.zeta(3)
    assert q ** 3 == 1 and q != 1
    assert 1 + q + q ** 2 == 0
    assert (q ** -1) * q == 1
    i = Cyclotomic.zeta(4)
    assert i * i == -1
