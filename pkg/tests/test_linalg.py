from __future__ import annotations

from fractions import Fraction
from math import gcd

import pytest
import sympy
from hypothesis import assume, given
from hypothesis import strategies as st

from conftest import int_matrices, rational_matrices, lp_feasible
from galecert import linalg


def to_sympy(M):
    return sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) if isinstance(x, Fraction) else x for x in r] for r in M])


@given(rational_matrices(3, 4))
def test_rank_and_rref_match_sympy(M):
    R, piv = linalg.rref(M)
    S, spiv = to_sympy(M).rref()
    assert linalg.rank(M) == to_sympy(M).rank()
    assert tuple(piv) == tuple(spiv)
    assert to_sympy(R) == S


@given(rational_matrices(3, 3))
def test_det_and_inverse_match_sympy(M):
    d = linalg.det(M)
    assert to_sympy([[d]])[0] == to_sympy(M).det()
    if d != 0:
        inv = linalg.inverse(M)
        assert linalg.matmul(M, inv) == [[Fraction(int(i == j)) for j in range(3)] for i in range(3)]
    else:
        assert linalg.solve_square(M, [1, 2, 3]) is None or linalg.matvec(M, linalg.solve_square(M, [1, 2, 3])) == [1, 2, 3]


@given(rational_matrices(2, 5))
def test_nullspace_is_a_kernel_basis(M):
    N = linalg.nullspace(M, 5)
    assert len(N) == 5 - linalg.rank(M)
    for v in N:
        assert all(x == 0 for x in linalg.matvec(M, v))
    if N:
        assert linalg.rank(N) == len(N)


def test_kernel_basis_needs_full_rank():
    with pytest.raises(linalg.RankError):
        linalg.kernel_basis([[1, 2, 3], [2, 4, 6]])


@given(int_matrices(2, 5, -4, 4))
def test_z_gale_dual_is_a_lattice_basis(Ap):
    A = [[1] * 5] + Ap[:1]
    A = [A[0], Ap[0]]
    assume(linalg.rank(A) == 2)
    B = linalg.z_gale_dual(A)
    assert linalg.shape(B) == (5, 3)
    assert linalg.is_zero(linalg.matmul(A, B))
    assert linalg.rank(B) == 3
    # saturated lattice: maximal minors have gcd one
    assert linalg.minors_gcd(B) == 1


def test_z_gale_dual_of_a_known_configuration():
    # 1, x, x^3: relations spanned by (2, -3, 1)
    B = linalg.z_gale_dual([[1, 1, 1], [0, 1, 3]])
    assert [r[0] for r in B] in ([2, -3, 1], [-2, 3, -1])


def gf2_rank(M):
    rows = [int("".join(str(x % 2) for x in r), 2) for r in M]
    rank = 0
    for bit in reversed(range(len(M[0]))):
        pivot = next((r for r in rows if r >> bit & 1), None)
        if pivot is None:
            continue
        rows.remove(pivot)
        rows = [r ^ pivot if r >> bit & 1 else r for r in rows]
        rank += 1
    return rank


@given(int_matrices(3, 5, -4, 4))
def test_rank_mod2_matches_bitmask_elimination(M):
    assert linalg.rank_mod2(M) == gf2_rank(M)


@given(st.lists(st.lists(st.integers(-6, 6), min_size=3, max_size=3), min_size=2, max_size=3))
def test_lll_preserves_the_lattice(basis):
    assume(sympy.Matrix(basis).rank() == len(basis))
    red = linalg.lll_reduce(basis)
    # same lattice: each basis expresses the other with integer coefficients
    Bm, Rm = sympy.Matrix(basis), sympy.Matrix(red)
    T = Rm * Bm.T * (Bm * Bm.T).inv()
    assert all(x.is_integer for x in T)
    assert abs((Rm * Rm.T).det()) == abs((Bm * Bm.T).det())


@given(rational_matrices(2, 4, 4), st.lists(st.sampled_from([-1, 0, 1]), min_size=4, max_size=4))
def test_sign_realizability_matches_independent_lp(C, sigma):
    assume(any(sigma))
    w = linalg.sign_realizable(C, sigma)
    A_ub, b_ub = [], []
    A_eq = [list(r) for r in C]
    b_eq = [0, 0]
    for i, s in enumerate(sigma):
        e = [0] * 4
        e[i] = 1
        if s == 0:
            A_eq.append(e)
            b_eq.append(0)
        else:
            A_ub.append([-s * x for x in e])
            b_ub.append(-1)
    assert (w is not None) == lp_feasible(4, A_ub, b_ub, A_eq, b_eq)
    if w is not None:
        assert linalg.sign_vector(w) == tuple(sigma)
        assert all(x == 0 for x in linalg.matvec(C, w))


@given(rational_matrices(1, 4, 5))
def test_positive_kernel_vector_is_positive(C):
    v = linalg.positive_kernel_vector(C)
    has_both = any(x > 0 for x in C[0]) and any(x < 0 for x in C[0])
    all_zero = all(x == 0 for x in C[0])
    assert (v is not None) == (has_both or all_zero)
    if v is not None:
        assert all(x >= 1 for x in v)
        assert sum(a * b for a, b in zip(C[0], v)) == 0


def test_positive_left_kernel_of_empty_matrix():
    assert linalg.positive_left_kernel_vector([[], []]) == [1, 1]


def test_is_uniform():
    assert linalg.is_uniform([[1, 2, 3], [1, -1, 4]])
    assert not linalg.is_uniform([[1, 2, 3], [2, 4, 5]])


@given(st.lists(st.integers(-30, 30), min_size=2, max_size=5))
def test_primitive_vector(v):
    assume(any(v))
    p = linalg.primitive(v)
    g = 0
    for x in p:
        g = gcd(g, int(x))
    assert g == 1
    ratio = [Fraction(a) / b for a, b in zip(v, p) if b != 0]
    assert len(set(ratio)) == 1 and ratio[0] > 0
