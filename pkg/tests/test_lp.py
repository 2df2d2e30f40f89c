from __future__ import annotations

from fractions import Fraction
from itertools import combinations

import sympy
from hypothesis import given
from hypothesis import strategies as st

from conftest import int_matrices
from galecert import lp


def basic_feasible_solutions(A, b):
    """Oracle: enumerate bases with sympy and keep the nonnegative ones."""
    m, n = len(A), len(A[0])
    M = sympy.Matrix(A)
    r = M.rank()
    rows = list(range(m))
    # drop dependent rows so bases are square
    keep = []
    for i in rows:
        if sympy.Matrix([A[j] for j in keep + [i]]).rank() > len(keep):
            keep.append(i)
    if sympy.Matrix([A[i] + [b[i]] for i in range(m)]).rank() > r:
        return []
    Ak = [A[i] for i in keep]
    bk = [b[i] for i in keep]
    out = []
    for S in combinations(range(n), len(keep)):
        sub = sympy.Matrix([[row[j] for j in S] for row in Ak])
        if sub.det() == 0:
            continue
        xs = sub.LUsolve(sympy.Matrix(bk))
        if all(v >= 0 for v in xs):
            x = [sympy.Rational(0)] * n
            for j, v in zip(S, xs):
                x[j] = v
            out.append(x)
    return out


def test_known_optimum():
    # min x + y  s.t.  x + 2y >= 2, 3x + y >= 3, x, y >= 0: vertex (4/5, 3/5)
    res = lp.solve(2, ge=[([1, 2], 2), ([3, 1], 3)], nonneg=[0, 1], minimize=[1, 1])
    assert res.status == lp.OPTIMAL
    assert res.x == [Fraction(4, 5), Fraction(3, 5)]
    assert res.value == Fraction(7, 5)


def test_infeasible_and_unbounded():
    assert lp.solve(1, ge=[([1], 2), ([-1], -1)]).status == lp.INFEASIBLE
    assert lp.solve(1, ge=[([1], 0)], minimize=[-1]).status == lp.UNBOUNDED
    assert lp.feasible_point(2, eq=[([1, 1], 1)], nonneg=[0, 1]) is not None


def test_free_variables_reach_negative_values():
    res = lp.solve(1, ge=[([1], -3)], minimize=[1])
    assert res.status == lp.OPTIMAL and res.x == [Fraction(-3)]


@given(int_matrices(2, 4, -3, 3), st.lists(st.integers(-3, 3), min_size=2, max_size=2))
def test_standard_form_feasibility_matches_basis_enumeration(A, b):
    res = lp.solve_standard(A, b)
    bfs = basic_feasible_solutions(A, b)
    assert res.feasible == bool(bfs)
    if res.feasible:
        x = res.x
        assert all(v >= 0 for v in x)
        assert all(sum(a * v for a, v in zip(row, x)) == rhs for row, rhs in zip(A, b))


@given(int_matrices(2, 4, 0, 3), st.lists(st.integers(1, 4), min_size=2, max_size=2),
       st.lists(st.integers(0, 4), min_size=4, max_size=4))
def test_optimum_matches_best_vertex(A, b, c):
    # nonnegative costs keep the problem bounded whenever it is feasible
    res = lp.solve_standard(A, b, c)
    bfs = basic_feasible_solutions(A, b)
    if not bfs:
        assert res.status == lp.INFEASIBLE
        return
    best = min(sum(ci * xi for ci, xi in zip(c, x)) for x in bfs)
    assert res.status == lp.OPTIMAL
    assert res.value == Fraction(int(best.p), int(best.q))
