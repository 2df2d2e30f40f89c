from __future__ import annotations

import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import assume, given
from hypothesis import strategies as st

from conftest import lp_feasible
from galecert import corpus, geometry, linalg
from galecert.geometry import GaleDualPair

F = Fraction


def pair_for(c) -> GaleDualPair:
    inst = corpus.three_roots(c)
    return GaleDualPair(geometry.lift(inst.points), inst.C, inst.B, inst.D)


@pytest.mark.parametrize("c", [F(1, 10), F(1, 2), F(1), F(8, 7), F(5), F(-1)])
def test_hand_made_gale_pair_is_exact(c):
    pair = pair_for(c)
    pair.check()
    assert linalg.is_zero(linalg.matmul(pair.A, pair.B))
    assert linalg.is_zero(linalg.matmul(pair.C, pair.D))


def polygon_vertices_oracle(D):
    """Intersect every pair of lines with sympy and keep the feasible points."""
    rows = [[sympy.Rational(x.numerator, x.denominator) for x in r] for r in D]
    y1, y2 = sympy.symbols("y1 y2")
    out = set()
    for i in range(len(rows)):
        for j in range(i + 1, len(rows)):
            sol = sympy.solve([rows[i][0] + rows[i][1] * y1 + rows[i][2] * y2,
                               rows[j][0] + rows[j][1] * y1 + rows[j][2] * y2], [y1, y2], dict=True)
            if len(sol) != 1 or len(sol[0]) != 2:
                continue
            p = (sol[0][y1], sol[0][y2])
            if all(r[0] + r[1] * p[0] + r[2] * p[1] >= 0 for r in rows):
                out.add((F(int(p[0].p), int(p[0].q)), F(int(p[1].p), int(p[1].q))))
    return out


@pytest.mark.parametrize("c", [F(1, 10), F(1, 2), F(1), F(8, 7), F(5)])
def test_polygon_vertices(c):
    delta = geometry.build_delta(pair_for(c).D)
    got = set(delta.vertices)
    # frozen closed form, checked against sympy line intersections
    expected = {(F(-1), F(1)), (F(-1), (c + 4) / 4), (F(-1, 3), F(-1, 3)), (F(1), F(-1)), ((c + 4) / 4, F(-1))}
    assert got == expected
    assert got == polygon_vertices_oracle(pair_for(c).D)


def test_all_five_rows_are_facets_and_lattice_has_ten_faces():
    delta = geometry.build_delta(pair_for(F(1, 2)).D)
    assert delta.facet_index_set == (0, 1, 2, 3, 4)
    faces = delta.faces()
    assert len(faces) == 10
    assert sum(1 for L in faces if len(L) == 1) == 5


def test_gale_map_is_exact_at_rational_points():
    pair = pair_for(F(1, 2))
    y = [F(1, 7), F(-1, 5)]
    p = pair.p(y)
    g = geometry.gale_map(pair, y)
    assert g[0] == p[0] * p[1] ** 2 * p[2] - p[4] ** 4
    assert g[1] == p[1] * p[2] ** 2 * p[3] - p[4] ** 4
    assert all(isinstance(v, Fraction) for v in g)


def test_boundary_signs_agree_with_exact_evaluation():
    pair = pair_for(F(1, 2))
    delta = geometry.build_delta(pair.D)
    checked = 0
    for L in delta.faces():
        y = delta.barycenter(L)
        g = geometry.gale_map(pair, y)
        for j in range(pair.k):
            s = geometry.boundary_sign(pair, delta, L, j)
            if s in (1, -1):
                assert linalg.sign(g[j]) == s
                checked += 1
            elif s == 0:
                assert g[j] == 0
    assert checked > 0


def full_dimensional_samples(seed: int, count: int):
    rng = random.Random(seed)
    made = 0
    while made < count:
        n = rng.randint(3, 6)
        k = rng.randint(1, min(2, n - 2))
        D = corpus.random_gale_matrix(rng, n, k, bound=4)
        if geometry.is_full_dimensional(D):
            made += 1
            yield D


@given(st.integers(0, 10**6))
def test_boundedness_matches_e0_in_cone(seed):
    for D in full_dimensional_samples(seed, 3):
        assert geometry.is_bounded(D) == geometry.e0_in_cone(D)


@given(st.integers(0, 10**6))
def test_normalized_dual_is_bounded_and_spans_the_same_space(seed):
    rng = random.Random(seed)
    inst = corpus.random_instance(rng, rng.choice([1, 2]), 5)
    assume(geometry.necessary_condition(inst.C))
    K = linalg.kernel_basis(inst.C)
    D = geometry.normalize_gale_dual(K)
    assert linalg.is_zero(linalg.matmul(inst.C, D))
    assert linalg.rank(D) == len(D[0]) == len(K[0])
    assert geometry.e0_in_cone(D)
    assert geometry.is_bounded(D)


@given(st.integers(0, 10**6))
def test_facet_indices_match_strict_lp_oracle(seed):
    for D in full_dimensional_samples(seed, 2):
        if not geometry.is_bounded(D):
            continue
        try:
            IC = geometry.compute_IC(D)
        except geometry.GeometryError:
            continue  # parallel rows
        n, m = len(D), len(D[0])
        for i in range(n):
            # facet iff p_i = 0 and all other p_j > 0 at some point with y_0 > 0
            A_ub = [[-x for x in D[j]] for j in range(n) if j != i] + [[-1] + [0] * (m - 1)]
            b_ub = [-1] * n
            oracle = lp_feasible(m, A_ub, b_ub, [list(D[i])], [0])
            assert (i in IC) == oracle


def test_augment_with_positive_vector_builds_a_gale_dual():
    C = [[1, -2, 1, 1]]
    Dt = [[-5, -4], [-4, -1], [1, 0], [-4, 2]]  # columns in ker C, rows surround the origin
    assert linalg.positive_left_kernel_vector(Dt) is not None
    D = geometry.augment_with_positive_vector(C, Dt)
    assert linalg.is_zero(linalg.matmul(C, D))
    assert linalg.rank(D) == 3
    assert all(r[0] > 0 for r in D)
    assert [r[1:] for r in D] == linalg.as_fractions(Dt)
    assert geometry.e0_in_cone(D)


def test_augment_rejects_wrong_width():
    with pytest.raises(geometry.GeometryError):
        geometry.augment_with_positive_vector([[1, -1, 1, -1]], [[1], [1], [0], [0]])


def test_unbounded_and_empty_polytopes_are_reported():
    with pytest.raises(geometry.Unbounded):
        geometry.build_delta([[1, 1], [1, 0], [1, 2]])
    with pytest.raises(geometry.Infeasible):
        geometry.build_delta([[-1, 1], [-1, -1]])


def test_cannot_bound_when_rows_surround_the_origin():
    with pytest.raises(geometry.CannotBound):
        geometry.normalize_gale_dual([[1, 0], [-1, 0], [0, 1], [0, -1]])


def test_augment_with_no_gale_columns_gives_a_positive_kernel_column():
    D = geometry.augment_with_positive_vector([[1, -1]], [[], []])
    assert D == [[1], [1]]


def test_augment_rejects_columns_outside_the_kernel():
    with pytest.raises(geometry.GeometryError):
        geometry.augment_with_positive_vector([[1, -1, 0], [0, 1, -1]], [[1], [0], [-1]])
