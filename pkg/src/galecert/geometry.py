"""Gale dual pairs, the polytope of admissible Gale coordinates, and the Gale map.

Coordinates: the rows ``P_i`` of a Gale dual ``D`` of the coefficient matrix
live in ``R^{k+1}`` with a distinguished coordinate 0. The polytope is the
slice ``y_0 = 1`` of the open cone ``{y : <P_i, y> > 0}``; its affine forms
are ``p_i(y) = <P_i, (1, y)>``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Optional, Sequence, Union

import numpy as np

from galecert import linalg, lp
from galecert.linalg import RationalMatrix, shape, sign

UNDETERMINED = "undetermined"


class GeometryError(ValueError):
    pass


class CannotBound(GeometryError):
    pass


class Unbounded(GeometryError):
    pass


class Infeasible(GeometryError):
    pass


@dataclass(frozen=True)
class ExponentConfiguration:
    """Point set in ``R^d`` with its lifted ``(d+1) x n`` matrix."""

    points: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if not self.points:
            raise ValueError("empty configuration")
        d = len(self.points[0])
        if any(len(p) != d for p in self.points):
            raise ValueError("points of mixed dimension")
        object.__setattr__(self, "points", tuple(tuple(Fraction(x) for x in p) for p in self.points))
        if linalg.rank(self.A) != d + 1:
            raise linalg.RankError("lifted exponent matrix is not of full rank d+1")

    @classmethod
    def from_points(cls, points) -> "ExponentConfiguration":
        return cls(tuple(tuple(Fraction(x) for x in p) for p in points))

    @property
    def d(self) -> int:
        return len(self.points[0])

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def k(self) -> int:
        return self.n - self.d - 1

    @property
    def A(self) -> RationalMatrix:
        return [[Fraction(1)] * self.n] + [[p[i] for p in self.points] for i in range(self.d)]

    @property
    def A_prime(self) -> RationalMatrix:
        return self.A[1:]

    @property
    def integer_flag(self) -> bool:
        return all(x.denominator == 1 for p in self.points for x in p)


def lift(points) -> RationalMatrix:
    return ExponentConfiguration.from_points(points).A


@dataclass
class GaleDualPair:
    A: RationalMatrix
    C: RationalMatrix
    B: RationalMatrix
    D: RationalMatrix

    def __post_init__(self):
        self.A = linalg.as_fractions(self.A)
        self.C = linalg.as_fractions(self.C)
        self.B = linalg.as_fractions(self.B)
        self.D = linalg.as_fractions(self.D)

    @property
    def n(self) -> int:
        return len(self.B)

    @property
    def k(self) -> int:
        return shape(self.D)[1] - 1

    @property
    def P(self) -> list[list[Fraction]]:
        return [list(r) for r in self.D]

    def p(self, y: Sequence) -> list:
        """Affine forms ``p_i(y)`` (exact for rational ``y``)."""
        return [row[0] + sum((a * b for a, b in zip(row[1:], y)), 0) for row in self.D]

    def check(self) -> None:
        """Exact Gale-duality invariants; raises on violation."""
        if not linalg.is_zero(linalg.matmul(self.A, self.B)):
            raise GeometryError("A.B != 0")
        if not linalg.is_zero(linalg.matmul(self.C, self.D)):
            raise GeometryError("C.D != 0")
        k = shape(self.A)[1] - shape(self.A)[0]
        if shape(self.B)[1] != k or (k and linalg.rank(self.B) != k):
            raise GeometryError("B is not a Gale dual of A")
        if shape(self.D)[1] != k + 1 or linalg.rank(self.D) != k + 1:
            raise GeometryError("D is not a Gale dual of C")


# -- cone conditions ----------------------------------------------------------


def necessary_condition(C: Sequence[Sequence]) -> bool:
    """``0`` lies in the open positive cone of the columns of ``C``."""
    return linalg.positive_kernel_vector(C) is not None


def open_halfspace_direction(D: Sequence[Sequence]) -> Optional[list[Fraction]]:
    """Some ``y`` with ``<P_i, y> >= 1`` for every row ``P_i`` of ``D``."""
    m = shape(D)[1]
    return lp.feasible_point(m, ge=[(list(r), 1) for r in D])


def in_positive_row_cone(D: Sequence[Sequence], u: Sequence) -> bool:
    """``u`` is a strictly positive combination of the rows of ``D``."""
    n, m = shape(D)
    # lam_i >= 1, lam.D = t u, t >= 1 (homogeneous scaling)
    eq = []
    for j in range(m):
        eq.append(([D[i][j] for i in range(n)] + [-Fraction(u[j])], 0))
    ge = [([int(t == i) for t in range(n + 1)], 1) for i in range(n + 1)]
    return lp.feasible_point(n + 1, eq=eq, ge=ge) is not None


def e0_in_cone(D: Sequence[Sequence]) -> bool:
    m = shape(D)[1]
    return in_positive_row_cone(D, [1] + [0] * (m - 1))


def normalize_gale_dual(D: Sequence[Sequence]) -> RationalMatrix:
    """Right-multiply ``D`` by an invertible ``R`` so that ``e_0`` is in the row cone.

    Returns ``D`` unchanged when ``e_0`` already qualifies.
    """
    D = linalg.as_fractions(D)
    n, m = shape(D)
    if open_halfspace_direction(D) is None:
        raise CannotBound("cannot bound: rows of D do not lie in an open halfspace")
    if e0_in_cone(D):
        return D
    u = [sum((D[i][j] for i in range(n)), Fraction(0)) for j in range(m)]
    # rows of R^{-1}: u, then unit vectors completing a basis
    rows = [u]
    for j in range(m):
        cand = rows + [[Fraction(int(t == j)) for t in range(m)]]
        if linalg.rank(cand) == len(cand):
            rows = cand
        if len(rows) == m:
            break
    R = linalg.inverse(rows)
    return linalg.matmul(D, R)


def augment_with_positive_vector(C: Sequence[Sequence], D_tilde: Sequence[Sequence]) -> RationalMatrix:
    """Prepend a positive kernel vector of ``C`` outside the span of ``D_tilde``."""
    C = linalg.as_fractions(C)
    D_tilde = linalg.as_fractions(D_tilde)
    d, n = shape(C)
    if not D_tilde:
        D_tilde = [[] for _ in range(n)]
    k = shape(D_tilde)[1]
    if len(D_tilde) != n:
        raise GeometryError("D_tilde has the wrong number of rows")
    if k and not linalg.is_zero(linalg.matmul(C, D_tilde)):
        raise GeometryError("C.D_tilde != 0")
    if k and linalg.rank(D_tilde) != k:
        raise GeometryError("D_tilde is not of full column rank")
    if k + 1 != n - linalg.rank(C):
        raise GeometryError("D_tilde must have exactly dim ker(C) - 1 columns")
    if k and linalg.positive_left_kernel_vector(D_tilde) is None:
        raise GeometryError("rows of D_tilde do not positively span the origin")
    v = linalg.positive_kernel_vector(C)
    if v is None:
        raise GeometryError("no positive vector in ker(C)")
    cols = linalg.columns(D_tilde) if k else []
    if k and linalg.rank(cols + [v]) == k:
        kernel = linalg.nullspace(C)
        w = next(w for w in kernel if linalg.rank(cols + [w]) == k + 1)
        t = min(v) / (2 * max(abs(x) for x in w))
        v = [a + t * b for a, b in zip(v, w)]
    v = linalg.primitive(v)
    D = [[v[i]] + (list(D_tilde[i]) if k else []) for i in range(n)]
    return D


# -- facets and the polytope --------------------------------------------------


def _check_rows(D) -> None:
    n = len(D)
    for i in range(n):
        if all(x == 0 for x in D[i]):
            raise GeometryError(f"row {i} of D vanishes (C is not uniform)")
    for i, j in combinations(range(n), 2):
        if linalg.rank([D[i], D[j]]) == 1 and sum(a * b for a, b in zip(D[i], D[j])) > 0:
            raise GeometryError(f"rows {i} and {j} of D are positively parallel; I_C is ambiguous")


def compute_IC(D: Sequence[Sequence]) -> tuple[int, ...]:
    """Indices (0-based) of the minimal generators of the row cone of ``D``."""
    D = linalg.as_fractions(D)
    n, m = shape(D)
    if m >= 2:
        _check_rows(D)
    if open_halfspace_direction(D) is None:
        raise GeometryError("rows of D do not lie in an open halfspace")
    out = []
    for i in range(n):
        others = [j for j in range(n) if j != i]
        eq = [([D[j][c] for j in others], D[i][c]) for c in range(m)]
        if lp.feasible_point(len(others), eq=eq, nonneg=range(len(others))) is None:
            out.append(i)
    return tuple(out)


@dataclass
class DeltaPolytope:
    k: int
    facet_index_set: tuple[int, ...]
    vertices: list[tuple[Fraction, ...]]
    incidence: list[frozenset[int]]
    face_lattice: dict[frozenset[int], tuple[int, ...]] = field(default_factory=dict)
    bounded: bool = True
    full_dimensional: bool = True

    def faces(self) -> list[frozenset[int]]:
        return sorted(self.face_lattice, key=lambda L: (len(L), sorted(L)))

    def barycenter(self, L: Optional[frozenset[int]] = None) -> tuple[Fraction, ...]:
        idx = range(len(self.vertices)) if L is None else self.face_lattice[frozenset(L)]
        pts = [self.vertices[i] for i in idx]
        return tuple(sum((p[t] for p in pts), Fraction(0)) / len(pts) for t in range(self.k))

    def bounding_box(self) -> tuple[list[float], list[float]]:
        V = np.array([[float(x) for x in v] for v in self.vertices]).reshape(len(self.vertices), self.k)
        return V.min(axis=0).tolist(), V.max(axis=0).tolist()


def is_full_dimensional(D: Sequence[Sequence]) -> bool:
    """Nonempty interior of the slice ``y_0 = 1`` (homogenized LP)."""
    m = shape(D)[1]
    ge = [(list(r), 1) for r in D] + [([1] + [0] * (m - 1), 1)]
    return lp.feasible_point(m, ge=ge) is not None


def is_bounded(D: Sequence[Sequence]) -> bool:
    """No nonzero recession direction of ``{y : p_i(y) >= 0}``."""
    n, m = shape(D)
    k = m - 1
    tails = [list(r[1:]) for r in D]
    for j in range(k):
        for s in (1, -1):
            e = [0] * k
            e[j] = s
            if lp.feasible_point(k, ge=[(t, 0) for t in tails] + [(e, 1)]) is not None:
                return False
    return True


def build_delta(D: Sequence[Sequence], IC: Optional[Sequence[int]] = None) -> DeltaPolytope:
    """Vertices, incidences and face lattice of the closed polytope."""
    D = linalg.as_fractions(D)
    n, m = shape(D)
    k = m - 1
    if not is_full_dimensional(D):
        raise Infeasible("infeasible: the polytope has empty interior")
    if not is_bounded(D):
        raise Unbounded("unbounded polytope; normalize the Gale dual first")
    if IC is None:
        IC = compute_IC(D)
    IC = tuple(IC)

    def p(i, y):
        return D[i][0] + sum((a * b for a, b in zip(D[i][1:], y)), Fraction(0))

    verts: list[tuple[Fraction, ...]] = []
    if k == 0:
        verts = [()]
    else:
        seen = set()
        for S in combinations(IC, k):
            y = linalg.solve_square([D[i][1:] for i in S], [-D[i][0] for i in S])
            if y is None:
                continue
            y = tuple(y)
            if y in seen:
                continue
            if all(p(i, y) >= 0 for i in range(n)):
                seen.add(y)
                verts.append(y)
        verts.sort()
    incidence = [frozenset(i for i in IC if p(i, v) == 0) for v in verts]
    lattice: dict[frozenset[int], list[int]] = {}
    for vi, T in enumerate(incidence):
        for r in range(1, len(T) + 1):
            for L in combinations(sorted(T), r):
                lattice.setdefault(frozenset(L), []).append(vi)
    return DeltaPolytope(
        k=k,
        facet_index_set=IC,
        vertices=verts,
        incidence=incidence,
        face_lattice={L: tuple(v) for L, v in lattice.items()},
    )


# -- the Gale map -------------------------------------------------------------

Number = Union[int, Fraction, float]


def gale_map(pair: GaleDualPair, y: Sequence[Number], exact: Optional[bool] = None) -> list:
    """``g_j(y) = prod_{b>0} p_i^b - prod_{b<0} p_i^{-b}``.

    Exact when ``y`` is rational and the exponents are integers; floats
    otherwise. Denominators are already cleared, so ``p_i(y) = 0`` is
    allowed; non-integer exponents need ``p_i(y) >= 0``.
    """
    B = pair.B
    int_B = all(x.denominator == 1 for row in B for x in row)
    if exact is None:
        exact = int_B and all(isinstance(v, (int, Fraction)) for v in y)
    if exact:
        pv = pair.p([Fraction(v) for v in y])
    else:
        pv = [float(v) for v in pair.p([float(v) for v in y])]
    out = []
    for j in range(shape(B)[1]):
        pos = Fraction(1) if exact else 1.0
        neg = Fraction(1) if exact else 1.0
        for i in range(len(B)):
            b = B[i][j]
            if b == 0:
                continue
            base = pv[i]
            if b.denominator != 1 and base < 0:
                raise GeometryError("non-integer exponent needs p_i(y) >= 0")
            e = abs(b)
            if exact:
                term = base ** int(e)
            else:
                term = math.pow(base, float(e)) if e.denominator != 1 else base ** int(e)
            if b > 0:
                pos *= term
            else:
                neg *= term
        out.append(pos - neg)
    return out


def gale_residual(pair: GaleDualPair, y: Sequence[float]) -> list[float]:
    """Relative residual ``|g_j| / max(prod_+, prod_-)`` per equation (float)."""
    pv = [float(v) for v in pair.p([float(v) for v in y])]
    out = []
    for j in range(shape(pair.B)[1]):
        lp_pos = lp_neg = 0.0
        for i, row in enumerate(pair.B):
            b = float(row[j])
            if b == 0:
                continue
            if pv[i] <= 0:
                return [math.inf] * shape(pair.B)[1]
            if b > 0:
                lp_pos += b * math.log(pv[i])
            else:
                lp_neg -= b * math.log(pv[i])
        out.append(abs(-math.expm1(lp_neg - lp_pos)) if lp_pos >= lp_neg else abs(math.expm1(lp_pos - lp_neg)))
    return out


def boundary_sign(pair: GaleDualPair, delta: DeltaPolytope, L, j: int) -> Union[int, str]:
    """Sign of ``g_j`` on the face ``F_L`` read off from column ``j`` of ``B``.

    Returns ``+1``/``-1``, ``0`` (forced zero), or :data:`UNDETERMINED` when
    every ``b_lj`` on ``L`` vanishes and the sign is not determined.
    """
    L = frozenset(L)
    if L not in delta.face_lattice:
        raise GeometryError(f"{sorted(L)} is not a face")
    vals = [pair.B[l][j] for l in L]
    if all(v == 0 for v in vals):
        return UNDETERMINED
    if len(L) == 1:
        return -sign(vals[0])
    if any(v > 0 for v in vals) and any(v < 0 for v in vals):
        return 0
    return -1 if all(v >= 0 for v in vals) else 1
