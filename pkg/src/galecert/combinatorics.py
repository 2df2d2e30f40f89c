"""Sign-pattern combinatorics of Gale duals.

Mixed / weakly mixed / dominating tests, circuits of a kernel, dominating
circuit bases, configuration decompositions, I-compatibility and the
four-quadrant Gale diagram search for codimension two.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from math import gcd
from typing import Iterator, Optional, Sequence

from galecert import linalg, lp
from galecert.linalg import shape, sign

# -- mixed / dominating -------------------------------------------------------


def _is_mixed_vector(v) -> bool:
    return any(x > 0 for x in v) and any(x < 0 for x in v)


def is_mixed(M: Sequence[Sequence]) -> bool:
    """Every column holds a strictly positive and a strictly negative entry."""
    if not M or not M[0]:
        return True
    return all(_is_mixed_vector(col) for col in linalg.columns(M))


def is_weakly_mixed(M: Sequence[Sequence]) -> bool:
    """Every column is either identically zero or mixed."""
    if not M or not M[0]:
        return True
    return all(all(x == 0 for x in col) or _is_mixed_vector(col) for col in linalg.columns(M))


def mixed_square_submatrix(M: Sequence[Sequence]) -> Optional[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Rows and columns of some square mixed submatrix, or ``None``.

    For each row subset the columns mixed on it are counted; a square mixed
    submatrix exists on those rows iff at least as many columns qualify.
    """
    rows, cols = shape(M)
    if cols == 0:
        return None
    for r in range(1, min(rows, cols) + 1):
        for R in combinations(range(rows), r):
            good = [j for j in range(cols) if _is_mixed_vector([M[i][j] for i in R])]
            if len(good) >= r:
                return R, tuple(good[:r])
    return None


def is_dominating(M: Sequence[Sequence]) -> bool:
    return mixed_square_submatrix(M) is None


def is_dominating_bruteforce(M: Sequence[Sequence]) -> bool:
    """Naive enumeration of every square submatrix (test oracle)."""
    rows, cols = shape(M)
    for r in range(1, min(rows, cols) + 1):
        for R in combinations(range(rows), r):
            for S in combinations(range(cols), r):
                if all(_is_mixed_vector([M[i][j] for i in R]) for j in S):
                    return False
    return True


# -- circuits -----------------------------------------------------------------


@dataclass(frozen=True)
class Circuit:
    support: tuple[int, ...]
    coefficients: tuple[int, ...]

    @property
    def signature(self) -> "SignaturePartition":
        plus = frozenset(i for i, c in enumerate(self.coefficients) if c > 0)
        minus = frozenset(i for i, c in enumerate(self.coefficients) if c < 0)
        return SignaturePartition(plus, minus)


@dataclass(frozen=True)
class SignaturePartition:
    lambda_plus: frozenset[int]
    lambda_minus: frozenset[int]

    def unordered(self) -> frozenset[frozenset[int]]:
        return frozenset({self.lambda_plus, self.lambda_minus})

    def __eq__(self, other):
        if not isinstance(other, SignaturePartition):
            return NotImplemented
        return self.unordered() == other.unordered()

    def __hash__(self):
        return hash(self.unordered())


def _normalize_integer(v: Sequence) -> tuple[int, ...]:
    w = [int(x) for x in linalg.primitive(v)]
    first = next((x for x in w if x), 0)
    if first < 0:
        w = [-x for x in w]
    return tuple(w)


def circuits_of_kernel(A: Sequence[Sequence]) -> list[Circuit]:
    """All circuits of ``ker A``, sign-normalized (first nonzero positive).

    Supports are enumerated by increasing size up to ``rank(A) + 1``; a subset
    is a circuit support iff its restricted kernel is a line with full support.
    """
    A = linalg.as_fractions(A)
    m, n = shape(A)
    r = linalg.rank(A)
    out = []
    for size in range(1, r + 2):
        for S in combinations(range(n), size):
            sub = [[row[j] for j in S] for row in A]
            ker = linalg.nullspace(sub, size)
            if len(ker) != 1 or any(x == 0 for x in ker[0]):
                continue
            v = [Fraction(0)] * n
            for j, x in zip(S, ker[0]):
                v[j] = x
            out.append(Circuit(S, _normalize_integer(v)))
    return out


def conformalize(B: Sequence[Sequence], A: Sequence[Sequence]) -> tuple[list[list[Fraction]], bool]:
    """Replace each column of ``B`` by a circuit of ``ker A`` conformal to it.

    Returns ``(B', full_rank)``. Among conformal circuits the one with the
    lexicographically smallest support is taken.
    """
    circuits = circuits_of_kernel(A)
    cols = []
    for b in linalg.columns(B):
        sb = linalg.sign_vector(b)
        chosen = None
        for c in sorted(circuits, key=lambda c: c.support):
            for s in (1, -1):
                if all(sb[i] == s * sign(c.coefficients[i]) for i in c.support):
                    chosen = [Fraction(s * x) for x in c.coefficients]
                    break
            if chosen:
                break
        if chosen is None:
            raise RuntimeError("no conformal circuit found")
        cols.append(chosen)
    Bp = linalg.from_columns(cols, len(B))
    k = len(cols)
    return Bp, linalg.rank(Bp) == k if k else True


def iter_dominating_gale(A: Sequence[Sequence], limit: Optional[int] = None) -> Iterator[list[list[Fraction]]]:
    """Dominating Gale duals of ``A`` built from circuits, in lexicographic order.

    Depth-first over circuit subsets; a branch is cut as soon as the chosen
    columns stop being dominating or independent (both are hereditary).
    """
    A = linalg.as_fractions(A)
    m, n = shape(A)
    k = n - linalg.rank(A)
    if k == 0:
        yield [[] for _ in range(n)]
        return
    circuits = sorted(circuits_of_kernel(A), key=lambda c: (c.support, c.coefficients))
    vecs = [[Fraction(x) for x in c.coefficients] for c in circuits]
    found = 0

    def rec(start: int, chosen: list[int]):
        nonlocal found
        if len(chosen) == k:
            found += 1
            yield linalg.from_columns([vecs[i] for i in chosen], n)
            return
        for t in range(start, len(vecs)):
            if limit is not None and found >= limit:
                return
            cand = chosen + [t]
            M = linalg.from_columns([vecs[i] for i in cand], n)
            if linalg.rank(M) != len(cand) or not is_dominating(M):
                continue
            yield from rec(t + 1, cand)

    yield from rec(0, [])


def find_dominating_gale(A: Sequence[Sequence]) -> Optional[list[list[Fraction]]]:
    return next(iter_dominating_gale(A, limit=1), None)


def circuit_bases(A: Sequence[Sequence], limit: Optional[int] = None) -> Iterator[list[list[Fraction]]]:
    """Gale duals of ``A`` whose columns are circuits (any rank-``k`` subset)."""
    A = linalg.as_fractions(A)
    n = shape(A)[1]
    k = n - linalg.rank(A)
    circuits = sorted(circuits_of_kernel(A), key=lambda c: (c.support, c.coefficients))
    count = 0
    for S in combinations(range(len(circuits)), k):
        M = linalg.from_columns([[Fraction(x) for x in circuits[i].coefficients] for i in S], n)
        if linalg.rank(M) == k:
            yield M
            count += 1
            if limit is not None and count >= limit:
                return


# -- convex hull helpers (exact LP membership) -------------------------------


def in_convex_hull(point: Sequence, pts: Sequence[Sequence]) -> Optional[list[Fraction]]:
    """Barycentric weights ``mu >= 0`` with ``sum mu = 1``, ``sum mu p = point``."""
    m = len(pts)
    if m == 0:
        return None
    d = len(point)
    eq = [([Fraction(p[t]) for p in pts], point[t]) for t in range(d)]
    eq.append(([1] * m, 1))
    return lp.feasible_point(m, eq=eq, nonneg=range(m))


def hull_vertices(pts: Sequence[Sequence]) -> list[int]:
    out = []
    for i, p in enumerate(pts):
        others = [q for j, q in enumerate(pts) if j != i and tuple(q) != tuple(p)]
        if in_convex_hull(p, others) is None:
            out.append(i)
    return out


def affine_dim(pts: Sequence[Sequence]) -> int:
    if not pts:
        return -1
    return linalg.rank([[1] + [Fraction(x) for x in p] for p in pts]) - 1


def hulls_meet_in_one_point(P: Sequence[Sequence], Q: Sequence[Sequence]) -> Optional[list[Fraction]]:
    """The unique common point of ``ch(P)`` and ``ch(Q)``, or ``None``."""
    d = len(P[0])
    mP, mQ = len(P), len(Q)
    nv = mP + mQ
    eq = []
    for t in range(d):
        eq.append(([Fraction(p[t]) for p in P] + [-Fraction(q[t]) for q in Q], 0))
    eq.append(([1] * mP + [0] * mQ, 1))
    eq.append(([0] * mP + [1] * mQ, 1))
    res = lp.solve(nv, eq=eq, nonneg=range(nv))
    if res.status == lp.INFEASIBLE:
        return None
    point = [sum((res.x[i] * Fraction(P[i][t]) for i in range(mP)), Fraction(0)) for t in range(d)]
    for t in range(d):
        obj = [Fraction(p[t]) for p in P] + [0] * mQ
        lo = lp.solve(nv, eq=eq, nonneg=range(nv), minimize=obj)
        hi = lp.solve(nv, eq=eq, nonneg=range(nv), minimize=[-x for x in obj])
        if lo.value != -hi.value:
            return None
    return point


# -- decomposition ------------------------------------------------------------


@dataclass
class Decomposition:
    part1: tuple[int, ...]
    part2: tuple[int, ...]
    intersection_point: list[Fraction]
    one_point: bool = True
    parts_admit: bool = True
    dims_add: bool = True
    children: list["Decomposition"] = field(default_factory=list)


def decompose_configuration(points: Sequence[Sequence], max_n: int = 12) -> Optional[Decomposition]:
    """Split the points in two parts whose hulls meet in exactly one point,
    with additive dimensions, each part recursively admitting a mixed
    dominating Gale dual (simplices and circuits terminate the recursion).
    """
    pts = [tuple(Fraction(x) for x in p) for p in points]
    if len(pts) > max_n:
        raise ValueError("configuration too large for exhaustive bipartition search")
    idx = tuple(range(len(pts)))
    return _decompose(pts, idx)


def _codim(pts, idx) -> int:
    return len(idx) - 1 - affine_dim([pts[i] for i in idx])


def _admits(pts, idx) -> bool:
    if _codim(pts, idx) <= 1:
        return True
    return _decompose(pts, idx) is not None


def _decompose(pts, idx) -> Optional[Decomposition]:
    sub = [pts[i] for i in idx]
    dim = affine_dim(sub)
    if _codim(pts, idx) >= 1 and dim >= 1 and len(hull_vertices(sub)) > 2 * dim:
        return None
    first, rest = idx[0], idx[1:]
    for r in range(0, len(rest)):
        for extra in combinations(rest, r):
            part1 = (first,) + extra
            part2 = tuple(i for i in rest if i not in extra)
            if not part2:
                continue
            P = [pts[i] for i in part1]
            Q = [pts[i] for i in part2]
            if affine_dim(P) + affine_dim(Q) != dim:
                continue
            point = hulls_meet_in_one_point(P, Q)
            if point is None:
                continue
            if _admits(pts, part1) and _admits(pts, part2):
                return Decomposition(part1, part2, point)
    return None


# -- I-compatibility ----------------------------------------------------------


def sign_pattern_key(M: Sequence[Sequence]) -> tuple:
    """Sign matrix up to column permutation and column negation."""
    cols = []
    for col in linalg.columns(M):
        s = linalg.sign_vector(col)
        first = next((x for x in s if x), 0)
        cols.append(tuple(-x for x in s) if first < 0 else s)
    return tuple(sorted(cols))


def lifted(pts: Sequence[Sequence]) -> list[list[Fraction]]:
    if not pts:
        return []
    d = len(pts[0])
    return [[Fraction(1)] * len(pts)] + [[Fraction(p[t]) for p in pts] for t in range(d)]


@dataclass
class ICompatibility:
    I: tuple[int, ...]
    B_I: list[list[Fraction]]
    D_I: list[list[Fraction]]
    simplices: dict[int, tuple[int, ...]]
    a_weights: dict[int, list[Fraction]]
    c_weights: dict[int, list[Fraction]]


def _embed(M, I, n) -> list[list[Fraction]]:
    cols = shape(M)[1] if M else 0
    out = [[Fraction(0)] * cols for _ in range(n)]
    for r, i in enumerate(I):
        out[i] = list(M[r])
    return out


def matching_dominating_pair(A_I, Cbar_I, limit: int = 2000) -> Optional[tuple[list, list]]:
    """Mixed dominating Gale duals of both matrices with the same sign pattern.

    The second matrix is returned with its columns permuted and negated to
    line up with the first.
    """
    left = {}
    for B in iter_dominating_gale(A_I, limit=limit):
        left.setdefault(sign_pattern_key(B), B)
    if not left:
        return None
    for Dm in iter_dominating_gale(Cbar_I, limit=limit):
        key = sign_pattern_key(Dm)
        if key not in left:
            continue
        B = left[key]
        if not is_mixed(B) or not is_mixed(Dm):
            continue
        bcols = linalg.columns(B)
        dcols = linalg.columns(Dm)
        used = set()
        aligned = []
        for b in bcols:
            sb = linalg.sign_vector(b)
            for t, dcol in enumerate(dcols):
                if t in used:
                    continue
                sd = linalg.sign_vector(dcol)
                if sd == sb:
                    aligned.append(list(dcol))
                elif tuple(-x for x in sd) == sb:
                    aligned.append([-x for x in dcol])
                else:
                    continue
                used.add(t)
                break
        n = len(B)
        return B, linalg.from_columns(aligned, n)
    return None


def i_compatible(points: Sequence[Sequence], C: Sequence[Sequence], I: Sequence[int]) -> Optional[ICompatibility]:
    """Check I-compatibility of the exponent points and coefficient columns.

    Returns the witness data (matched Gale duals on ``I``, simplices ``J`` and
    barycentric weights for every index outside ``I``) or ``None``.
    """
    pts = [tuple(Fraction(x) for x in p) for p in points]
    C = linalg.as_fractions(C)
    cpts = [tuple(c) for c in linalg.columns(C)]
    n = len(pts)
    d = len(pts[0])
    A = lifted(pts)
    Cbar = lifted(cpts)
    if not (linalg.is_uniform(A) and linalg.is_uniform(C) and linalg.is_uniform(Cbar)):
        raise ValueError("I-compatibility needs A, C and C-bar uniform")
    I = tuple(sorted(I))
    out_idx = [j for j in range(n) if j not in I]
    # (2) hull equalities
    for j in out_idx:
        if in_convex_hull(pts[j], [pts[i] for i in I]) is None:
            return None
        if in_convex_hull(cpts[j], [cpts[i] for i in I]) is None:
            return None
    # (3) common simplices
    simplices, aw, cw = {}, {}, {}
    for j in out_idx:
        for J in combinations(I, d + 1):
            mu = in_convex_hull(pts[j], [pts[i] for i in J])
            if mu is None:
                continue
            nu = in_convex_hull(cpts[j], [cpts[i] for i in J])
            if nu is None:
                continue
            simplices[j], aw[j], cw[j] = J, mu, nu
            break
        else:
            return None
    # (1) matched mixed dominating Gale duals on I
    pair = matching_dominating_pair(lifted([pts[i] for i in I]), lifted([cpts[i] for i in I]))
    if pair is None:
        return None
    return ICompatibility(I, pair[0], pair[1], simplices, aw, cw)


def icompatible_block_matrices(comp: ICompatibility, n: int) -> tuple[list[list[Fraction]], list[list[Fraction]]]:
    """Block Gale duals ``((B_I, R), (0, Id))`` for ``A`` and the matching one for ``C``.

    Each column outside ``I`` is the affine relation ``e_j - sum mu_l e_l``.
    """
    I = comp.I
    bcols = linalg.columns(_embed(comp.B_I, I, n)) if comp.B_I and comp.B_I[0] else []
    dcols = linalg.columns(_embed(comp.D_I, I, n)) if comp.D_I and comp.D_I[0] else []
    for j in sorted(comp.simplices):
        J = comp.simplices[j]
        for weights, target in ((comp.a_weights[j], bcols), (comp.c_weights[j], dcols)):
            v = [Fraction(0)] * n
            v[j] = Fraction(1)
            for l, w in zip(J, weights):
                v[l] -= w
            target.append(v)
    return linalg.from_columns(bcols, n), linalg.from_columns(dcols, n)


# -- four quadrants -----------------------------------------------------------

QUADRANTS = ((1, 1), (-1, 1), (-1, -1), (1, -1))


def quadrant_rows(B: Sequence[Sequence]) -> Optional[tuple[int, int, int, int]]:
    """First row index in each open quadrant 1..4, or ``None``."""
    if shape(B)[1] != 2:
        raise ValueError("four-quadrant search needs exactly two columns")
    found = []
    for q in QUADRANTS:
        i = next((i for i, r in enumerate(B) if (sign(r[0]), sign(r[1])) == q), None)
        if i is None:
            return None
        found.append(i)
    return tuple(found)


@lru_cache(maxsize=None)
def unimodular_matrices(bound: int) -> tuple[tuple[tuple[int, int], tuple[int, int]], ...]:
    """All 2x2 integer matrices of determinant +-1 with entries in ``[-bound, bound]``,
    ordered by max entry size then lexicographically."""
    rng = range(-bound, bound + 1)
    out = []
    for a, b, c, e in product(rng, repeat=4):
        if abs(a * e - b * c) == 1:
            out.append(((a, b), (c, e)))
    out.sort(key=lambda R: (max(abs(x) for row in R for x in row), R))
    return tuple(out)


@dataclass
class QuadrantHit:
    rows: tuple[int, int, int, int]
    R: tuple[tuple[int, int], tuple[int, int]]
    B: list[list[Fraction]]


def four_quadrant_rows(B: Sequence[Sequence], bound: int = 10) -> Optional[QuadrantHit]:
    """Rows of ``B R`` in the four open quadrants for some unimodular ``R``.

    The identity is tried first; ``bound=0`` restricts to the identity.
    """
    B = linalg.as_fractions(B)
    if shape(B)[1] != 2:
        raise ValueError("four-quadrant search needs k = 2")
    hit = quadrant_rows(B)
    identity = ((1, 0), (0, 1))
    if hit is not None:
        return QuadrantHit(hit, identity, B)
    if bound <= 0:
        return None
    for R in unimodular_matrices(bound):
        BR = linalg.matmul(B, [list(map(Fraction, r)) for r in R])
        hit = quadrant_rows(BR)
        if hit is not None:
            return QuadrantHit(hit, R, BR)
    return None


def gcd_list(vals) -> int:
    g = 0
    for v in vals:
        g = gcd(g, abs(int(v)))
    return g
