"""Exact rational and integer linear algebra.

Matrices are plain row lists. Rational matrices hold ``Fraction`` entries,
integer matrices hold ``int``. A matrix with zero columns keeps its row count
as a list of empty rows, so ``n x 0`` Gale duals remain well formed.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from itertools import combinations
from math import gcd
from typing import Iterable, Optional, Sequence

from galecert import lp

RationalMatrix = list[list[Fraction]]
IntegerMatrix = list[list[int]]
SignVector = tuple[int, ...]


class RankError(ValueError):
    """Raised when a matrix that must have full row rank does not."""


# -- small helpers -----------------------------------------------------------


def as_fractions(M: Iterable[Iterable]) -> RationalMatrix:
    return [[Fraction(v) for v in row] for row in M]


def as_integers(M: Iterable[Iterable]) -> IntegerMatrix:
    out = []
    for row in M:
        r = []
        for v in row:
            f = Fraction(v)
            if f.denominator != 1:
                raise ValueError(f"non-integer entry {v}")
            r.append(int(f))
        out.append(r)
    return out


def shape(M: Sequence[Sequence]) -> tuple[int, int]:
    return len(M), (len(M[0]) if M else 0)


def transpose(M: Sequence[Sequence]) -> list[list]:
    rows, cols = shape(M)
    return [[M[i][j] for i in range(rows)] for j in range(cols)]


def matmul(X: Sequence[Sequence], Y: Sequence[Sequence]) -> list[list]:
    if not X:
        return []
    inner = len(Y)
    cols = len(Y[0]) if Y else 0
    return [[sum((X[i][t] * Y[t][j] for t in range(inner)), 0) for j in range(cols)] for i in range(len(X))]


def matvec(M: Sequence[Sequence], v: Sequence) -> list:
    return [sum((a * b for a, b in zip(row, v)), 0) for row in M]


def column(M: Sequence[Sequence], j: int) -> list:
    return [row[j] for row in M]


def columns(M: Sequence[Sequence]) -> list[list]:
    return transpose(M)


def from_columns(cols: Sequence[Sequence], nrows: Optional[int] = None) -> list[list]:
    if not cols:
        return [[] for _ in range(nrows or 0)]
    return [list(r) for r in zip(*cols)]


def is_zero(M: Sequence[Sequence]) -> bool:
    return all(v == 0 for row in M for v in row)


def sign(x) -> int:
    return (x > 0) - (x < 0)


def sign_vector(v: Sequence) -> SignVector:
    return tuple(sign(x) for x in v)


def primitive(v: Sequence) -> list[Fraction]:
    """Scale a rational vector to a primitive integer vector (same direction)."""
    v = [Fraction(x) for x in v]
    den = reduce(lambda a, b: a * b // gcd(a, b), (x.denominator for x in v), 1)
    ints = [int(x * den) for x in v]
    g = reduce(gcd, (abs(x) for x in ints), 0)
    if g == 0:
        return [Fraction(0)] * len(v)
    return [Fraction(x // g) for x in ints]


# -- elimination --------------------------------------------------------------


def rref(M: Sequence[Sequence]) -> tuple[RationalMatrix, list[int]]:
    R = as_fractions(M)
    rows, cols = shape(R)
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if R[i][c] != 0), None)
        if p is None:
            continue
        R[r], R[p] = R[p], R[r]
        pv = R[r][c]
        R[r] = [x / pv for x in R[r]]
        for i in range(rows):
            if i != r and R[i][c] != 0:
                f = R[i][c]
                R[i] = [a - f * b for a, b in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return R, pivots


def rank(M: Sequence[Sequence]) -> int:
    if not M or not M[0]:
        return 0
    return len(rref(M)[1])


def det(M: Sequence[Sequence]) -> Fraction:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = len(M)
    if n == 0:
        return Fraction(1)
    A = as_fractions(M)
    sgn = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if A[k][k] == 0:
            p = next((i for i in range(k + 1, n) if A[i][k] != 0), None)
            if p is None:
                return Fraction(0)
            A[k], A[p] = A[p], A[k]
            sgn = -sgn
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) / prev
        prev = A[k][k]
    return sgn * A[n - 1][n - 1]


def inverse(M: Sequence[Sequence]) -> RationalMatrix:
    n = len(M)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(as_fractions(M))]
    R, piv = rref(aug)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in R]


def solve_square(M: Sequence[Sequence], b: Sequence) -> Optional[list[Fraction]]:
    """Unique solution of ``M x = b`` or ``None`` when ``M`` is singular."""
    n = len(M)
    aug = [list(row) + [Fraction(bi)] for row, bi in zip(as_fractions(M), b)]
    R, piv = rref(aug)
    if piv != list(range(n)):
        return None
    return [R[i][n] for i in range(n)]


def particular_solution(M: Sequence[Sequence], b: Sequence) -> Optional[list[Fraction]]:
    """Some solution of ``M x = b`` (free variables set to zero), or ``None``."""
    rows, cols = shape(M)
    aug = [list(row) + [Fraction(bi)] for row, bi in zip(as_fractions(M), b)]
    R, piv = rref(aug)
    if cols in piv:
        return None
    x = [Fraction(0)] * cols
    for i, c in enumerate(piv):
        x[c] = R[i][cols]
    return x


# -- kernels, minors ----------------------------------------------------------


def nullspace(M: Sequence[Sequence], ncols: Optional[int] = None) -> list[list[Fraction]]:
    """Basis of the right kernel as a list of primitive integer vectors."""
    if not M:
        n = ncols or 0
        return [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]
    R, piv = rref(M)
    cols = len(R[0])
    free = [c for c in range(cols) if c not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * cols
        v[f] = Fraction(1)
        for i, c in enumerate(piv):
            v[c] = -R[i][f]
        basis.append(primitive(v))
    return basis


def kernel_basis(M: Sequence[Sequence]) -> RationalMatrix:
    """Gale dual of a full-row-rank matrix: columns form a basis of ``ker M``.

    Columns are primitive integer vectors. A square invertible ``M`` yields an
    ``n x 0`` matrix.
    """
    rows, cols = shape(M)
    if rows == 0 or cols == 0:
        raise ValueError("empty matrix")
    if rank(M) != rows:
        raise RankError("not full rank")
    return from_columns(nullspace(M), cols)


def maximal_minors(M: Sequence[Sequence]) -> list[tuple[tuple[int, ...], Fraction]]:
    rows, cols = shape(M)
    if rows > cols:
        raise ValueError("more rows than columns")
    out = []
    for S in combinations(range(cols), rows):
        out.append((S, det([[M[i][j] for j in S] for i in range(rows)])))
    return out


def is_uniform(M: Sequence[Sequence]) -> bool:
    """True iff every maximal minor of ``M`` is nonzero."""
    rows, cols = shape(M)
    if rows > cols:
        raise ValueError("more rows than columns")
    return all(v != 0 for _, v in maximal_minors(M))


# -- integer lattices ---------------------------------------------------------


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def lll_reduce(basis: list[list[int]], delta: Fraction = Fraction(3, 4)) -> list[list[int]]:
    """Textbook LLL on a list of integer vectors (exact Gram-Schmidt)."""
    b = [list(v) for v in basis]
    n = len(b)
    if n <= 1:
        return b

    def dot(u, v):
        return sum(x * y for x, y in zip(u, v))

    def gram_schmidt():
        bstar: list[list[Fraction]] = []
        mu = [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            v = [Fraction(x) for x in b[i]]
            for j in range(i):
                mu[i][j] = dot(b[i], bstar[j]) / dot(bstar[j], bstar[j])
                v = [a - mu[i][j] * c for a, c in zip(v, bstar[j])]
            bstar.append(v)
        return bstar, mu

    bstar, mu = gram_schmidt()
    k = 1
    while k < n:
        for j in range(k - 1, -1, -1):
            q = round(mu[k][j])
            if q:
                b[k] = [x - q * y for x, y in zip(b[k], b[j])]
                bstar, mu = gram_schmidt()
        if dot(bstar[k], bstar[k]) >= (delta - mu[k][k - 1] ** 2) * dot(bstar[k - 1], bstar[k - 1]):
            k += 1
        else:
            b[k], b[k - 1] = b[k - 1], b[k]
            bstar, mu = gram_schmidt()
            k = max(k - 1, 1)
    return b


def z_gale_dual(A: Sequence[Sequence]) -> IntegerMatrix:
    """Integer matrix whose columns form a Z-basis of ``ker_Z(A)``.

    Unimodular column reduction of ``A`` (column-style Hermite form), then an
    LLL pass to keep entries small. Any Z-basis is acceptable; the output is
    not canonical.
    """
    M = as_integers(A)
    rows, cols = shape(M)
    if rank(M) != rows:
        raise RankError("not full rank")
    W = [list(r) for r in M]
    U = [[int(i == j) for j in range(cols)] for i in range(cols)]

    def colop(p: int, q: int, s: int, t: int, u: int, v: int) -> None:
        # (col_p, col_q) <- (s col_p + t col_q, u col_p + v col_q)
        for X in (W, U):
            for row in X:
                a, b = row[p], row[q]
                row[p], row[q] = s * a + t * b, u * a + v * b

    p = 0
    for i in range(rows):
        if p >= cols:
            break
        if all(W[i][j] == 0 for j in range(p, cols)):
            raise RankError("not full rank")
        for j in range(p + 1, cols):
            if W[i][j] == 0:
                continue
            a, b = W[i][p], W[i][j]
            g, s, t = _xgcd(a, b)
            colop(p, j, s, t, b // g, -(a // g))
        if W[i][p] == 0:
            j = next(j for j in range(p + 1, cols) if W[i][j] != 0)
            colop(p, j, 0, 1, 1, 0)
        p += 1
    kernel = [[U[r][c] for r in range(cols)] for c in range(p, cols)]
    kernel = lll_reduce(kernel)
    normed = []
    for v in kernel:
        first = next((x for x in v if x != 0), 0)
        normed.append([-x for x in v] if first < 0 else v)
    return from_columns(normed, cols)


def minors_gcd(M: Sequence[Sequence]) -> int:
    """gcd of the maximal minors of a tall integer matrix (columns as the basis)."""
    T = transpose(M)
    if not T:
        return 1
    g = 0
    for _, m in maximal_minors(T):
        g = gcd(g, abs(int(m)))
    return g


def rank_mod2(M: Sequence[Sequence]) -> int:
    """Rank of ``M`` reduced modulo 2 (entries must be integers)."""
    rows = []
    for row in as_integers(M):
        bits = 0
        for j, v in enumerate(row):
            if v % 2:
                bits |= 1 << j
        rows.append(bits)
    r = 0
    while rows:
        pivot = rows.pop()
        if not pivot:
            continue
        r += 1
        low = pivot & -pivot
        rows = [x ^ pivot if x & low else x for x in rows]
    return r


# -- strict sign feasibility in kernels ---------------------------------------


def sign_realizable(C: Sequence[Sequence], sigma: Sequence[int]) -> Optional[list[Fraction]]:
    """Witness ``v`` in ``ker C`` with ``sign(v) == sigma`` exactly, else ``None``.

    Zeros of ``sigma`` are forced; strict signs are normalized to
    ``sigma_i * v_i >= 1``. The witness is the first simplex-feasible point.
    """
    _, n = shape(C)
    if len(sigma) != n:
        raise ValueError("sign vector length does not match the number of columns")
    return _sign_feasible(C, sigma, range(n), nonzero_required=True)


def sign_realizable_restricted(
    C: Sequence[Sequence], sigma: Sequence[int], I: Iterable[int]
) -> Optional[list[Fraction]]:
    """As :func:`sign_realizable` but only coordinates in ``I`` are constrained.

    ``sigma`` is indexed by all columns; entries outside ``I`` are ignored.
    The witness must be nonzero.
    """
    _, n = shape(C)
    I = sorted(set(I))
    if any(i < 0 or i >= n for i in I):
        raise ValueError("index set is not a subset of the column indices")
    if len(sigma) != n:
        raise ValueError("sign vector length does not match the number of columns")
    return _sign_feasible(C, sigma, I, nonzero_required=True)


def _sign_feasible(C, sigma, I, nonzero_required: bool) -> Optional[list[Fraction]]:
    _, n = shape(C)
    I = list(I)
    eq = [(list(row), 0) for row in C]
    ge = []
    for i in I:
        s = sigma[i]
        e = [0] * n
        e[i] = 1
        if s == 0:
            eq.append((e, 0))
        else:
            ge.append(([s * x for x in e], 1))
    if ge or not nonzero_required:
        return lp.feasible_point(n, eq=eq, ge=ge)
    # every constrained coordinate is zero: need a nonzero kernel vector vanishing on I
    rows = [list(r) for r in C] + [[int(j == i) for j in range(n)] for i in I]
    ns = nullspace(rows, n)
    return ns[0] if ns else None


def positive_kernel_vector(M: Sequence[Sequence]) -> Optional[list[Fraction]]:
    """Some ``v`` with ``M v = 0`` and every ``v_i >= 1``."""
    _, n = shape(M)
    return sign_realizable(M, [1] * n)


def positive_left_kernel_vector(M: Sequence[Sequence]) -> Optional[list[Fraction]]:
    """Some ``lam`` with ``lam M = 0`` and every ``lam_i >= 1``."""
    rows, cols = shape(M)
    if cols == 0:
        return [Fraction(1)] * rows
    return positive_kernel_vector(transpose(M))
