"""Exact two-phase simplex over the rationals.

Small dense tableau, Bland's rule, ``fractions.Fraction`` everywhere. Built for
the desk-scale feasibility questions the rest of the package asks (cone
membership, strict sign cells, redundancy of constraints), not for speed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LPResult:
    status: str
    x: Optional[list[Fraction]] = None
    value: Optional[Fraction] = None

    @property
    def feasible(self) -> bool:
        return self.status != INFEASIBLE


def _frac_rows(rows) -> list[list[Fraction]]:
    return [[Fraction(v) for v in r] for r in rows]


def _pivot(T: list[list[Fraction]], r: int, c: int) -> None:
    pr = T[r]
    pv = pr[c]
    if pv != 1:
        inv = 1 / pv
        T[r] = pr = [v * inv for v in pr]
    for i, row in enumerate(T):
        if i == r:
            continue
        f = row[c]
        if f:
            T[i] = [a - f * b for a, b in zip(row, pr)]


def _simplex(T, basis, obj_row: int, allowed: int) -> str:
    """Minimize the objective stored (as reduced costs) in row ``obj_row``.

    Columns ``>= allowed`` never enter. Last column is the right-hand side.
    """
    m = obj_row
    while True:
        cost = T[obj_row]
        enter = -1
        for j in range(allowed):
            if cost[j] < 0:
                enter = j
                break
        if enter < 0:
            return OPTIMAL
        leave = -1
        best = None
        for i in range(m):
            a = T[i][enter]
            if a > 0:
                ratio = T[i][-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best = ratio
                    leave = i
        if leave < 0:
            return UNBOUNDED
        _pivot(T, leave, enter)
        basis[leave] = enter


def solve_standard(A_eq, b_eq, c=None) -> LPResult:
    """min c.x  s.t.  A_eq x = b_eq, x >= 0  (exact).

    With ``c=None`` only feasibility is decided and any basic feasible point
    is returned.
    """
    A = _frac_rows(A_eq)
    b = [Fraction(v) for v in b_eq]
    m = len(A)
    nv = len(A[0]) if m else (len(c) if c is not None else 0)
    if m == 0:
        x = [Fraction(0)] * nv
        if c is not None and any(Fraction(v) < 0 for v in c):
            return LPResult(UNBOUNDED, x)
        return LPResult(OPTIMAL, x, Fraction(0))
    for i in range(m):
        if b[i] < 0:
            A[i] = [-v for v in A[i]]
            b[i] = -b[i]
    # phase 1: artificials nv..nv+m-1
    T = []
    for i in range(m):
        art = [Fraction(0)] * m
        art[i] = Fraction(1)
        T.append(A[i] + art + [b[i]])
    phase1 = [Fraction(0)] * (nv + m + 1)
    for i in range(m):
        for j in range(nv):
            phase1[j] -= T[i][j]
        phase1[-1] -= T[i][-1]
    T.append(phase1)
    basis = [nv + i for i in range(m)]
    _simplex(T, basis, m, nv + m)
    if T[m][-1] != 0:
        return LPResult(INFEASIBLE)
    # drive remaining artificials out of the basis; drop redundant rows
    keep = []
    for i in range(m):
        if basis[i] >= nv:
            col = next((j for j in range(nv) if T[i][j] != 0), -1)
            if col < 0:
                continue
            _pivot(T, i, col)
            basis[i] = col
        keep.append(i)
    T = [T[i][:nv] + [T[i][-1]] for i in keep]
    basis = [basis[i] for i in keep]
    m2 = len(T)

    def point():
        x = [Fraction(0)] * nv
        for i, j in enumerate(basis):
            x[j] = T[i][-1]
        return x

    if c is None:
        return LPResult(OPTIMAL, point(), Fraction(0))
    cc = [Fraction(v) for v in c]
    obj = cc + [Fraction(0)]
    for i, j in enumerate(basis):
        f = obj[j]
        if f:
            obj = [a - f * r for a, r in zip(obj, T[i])]
    T.append(obj)
    status = _simplex(T, basis, m2, nv)
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED, point())
    x = point()
    return LPResult(OPTIMAL, x, sum((ci * xi for ci, xi in zip(cc, x)), Fraction(0)))


def solve(
    nvars: int,
    eq: Sequence[tuple[Sequence, object]] = (),
    ge: Sequence[tuple[Sequence, object]] = (),
    nonneg: Sequence[int] = (),
    minimize: Optional[Sequence] = None,
) -> LPResult:
    """General exact LP over ``nvars`` variables.

    ``eq`` and ``ge`` are lists of ``(coefficients, rhs)`` pairs meaning
    ``a.x == rhs`` and ``a.x >= rhs``. Variables listed in ``nonneg`` are
    constrained ``>= 0``; all others are free (split internally).
    """
    nonneg_set = set(nonneg)
    # column map: free variable -> (pos, neg), nonneg -> pos
    cols: list[tuple[int, int]] = []
    k = 0
    for v in range(nvars):
        if v in nonneg_set:
            cols.append((k, -1))
            k += 1
        else:
            cols.append((k, k + 1))
            k += 2
    n_slack = len(ge)
    width = k + n_slack

    def expand(a) -> list[Fraction]:
        row = [Fraction(0)] * width
        for v, coef in enumerate(a):
            coef = Fraction(coef)
            if not coef:
                continue
            p, q = cols[v]
            row[p] += coef
            if q >= 0:
                row[q] -= coef
        return row

    A_eq: list[list[Fraction]] = []
    b_eq: list[Fraction] = []
    for a, rhs in eq:
        A_eq.append(expand(a))
        b_eq.append(Fraction(rhs))
    for s, (a, rhs) in enumerate(ge):
        row = expand(a)
        row[k + s] = Fraction(-1)
        A_eq.append(row)
        b_eq.append(Fraction(rhs))
    c = None
    if minimize is not None:
        c = expand(minimize)
    if not A_eq:
        A_eq = [[Fraction(0)] * width]
        b_eq = [Fraction(0)]
    res = solve_standard(A_eq, b_eq, c)
    if res.x is None:
        return res
    x = []
    for p, q in cols:
        val = res.x[p]
        if q >= 0:
            val -= res.x[q]
        x.append(val)
    return LPResult(res.status, x, res.value)


def feasible_point(nvars, eq=(), ge=(), nonneg=()) -> Optional[list[Fraction]]:
    res = solve(nvars, eq=eq, ge=ge, nonneg=nonneg)
    return res.x if res.status != INFEASIBLE else None
