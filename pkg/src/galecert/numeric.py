"""Numeric root finding on both sides of Gale duality.

The Gale route solves ``sum_i b_ij log p_i(y) = 0`` inside the polytope by
damped Newton from a grid of seeds and lifts roots to ``x``-space. The direct
route never touches Gale data: exact Sturm counting for one variable, and
multi-start Newton in logarithmic coordinates otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Optional, Sequence

import numpy as np

from galecert import geometry, linalg, sturm
from galecert.geometry import ExponentConfiguration, GaleDualPair

DEGENERATE = 0


@dataclass(frozen=True)
class VerifierConfig:
    grid: int = 40  # seeds per axis inside the polytope's bounding box
    tol: float = 1e-8  # relative residual
    dedup: float = 1e-6  # pairwise distance below which roots merge
    degenerate: float = 1e-6  # |det Jacobian| below this flags a degenerate root
    max_newton: int = 100
    step_tol: float = 1e-15
    direct_box: float = 8.0  # log-coordinate half-width for direct seeds
    direct_grid: int = 40
    direct_limit: float = 30.0  # |log x| beyond this counts as escaping to infinity
    max_seeds: int = 20000
    polish: int = 8  # undamped Newton steps on direct-route candidates
    chart_grid: int = 12  # log-spaced seeds per axis in each vertex chart
    cluster: float = 1e-3  # merge radius around degenerate roots (relative)


@dataclass
class RootRecord:
    y: Optional[np.ndarray]
    x: np.ndarray
    gale_residual: float = 0.0
    system_residual: float = 0.0
    jacobian_det: float = float("nan")
    jacobian_sign: int = DEGENERATE  # +1/-1, 0 when degenerate
    degenerate: bool = False
    orthant: Optional[tuple[int, ...]] = None


@dataclass
class SolveReport:
    roots: list[RootRecord]
    converged: bool
    seeds: int = 0
    notes: list[str] = field(default_factory=list)
    boundary_checks: list[tuple[int, int, int, int]] = field(default_factory=list)
    exact_count: Optional[int] = None

    @property
    def count(self) -> int:
        return self.exact_count if self.exact_count is not None else len(self.roots)

    @property
    def degenerate(self) -> bool:
        return any(r.degenerate for r in self.roots)


# -- system evaluation in x-space ---------------------------------------------


def system_residual(points, C, x) -> float:
    """``max_i |f_i(x)| / sum_j |c_ij x^{a_j}|``."""
    P = np.array([[float(v) for v in p] for p in points])
    Cf = np.array([[float(v) for v in r] for r in C])
    mono = np.exp(P @ np.log(np.asarray(x, dtype=float)))
    num = np.abs(Cf @ mono)
    den = np.abs(Cf) @ mono
    return float(np.max(num / den))


# -- lifting ------------------------------------------------------------------


def lift_exponents(points) -> list[list[Fraction]]:
    """``alpha`` with ``A alpha_j = (0, e_j)``; ``x_j = prod_i p_i^{alpha_ij}``."""
    cfg = ExponentConfiguration.from_points(points)
    A = cfg.A
    out = []
    for j in range(cfg.d):
        rhs = [Fraction(0)] * (cfg.d + 1)
        rhs[j + 1] = Fraction(1)
        sol = linalg.particular_solution(A, rhs)
        if sol is None:
            raise linalg.RankError("lifted exponent matrix is not of full rank")
        out.append(sol)
    return out


def lift_to_x(pair: GaleDualPair, points, y, alpha=None) -> np.ndarray:
    """Positive solution ``x`` corresponding to a Gale root ``y``.

    ``x^{a_i}`` equals ``p_i(y)`` up to one common positive factor (the
    slice ``y_0 = 1`` fixes the projective scale of ``p``).
    """
    if alpha is None:
        alpha = lift_exponents(points)
    pv = np.array([float(v) for v in pair.p([float(t) for t in y])])
    if np.any(pv <= 0):
        raise ValueError("y is not interior to the polytope")
    lp = np.log(pv)
    return np.exp(np.array([[float(a) for a in row] for row in alpha]) @ lp)


def lift_consistency(points, x, pvals) -> float:
    """Spread of ``log(x^{a_i} / p_i)`` over ``i`` (zero when consistent)."""
    P = np.array([[float(v) for v in p] for p in points])
    r = P @ np.log(np.asarray(x, dtype=float)) - np.log(np.asarray(pvals, dtype=float))
    return float(np.max(r) - np.min(r))


# -- Gale route ---------------------------------------------------------------


def _grid_seeds(delta: geometry.DeltaPolytope, grid: int, max_seeds: int) -> np.ndarray:
    k = delta.k
    lo, hi = delta.bounding_box()
    per_axis = grid if k <= 2 else max(3, int(round(max_seeds ** (1.0 / k))))
    per_axis = min(per_axis, max(2, int(max_seeds ** (1.0 / k))))
    axes = [np.linspace(l, h, per_axis + 2)[1:-1] for l, h in zip(lo, hi)]
    mesh = np.array(list(product(*axes)), dtype=float).reshape(-1, k)
    verts = np.array([[float(v) for v in vert] for vert in delta.vertices]).reshape(-1, k)
    return np.vstack([mesh, verts.mean(axis=0, keepdims=True)])


def _dedup(points: np.ndarray, scores: np.ndarray, radius: float) -> list[int]:
    order = sorted(range(len(points)), key=lambda i: (scores[i], tuple(points[i])))
    kept: list[int] = []
    for i in order:
        if all(np.linalg.norm(points[i] - points[j]) > radius for j in kept):
            kept.append(i)
    kept.sort(key=lambda i: tuple(points[i]))
    return kept


def _merge_degenerate(roots: list[RootRecord], key, radius: float) -> list[RootRecord]:
    """Collapse clusters of near-duplicates around degenerate roots.

    Newton converges only linearly at a singular root, so a single root
    shows up as a cloud of approximate solutions. Single-linkage clustering
    at ``radius`` (scaled by the magnitude) joins a cloud whenever one of
    its members is degenerate; each cluster keeps its best residual.
    """
    if len(roots) < 2 or not any(r.degenerate for r in roots):
        return roots
    pts = [np.asarray(key(r), dtype=float) for r in roots]
    parent = list(range(len(roots)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(roots)):
        for j in range(i):
            if not (roots[i].degenerate or roots[j].degenerate):
                continue
            scale = 1.0 + max(np.linalg.norm(pts[i]), np.linalg.norm(pts[j]))
            if np.linalg.norm(pts[i] - pts[j]) <= radius * scale:
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(len(roots)):
        groups.setdefault(find(i), []).append(i)
    out = []
    for members in groups.values():
        best = min(members, key=lambda i: max(roots[i].gale_residual, roots[i].system_residual))
        rec = roots[best]
        if len(members) > 1:
            rec.degenerate = True
            rec.jacobian_sign = DEGENERATE
        out.append(rec)
    out.sort(key=lambda r: tuple(key(r)))
    return out


def _newton_steps(J: np.ndarray, H: np.ndarray) -> np.ndarray:
    """Batched ``-J^{-1} H``; least squares only for the singular ones."""
    step = np.zeros_like(H)
    finite = np.all(np.isfinite(J), axis=(1, 2)) & np.all(np.isfinite(H), axis=1)
    det = np.zeros(len(J))
    det[finite] = np.linalg.det(J[finite])
    ok = finite & (np.abs(det) > 1e-300)
    if ok.any():
        try:
            step[ok] = -np.linalg.solve(J[ok], H[ok][..., None])[..., 0]
        except np.linalg.LinAlgError:
            ok[:] = False
    for s in np.flatnonzero(finite & ~ok):
        try:
            step[s] = -np.linalg.lstsq(J[s], H[s], rcond=None)[0]
        except np.linalg.LinAlgError:
            pass
    return step


@dataclass
class _Candidate:
    logp: np.ndarray
    y: np.ndarray
    residual: float
    det: float  # det of the Jacobian of h in y-coordinates


def _interior_newton(d0, Dt, Bf, Y: np.ndarray, config: VerifierConfig) -> list[_Candidate]:
    """Damped Newton on ``h(y) = B^T log p(y)`` from seeds inside the polytope."""
    P = d0[None, :] + Y @ Dt.T
    Y = Y[np.all(P > 0, axis=1)].copy()
    active = np.ones(len(Y), dtype=bool)
    for _ in range(config.max_newton):
        if not active.any():
            break
        idx = np.flatnonzero(active)
        Ya = Y[idx]
        P = d0[None, :] + Ya @ Dt.T
        lost = ~np.all(P > 0, axis=1)
        if lost.any():  # rounding pushed a seed onto the boundary
            Y[idx[lost]] = np.nan
            active[idx[lost]] = False
            idx, Ya, P = idx[~lost], Ya[~lost], P[~lost]
            if not len(idx):
                break
        H = np.log(P) @ Bf
        J = np.einsum("ij,si,il->sjl", Bf, 1.0 / P, Dt)
        step = _newton_steps(J, H)
        dP = step @ Dt.T
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(dP < 0, -P / dP, np.inf)
        t = np.minimum(1.0, 0.9 * ratio.min(axis=1))
        t = np.where(np.isfinite(t), t, 0.0)
        Ynew = Ya + t[:, None] * step
        moved = np.linalg.norm(Ynew - Ya, axis=1)
        Y[idx] = Ynew
        active[idx[moved <= config.step_tol * (1.0 + np.linalg.norm(Ya, axis=1))]] = False
    Y = Y[np.all(np.isfinite(Y), axis=1)]
    P = d0[None, :] + Y @ Dt.T
    inside = np.all(P > 0, axis=1)
    Y, P = Y[inside], P[inside]
    out = []
    for y, p in zip(Y, P):
        logp = np.log(p)
        res = float(np.max(np.abs(np.expm1(np.abs(logp @ Bf)))))
        if res < config.tol:
            J = (Bf.T / p[None, :]) @ Dt
            out.append(_Candidate(logp, y, res, float(np.linalg.det(J))))
    return out


def _vertex_charts(pair: GaleDualPair, delta: geometry.DeltaPolytope):
    """For each vertex: tight rows ``S`` with invertible ``D_S`` and exact offsets.

    In the chart ``p_S = z`` and ``p_i = c_i + r_i . z`` for the other rows,
    so values of ``p`` near the vertex carry no cancellation error.
    """
    k, n = pair.k, pair.n
    tails = [row[1:] for row in pair.D]
    for v, T in zip(delta.vertices, delta.incidence):
        for S in combinations(sorted(T), k):
            DS = [tails[i] for i in S]
            if linalg.det(DS) == 0:
                continue
            inv = linalg.inverse(DS)
            rest = [i for i in range(n) if i not in S]
            c = [pair.D[i][0] + sum((a * b for a, b in zip(tails[i], v)), Fraction(0)) for i in rest]
            R = linalg.matmul([tails[i] for i in rest], inv) if rest else []
            yield v, S, rest, c, R, inv, linalg.det(DS)
            break


def _chart_newton(pair: GaleDualPair, delta: geometry.DeltaPolytope, Bf: np.ndarray,
                  config: VerifierConfig) -> tuple[list[_Candidate], int]:
    """Newton in ``u = log p_S`` around every vertex of the polytope."""
    k, n = pair.k, pair.n
    Dall = np.array([[float(x) for x in r] for r in pair.D])
    Vf = np.array([[float(x) for x in v] for v in delta.vertices]).reshape(-1, k)
    Pv = Dall[:, :1].T + Vf @ Dall[:, 1:].T  # p at the vertices
    out, nseeds = [], 0
    for v, S, rest, c, R, inv, detS in _vertex_charts(pair, delta):
        S = list(S)
        cf = np.array([float(x) for x in c])
        Rf = np.array([[float(x) for x in r] for r in R]).reshape(len(rest), k)
        invf = np.array([[float(x) for x in r] for r in inv])
        vf = np.array([float(x) for x in v])
        top = np.maximum(Pv[:, S].max(axis=0), 1e-300)
        axes = [np.linspace(np.log(t) - 35.0, np.log(t), config.chart_grid) for t in top]
        U = np.array(list(product(*axes)), dtype=float).reshape(-1, k)
        nseeds += len(U)
        BS, Br = Bf[S], Bf[rest]

        def pvals(U):
            Z = np.exp(U)
            return Z, cf[None, :] + Z @ Rf.T

        Z, Pr = pvals(U)
        U = U[np.all(Pr > 0, axis=1)]
        active = np.ones(len(U), dtype=bool)
        for _ in range(config.max_newton):
            if not active.any():
                break
            idx = np.flatnonzero(active)
            Ua = U[idx]
            Z, Pr = pvals(Ua)
            H = Ua @ BS + np.log(Pr) @ Br
            # dH_j/du_l = b_{S_l j} + sum_rest b_ij r_il z_l / p_i
            J = BS.T[None, :, :] + np.einsum("ij,si,il,sl->sjl", Br, 1.0 / Pr, Rf, Z)
            step = _newton_steps(J, H)
            norm = np.linalg.norm(step, axis=1)
            step *= np.minimum(1.0, 5.0 / np.maximum(norm, 1e-300))[:, None]
            t = np.ones(len(Ua))
            for _half in range(60):  # backtrack until the other rows stay positive
                _, Pn = pvals(Ua + t[:, None] * step)
                bad = ~np.all(Pn > 0, axis=1)
                if not bad.any():
                    break
                t[bad] *= 0.5
            Unew = Ua + t[:, None] * step
            U[idx] = Unew
            moved = np.linalg.norm(Unew - Ua, axis=1)
            stop = (moved <= config.step_tol * (1.0 + np.linalg.norm(Ua, axis=1))) | (Unew.min(axis=1) < -700)
            active[idx[stop]] = False
        U = U[np.all(np.isfinite(U), axis=1) & (U.min(axis=1) > -700)]
        Z, Pr = pvals(U)
        ok = np.all(Pr > 0, axis=1)
        for u, z, pr in zip(U[ok], Z[ok], Pr[ok]):
            logp = np.empty(n)
            logp[S] = u
            logp[rest] = np.log(pr)
            with np.errstate(over="ignore"):
                res = float(np.max(np.abs(np.expm1(np.abs(logp @ Bf)))))
            if res >= config.tol:
                continue
            Ju = BS.T + (Br.T / pr[None, :]) @ (Rf * z[None, :])
            # dy/du = D_S^{-1} diag(z)
            det = float(np.linalg.det(Ju)) * float(detS) / float(np.prod(z))
            out.append(_Candidate(logp, vf + invf @ z, res, det))
    return out, nseeds


def solve_gale_in_delta(pair: GaleDualPair, delta: geometry.DeltaPolytope, points=None,
                        config: Optional[VerifierConfig] = None) -> SolveReport:
    """Roots of the Gale system inside the polytope (damped Newton, log form).

    Seeds come from a grid over the polytope plus logarithmic charts at each
    vertex, which resolve roots lying exponentially close to the boundary.
    """
    config = config or VerifierConfig()
    k = pair.k
    Bf = np.array([[float(v) for v in r] for r in pair.B]).reshape(pair.n, k)
    D = np.array([[float(v) for v in r] for r in pair.D])
    d0, Dt = D[:, 0], D[:, 1:]
    alpha = lift_exponents(points) if points is not None else None
    notes: list[str] = []
    if k == 0:
        x = lift_to_x(pair, points, []) if points is not None else np.array([])
        rec = RootRecord(np.zeros(0), x, 0.0, system_residual(points, pair.C, x) if points is not None else 0.0,
                         1.0, 1, False)
        return SolveReport([rec], True, 1, ["no Gale variables: the polytope is a point"])

    Y = _grid_seeds(delta, config.grid, config.max_seeds)
    with np.errstate(over="ignore", under="ignore"):
        cands = _interior_newton(d0, Dt, Bf, Y, config)
        nseeds = len(Y)
        if config.chart_grid > 0:
            more, extra = _chart_newton(pair, delta, Bf, config)
            cands += more
            nseeds += extra
    L = np.array([c.logp for c in cands]).reshape(len(cands), pair.n)
    kept = _dedup(L, np.array([c.residual for c in cands]), config.dedup) if cands else []
    Af = np.array([[float(a) for a in row] for row in alpha]) if alpha is not None else None
    roots = []
    for i in kept:
        cd = cands[i]
        # sign of det of the Jacobian of -g equals (-1)^k sign det J_h at a root
        degenerate = abs(cd.det) < config.degenerate
        sgn = 0 if degenerate else int(np.sign(cd.det)) * (-1) ** k
        x = np.exp(Af @ cd.logp) if Af is not None else np.array([])
        sres = system_residual(points, pair.C, x) if points is not None else 0.0
        roots.append(RootRecord(cd.y.copy(), x, cd.residual, sres, cd.det, sgn, degenerate))
    roots = _merge_degenerate(roots, lambda r: r.y, config.cluster)
    converged = not any(r.degenerate for r in roots)
    if not converged:
        notes.append("degenerate root: Jacobian determinant below threshold")
    return SolveReport(roots, converged, nseeds, notes, boundary_sign_checks(pair, delta))


def boundary_sign_checks(pair: GaleDualPair, delta: geometry.DeltaPolytope) -> list[tuple[int, int, int, int]]:
    """``(i, j, expected, observed)`` signs of ``g_j`` at each facet barycenter."""
    out = []
    for i in delta.facet_index_set:
        L = frozenset([i])
        if L not in delta.face_lattice:
            continue
        y = delta.barycenter(L)
        try:
            g = geometry.gale_map(pair, y)
        except geometry.GeometryError:
            continue
        for j in range(pair.k):
            b = pair.B[i][j]
            if b != 0:
                out.append((i, j, -linalg.sign(b), linalg.sign(g[j])))
    return out


def gale_roots(points, C, B=None, D=None, config: Optional[VerifierConfig] = None) -> SolveReport:
    """Convenience wrapper choosing default Gale duals when none are given."""
    cfg = ExponentConfiguration.from_points(points)
    if B is None:
        B = (linalg.as_fractions(linalg.z_gale_dual(cfg.A)) if cfg.integer_flag else linalg.kernel_basis(cfg.A))
    if not geometry.necessary_condition(C):
        return SolveReport([], True, 0, ["necessary condition fails: no positive solutions"])
    if D is None:
        D = geometry.normalize_gale_dual(linalg.kernel_basis(C))
    pair = GaleDualPair(cfg.A, C, B, D)
    pair.check()
    try:
        delta = geometry.build_delta(pair.D)
    except geometry.Unbounded:
        raise
    except geometry.GeometryError:
        # parallel rows (C not uniform): fine for seeding, every row may bound
        delta = geometry.build_delta(pair.D, IC=tuple(range(pair.n)))
    return solve_gale_in_delta(pair, delta, [list(p) for p in cfg.points], config)


# -- direct route -------------------------------------------------------------


def _direct_newton(points, C, config: VerifierConfig) -> SolveReport:
    with np.errstate(over="ignore", invalid="ignore", divide="ignore", under="ignore"):
        return _direct_newton_impl(points, C, config)


def _direct_newton_impl(points, C, config: VerifierConfig) -> SolveReport:
    Pm = np.array([[float(v) for v in p] for p in points])  # n x d
    Cf = np.array([[float(v) for v in r] for r in C])  # d x n
    d = Pm.shape[1]
    per_axis = min(config.direct_grid, max(2, int(config.max_seeds ** (1.0 / d))))
    axis = np.linspace(-config.direct_box, config.direct_box, per_axis)
    U = np.array(list(product(axis, repeat=d)), dtype=float)
    nseeds = len(U)

    def normalized(U):
        E = U @ Pm.T  # s x n
        E = np.exp(E - E.max(axis=1, keepdims=True))
        F = E @ Cf.T  # s x d
        S = E @ np.abs(Cf).T
        dF = np.einsum("sj,ij,jl->sil", E, Cf, Pm)
        dS = np.einsum("sj,ij,jl->sil", E, np.abs(Cf), Pm)
        G = F / S
        JG = (dF - G[..., None] * dS) / S[..., None]
        return G, JG

    active = np.ones(nseeds, dtype=bool)
    for _ in range(config.max_newton):
        if not active.any():
            break
        Ua = U[active]
        G, JG = normalized(Ua)
        step = _newton_steps(JG, G)
        norm = np.linalg.norm(step, axis=1)
        step *= np.minimum(1.0, 2.0 / np.maximum(norm, 1e-300))[:, None]  # trust radius in log space
        Unew = Ua + step
        idx = np.flatnonzero(active)
        U[active] = Unew
        stop = (np.linalg.norm(step, axis=1) <= config.step_tol * (1 + np.linalg.norm(Ua, axis=1))) | (
            np.abs(Unew).max(axis=1) > 60
        )
        active[idx[stop]] = False
    U = U[np.all(np.isfinite(U), axis=1) & (np.abs(U).max(axis=1) <= 60)]
    # polish: a few undamped steps so half-converged iterates do not pose as extra roots
    for _ in range(config.polish):
        if not len(U):
            break
        G, JG = normalized(U)
        Unew = U + _newton_steps(JG, G)
        Gn, _ = normalized(Unew)
        better = np.all(np.isfinite(Unew), axis=1) & (np.abs(Gn).max(axis=1) <= np.abs(G).max(axis=1))
        U = np.where(better[:, None], Unew, U)
    notes = []
    # the relative residual also fades along directions to infinity of the torus
    far = np.abs(U).max(axis=1) > config.direct_limit
    if far.any():
        notes.append(f"{int(far.sum())} candidate(s) beyond |log x| > {config.direct_limit:g} discarded")
    U = U[~far]
    res = np.abs(normalized(U)[0]).max(axis=1) if len(U) else np.zeros(0)
    good = res < config.tol
    U, res = U[good], res[good]
    kept = _dedup(U, res, config.dedup) if len(U) else []
    roots = []
    for i in kept:
        x = np.exp(U[i])
        mono = np.exp(Pm @ U[i])
        J = (Cf * mono[None, :]) @ (Pm / x[None, :])  # df_i/dx_l
        det_rel = float(np.linalg.det(normalized(U[i:i + 1])[1][0]))
        degenerate = abs(det_rel) < config.degenerate
        detJ = float(np.linalg.det(J))
        roots.append(RootRecord(None, x, 0.0, float(res[i]), detJ, 0 if degenerate else int(np.sign(detJ)), degenerate))
    roots = _merge_degenerate(roots, lambda r: np.log(r.x), config.cluster)
    if any(r.degenerate for r in roots):
        notes.append("degenerate root found")
    return SolveReport(roots, not any(r.degenerate for r in roots), nseeds, notes)


def count_positive_roots_direct(points, C, config: Optional[VerifierConfig] = None) -> SolveReport:
    """Positive roots straight from the polynomial system.

    One variable with integer exponents: exact Sturm count (``converged``
    is True unless a positive root is repeated). Otherwise best-effort
    multi-start Newton in ``log x``.
    """
    config = config or VerifierConfig()
    cfg = ExponentConfiguration.from_points(points)
    C = linalg.as_fractions(C)
    if cfg.d == 1 and cfg.integer_flag:
        poly = sturm.laurent_to_poly([int(p[0]) for p in cfg.points], C[0])
        count = sturm.count_positive_roots(poly)
        repeated = sturm.has_repeated_positive_root(poly)
        notes = ["exact count by Sturm sequence"] + (["a positive root is repeated"] if repeated else [])
        return SolveReport([], not repeated, 0, notes, exact_count=count)
    return _direct_newton([list(p) for p in cfg.points], C, config)


# -- degree bookkeeping -------------------------------------------------------


@dataclass
class ParityReport:
    tally: dict[int, int]
    total: int
    expected: int
    consistent: bool
    three_or_more: bool
    excluded: int
    notes: list[str]


def jacobian_parity_report(records: Sequence[RootRecord], k: int) -> ParityReport:
    """Tally ``sign det J_{-g}`` at the roots against the degree ``(-1)^k``."""
    tally = {1: 0, -1: 0}
    excluded = 0
    for r in records:
        if r.degenerate or r.jacobian_sign == 0:
            excluded += 1
            continue
        tally[r.jacobian_sign] += 1
    total = tally[1] - tally[-1]
    expected = (-1) ** k
    notes = []
    if excluded:
        notes.append(f"{excluded} degenerate root(s) excluded from the tally")
    three = tally[(-1) ** (k + 1)] > 0
    if three:
        notes.append("a root with sign (-1)^(k+1) exists: at least three roots expected")
    return ParityReport(tally, total, expected, total == expected and not excluded, three, excluded, notes)
