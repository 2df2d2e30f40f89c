"""Certificate routes for the existence of positive (and real) solutions.

Each route builds a Gale pair ``(B, D)`` by its own criterion and then the
pair is checked against the two boundary conditions exactly, so every
positive certificate carries a complete, re-checkable witness.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cmp_to_key
from fractions import Fraction
from itertools import combinations, product
from typing import Callable, Optional, Sequence

from galecert import combinatorics as comb
from galecert import geometry, linalg
from galecert.certificate import (
    Certificate,
    Method,
    Status,
    check_main_conditions,
    face_condition,
    flip_coefficients,
    flip_gale_rows,
    separating_functional,
)
from galecert.geometry import ExponentConfiguration, GeometryError
from galecert.linalg import shape, sign

log = logging.getLogger(__name__)

ROUTES = ("simplex", "main", "dominating", "k2", "four_quadrant", "icompatible")


@dataclass(frozen=True)
class CertifierConfig:
    route_order: tuple[str, ...] = ROUTES
    main_candidates: int = 40  # circuit bases tried by the main route
    dominating_limit: int = 200
    quadrant_bound: int = 10  # |entries| of unimodular base changes
    icompat_max_n: int = 8


@dataclass
class GaleInput:
    """Gale duals supplied by the caller (tried first by the main route)."""

    B: list[list[Fraction]]
    D: list[list[Fraction]]


# -- shared helpers -----------------------------------------------------------


def _setup(points, C):
    cfg = ExponentConfiguration.from_points(points)
    C = linalg.as_fractions(C)
    if shape(C) != (cfg.d, cfg.n):
        raise ValueError(f"coefficient matrix must be {cfg.d}x{cfg.n}, got {shape(C)}")
    return cfg, C


def _plain_points(cfg) -> list[list[Fraction]]:
    return [list(p) for p in cfg.points]


def necessary_fails(cfg, C, method=None, note="0 is not in the open positive cone of the columns of C") -> Certificate:
    return Certificate(
        status=Status.NECESSARY_FAILS,
        method=method,
        points=_plain_points(cfg),
        C=C,
        separating_functional=separating_functional(C),
        notes=[note],
    )


def inconclusive(cfg, C, method, notes: Sequence[str], **kw) -> Certificate:
    notes = list(notes) + ["INCONCLUSIVE is not a claim that no positive solution exists"]
    return Certificate(status=Status.INCONCLUSIVE, method=method, points=_plain_points(cfg), C=C, notes=notes, **kw)


def generic_gale(C) -> list[list[Fraction]]:
    """A Gale dual of ``C`` normalized so that its polytope is bounded."""
    return geometry.normalize_gale_dual(linalg.kernel_basis(C))


def reference_delta(C) -> geometry.DeltaPolytope:
    """The polytope of the normalized generic Gale dual (its faces depend on C only)."""
    return geometry.build_delta(generic_gale(C))


def witness_columns(C, B, I: Optional[Sequence[int]] = None) -> Optional[list[list[Fraction]]]:
    """Kernel vectors of ``C`` sign-matching the columns of ``B`` (on ``I`` if given)."""
    out = []
    for col in linalg.columns(B):
        sigma = linalg.sign_vector(col)
        w = linalg.sign_realizable(C, sigma) if I is None else linalg.sign_realizable_restricted(C, sigma, I)
        if w is None:
            return None
        out.append(w)
    return out


def make_independent(C, cols, sigmas, I: Sequence[int]) -> Optional[list[list[Fraction]]]:
    """Perturb dependent columns inside ``ker C`` without changing signs on ``I``.

    Column ``j`` is replaced by ``col + lam * v`` with ``v`` vanishing where
    ``sigma_j`` is zero on ``I`` and ``lam`` half the smallest step that
    would flip a strict sign on ``I``.
    """
    C = linalg.as_fractions(C)
    n = shape(C)[1]
    out: list[list[Fraction]] = []
    for col, sigma in zip(cols, sigmas):
        col = list(col)
        if linalg.rank(out + [col]) == len(out) + 1:
            out.append(col)
            continue
        Z = [i for i in I if sigma[i] == 0]
        rows = [list(r) for r in C] + [[Fraction(int(j == i)) for j in range(n)] for i in Z]
        v = next((w for w in linalg.nullspace(rows, n) if linalg.rank(out + [w]) == len(out) + 1), None)
        if v is None:
            return None
        limits = [abs(col[i] / v[i]) for i in I if sigma[i] != 0 and v[i] != 0 and sign(v[i]) != sigma[i]]
        lam = min(limits) / 2 if limits else Fraction(1)
        new = [a + lam * b for a, b in zip(col, v)]
        if linalg.rank(out + [new]) != len(out) + 1:
            return None
        out.append(new)
    return out


def _finish(method, cfg, C, B, D, *, positive_witness, delta=None, sign_witnesses=(), route_data=None, notes=()) -> Certificate:
    """Run the exact two-condition check on a route's witness pair."""
    route_data = dict(route_data or {})
    try:
        chk = check_main_conditions(cfg.A, C, B, D, delta)
    except (GeometryError, ValueError) as exc:
        return inconclusive(cfg, C, method, list(notes) + [f"witness pair rejected: {exc}"], B=B, D=D, route_data=route_data)
    status = Status.POSITIVE_EXISTS if chk.ok else Status.INCONCLUSIVE
    notes = list(notes) + chk.failures
    if not chk.ok:
        notes.append("INCONCLUSIVE is not a claim that no positive solution exists")
    return Certificate(
        status=status,
        method=method,
        points=_plain_points(cfg),
        C=C,
        B=linalg.as_fractions(B),
        D=linalg.as_fractions(D),
        I_C=tuple(chk.I_C),
        face_checks=chk.face_checks,
        facet_checks=chk.facet_checks,
        sign_witnesses=[list(w) for w in sign_witnesses],
        positive_witness=positive_witness,
        route_data=route_data,
        notes=notes,
    )


def _require_uniform(M, what: str) -> None:
    if not linalg.is_uniform(M):
        raise ValueError(f"{what} is not uniform")


def _augment_or_none(C, cols) -> Optional[list[list[Fraction]]]:
    n = shape(C)[1]
    Dt = linalg.from_columns(cols, n)
    if linalg.positive_left_kernel_vector(Dt) is None:
        return None
    return geometry.augment_with_positive_vector(C, Dt)


# -- simplex case -------------------------------------------------------------


def certify_simplex_case(points, C) -> Certificate:
    """``n = d + 1``: a positive solution exists iff ``ker C`` meets the open orthant."""
    cfg, C = _setup(points, C)
    if cfg.n != cfg.d + 1:
        raise ValueError("simplex case needs n = d + 1")
    v = linalg.positive_kernel_vector(C)
    if v is None:
        return necessary_fails(cfg, C, Method.N_EQ_D_PLUS_1)
    return Certificate(
        status=Status.POSITIVE_EXISTS,
        method=Method.N_EQ_D_PLUS_1,
        points=_plain_points(cfg),
        C=C,
        positive_witness=v,
        notes=["simplex support: the necessary condition is also sufficient"],
    )


# -- boundary-sign criterion --------------------------------------------------


def certify_main(points, C, B, D) -> Certificate:
    """Check both boundary conditions for a given Gale pair."""
    cfg, C = _setup(points, C)
    _require_uniform(C, "coefficient matrix")
    v = linalg.positive_kernel_vector(C)
    if v is None:
        return necessary_fails(cfg, C, Method.MAIN)
    chk = check_main_conditions(cfg.A, C, B, D)
    notes = list(chk.failures)
    if not chk.ok:
        notes.append("INCONCLUSIVE is not a claim that no positive solution exists")
    return Certificate(
        status=Status.POSITIVE_EXISTS if chk.ok else Status.INCONCLUSIVE,
        method=Method.MAIN,
        points=_plain_points(cfg),
        C=C,
        B=linalg.as_fractions(B),
        D=linalg.as_fractions(D),
        I_C=tuple(chk.I_C),
        face_checks=chk.face_checks,
        facet_checks=chk.facet_checks,
        positive_witness=v,
        notes=notes,
    )


def _default_B(cfg) -> list[list[Fraction]]:
    if cfg.integer_flag:
        return linalg.as_fractions(linalg.z_gale_dual(cfg.A))
    return linalg.kernel_basis(cfg.A)


def search_main(points, C, config: Optional[CertifierConfig] = None, gale: Optional[GaleInput] = None) -> Certificate:
    """Main route with a search over Gale pairs.

    Candidates for ``B``: the supplied one, a default basis, then bases of
    circuits. For each ``B`` passing the face condition, ``D`` is the
    supplied one, the normalized generic one, or one assembled from kernel
    vectors of ``C`` sign-matching ``B`` (first everywhere, then on ``I_C``).
    """
    config = config or CertifierConfig()
    cfg, C = _setup(points, C)
    _require_uniform(C, "coefficient matrix")
    v = linalg.positive_kernel_vector(C)
    if v is None:
        return necessary_fails(cfg, C, Method.MAIN)
    if gale is not None:
        cert = certify_main(points, C, gale.B, gale.D)
        if cert.status == Status.POSITIVE_EXISTS:
            return cert
    D0 = generic_gale(C)
    delta = geometry.build_delta(D0)
    IC = delta.facet_index_set
    seen = set()
    candidates = []
    if gale is not None:
        candidates.append(linalg.as_fractions(gale.B))
    candidates.append(_default_B(cfg))
    candidates.extend(comb.circuit_bases(cfg.A, limit=config.main_candidates))
    tried = 0
    for B in candidates:
        key = tuple(map(tuple, B))
        if key in seen:
            continue
        seen.add(key)
        tried += 1
        _, bad = face_condition(B, delta)
        if bad:
            continue
        sigmas = [linalg.sign_vector(c) for c in linalg.columns(B)]
        Ds = [D0]
        for I in (None, IC):
            cols = witness_columns(C, B, I)
            if cols is None:
                continue
            cols = make_independent(C, cols, sigmas, range(cfg.n) if I is None else I)
            if cols is None:
                continue
            D = _augment_or_none(C, cols)
            if D is not None:
                Ds.append(D)
        for D in Ds:
            try:
                chk = check_main_conditions(cfg.A, C, B, D, delta)
            except (GeometryError, ValueError):
                continue
            if chk.ok:
                return _finish(
                    Method.MAIN, cfg, C, B, D, positive_witness=v, delta=delta,
                    sign_witnesses=[c for c in linalg.columns(D)[1:]],
                    route_data={"candidates_tried": tried},
                )
    return inconclusive(cfg, C, Method.MAIN, [f"no Gale pair among {tried} candidates satisfies both conditions"], I_C=IC)


# -- dominating Gale duals ----------------------------------------------------


def dominating_invariants(B) -> dict:
    """Checks every mixed dominating matrix must pass; raises if one fails."""
    B = linalg.as_fractions(B)
    k = shape(B)[1]
    if k and linalg.rank(B) != k:
        raise AssertionError("dominating matrix with dependent columns")
    lam = linalg.positive_left_kernel_vector(B) if comb.is_mixed(B) else None
    if comb.is_mixed(B) and lam is None:
        raise AssertionError("mixed dominating matrix without a positive left-kernel vector")
    return {"independent": True, "left_kernel_witness": lam}


def certify_dominating(points, C, config: Optional[CertifierConfig] = None) -> Certificate:
    """Dominating Gale dual of ``A`` whose column signs are realized in ``ker C``."""
    config = config or CertifierConfig()
    cfg, C = _setup(points, C)
    _require_uniform(cfg.A, "lifted exponent matrix")
    _require_uniform(C, "coefficient matrix")
    v = linalg.positive_kernel_vector(C)
    if v is None:
        return necessary_fails(cfg, C, Method.DOMINATING_SIGN)
    found = 0
    for B in comb.iter_dominating_gale(cfg.A, limit=config.dominating_limit):
        found += 1
        inv = dominating_invariants(B)
        cols = witness_columns(C, B)
        if cols is None:
            continue
        Dt = linalg.from_columns(cols, cfg.n)
        dominating_invariants(Dt)
        D = geometry.augment_with_positive_vector(C, Dt)
        return _finish(
            Method.DOMINATING_SIGN, cfg, C, B, D, positive_witness=v, sign_witnesses=cols,
            route_data={"left_kernel_witness": inv["left_kernel_witness"]},
        )
    if not found:
        return inconclusive(cfg, C, Method.DOMINATING_SIGN, ["A has no dominating Gale dual"])
    return inconclusive(cfg, C, Method.DOMINATING_SIGN, [f"no sign pattern of {found} dominating duals is realized in ker(C)"])


# -- I-compatibility ----------------------------------------------------------


def certify_icompatible(points, C, config: Optional[CertifierConfig] = None) -> Certificate:
    config = config or CertifierConfig()
    cfg, C = _setup(points, C)
    Cbar = comb.lifted([tuple(c) for c in linalg.columns(C)])
    _require_uniform(cfg.A, "lifted exponent matrix")
    _require_uniform(C, "coefficient matrix")
    _require_uniform(Cbar, "lifted coefficient matrix")
    v = linalg.positive_kernel_vector(C)
    if v is None:
        return necessary_fails(cfg, C, Method.I_COMPATIBLE)
    n, d = cfg.n, cfg.d
    if n > config.icompat_max_n:
        return inconclusive(cfg, C, Method.I_COMPATIBLE, [f"n={n} exceeds the subset search limit"])
    pts = [list(p) for p in cfg.points]
    cpts = [tuple(c) for c in linalg.columns(C)]
    must = set(comb.hull_vertices(pts)) | set(comb.hull_vertices(cpts))
    for size in range(d + 2, n + 1):
        for I in combinations(range(n), size):
            if not must <= set(I):
                continue
            res = comb.i_compatible(pts, C, I)
            if res is None:
                continue
            B, Dt = comb.icompatible_block_matrices(res, n)
            if not comb.is_dominating(B):
                raise AssertionError("block matrix built from an I-compatible pair is not dominating")
            dominating_invariants(B)
            cols = linalg.columns(Dt)
            if any(linalg.sign_vector(a) != linalg.sign_vector(b) for a, b in zip(cols, linalg.columns(B))):
                cols = witness_columns(C, B)
                if cols is None:
                    continue
            D = geometry.augment_with_positive_vector(C, linalg.from_columns(cols, n))
            return _finish(
                Method.I_COMPATIBLE, cfg, C, B, D, positive_witness=v, sign_witnesses=cols,
                route_data={"I": list(I), "simplices": {str(j): list(J) for j, J in res.simplices.items()}},
            )
    return inconclusive(cfg, C, Method.I_COMPATIBLE, ["no index set I makes A and C compatible"])


# -- codimension two ----------------------------------------------------------


def _open_cone_contains(b1, b2, b) -> bool:
    """``b`` in ``R_{>0} b1 + R_{<0} b2`` (``b1``, ``b2`` independent)."""
    sol = linalg.solve_square([[b1[0], b2[0]], [b1[1], b2[1]]], list(b))
    return sol is not None and sol[0] > 0 and sol[1] < 0


def k2_pairs(B, IC) -> list[tuple[int, int]]:
    """Valid ``(i2, i1)`` pairs in lexicographic order."""
    out = []
    for i2 in IC:
        for i1 in IC:
            if i1 == i2:
                continue
            if linalg.rank([B[i1], B[i2]]) < 2:
                continue
            if any(_open_cone_contains(B[i1], B[i2], B[i]) for i in IC if i not in (i1, i2)):
                continue
            out.append((i2, i1))
    return out


def k2_basis_change(B, i1: int, i2: int) -> tuple[list[list[Fraction]], list[list[Fraction]], Fraction]:
    """``R`` with ``B_{i1,i2} R = a Id``; ``a = |det|`` keeps integer entries integral."""
    M = [list(B[i1]), list(B[i2])]
    det = M[0][0] * M[1][1] - M[0][1] * M[1][0]
    adj = [[M[1][1], -M[0][1]], [-M[1][0], M[0][0]]]
    s = 1 if det > 0 else -1
    R = [[s * x for x in row] for row in adj]
    return linalg.matmul(B, R), R, abs(det)


def certify_k2(points, C, config: Optional[CertifierConfig] = None) -> Certificate:
    cfg, C = _setup(points, C)
    if cfg.k != 2:
        raise ValueError("the codimension-two route needs k = 2")
    _require_uniform(cfg.A, "lifted exponent matrix")
    _require_uniform(C, "coefficient matrix")
    v = linalg.positive_kernel_vector(C)
    if v is None:
        return necessary_fails(cfg, C, Method.K2)
    delta = reference_delta(C)
    IC = delta.facet_index_set
    B = _default_B(cfg)
    pairs = k2_pairs(B, IC)
    for i2, i1 in pairs:
        Bp, R, a = k2_basis_change(B, i1, i2)
        sigmas = [linalg.sign_vector(c) for c in linalg.columns(Bp)]
        cols = witness_columns(C, Bp, IC)
        if cols is None:
            continue
        cols = make_independent(C, cols, sigmas, IC)
        if cols is None:
            continue
        D = _augment_or_none(C, cols)
        if D is None:
            continue
        return _finish(
            Method.K2, cfg, C, Bp, D, positive_witness=v, delta=delta, sign_witnesses=cols,
            route_data={"i1": i1, "i2": i2, "R": R, "scale": a},
        )
    note = "no valid (i1, i2) pair" if not pairs else "facet rows of B' are not sign-realizable in ker(C)"
    return inconclusive(cfg, C, Method.K2, [note], I_C=IC)


def certify_four_quadrant(points, C, config: Optional[CertifierConfig] = None) -> Certificate:
    config = config or CertifierConfig()
    cfg, C = _setup(points, C)
    if cfg.k != 2:
        raise ValueError("the four-quadrant route needs k = 2")
    _require_uniform(cfg.A, "lifted exponent matrix")
    _require_uniform(C, "coefficient matrix")
    v = linalg.positive_kernel_vector(C)
    if v is None:
        return necessary_fails(cfg, C, Method.FOUR_QUADRANT)
    delta = reference_delta(C)
    IC = delta.facet_index_set
    hit = comb.four_quadrant_rows(_default_B(cfg), bound=config.quadrant_bound)
    if hit is None:
        return inconclusive(cfg, C, Method.FOUR_QUADRANT, ["no searched Z-basis has rows in all four open quadrants"], I_C=IC)
    if not set(hit.rows) <= set(IC):
        return inconclusive(
            cfg, C, Method.FOUR_QUADRANT,
            [f"rows {list(hit.rows)} are not all facet normals (I_C={list(IC)})"], I_C=IC,
        )
    Bp = hit.B
    sigmas = [linalg.sign_vector(c) for c in linalg.columns(Bp)]
    cols = witness_columns(C, Bp, IC)
    if cols is None:
        return inconclusive(cfg, C, Method.FOUR_QUADRANT, ["column signs on I_C are not realized in ker(C)"], I_C=IC)
    cols = make_independent(C, cols, sigmas, IC)
    D = _augment_or_none(C, cols) if cols is not None else None
    if D is None:
        return inconclusive(cfg, C, Method.FOUR_QUADRANT, ["could not assemble a Gale dual of C"], I_C=IC)
    return _finish(
        Method.FOUR_QUADRANT, cfg, C, Bp, D, positive_witness=v, delta=delta, sign_witnesses=cols,
        route_data={"rows": list(hit.rows), "R": [list(r) for r in hit.R]},
    )


# -- circuits -----------------------------------------------------------------


def circuit_parity(points, C) -> str:
    """Parity ("odd"/"even") predicted by the sign change of the extremal
    affine-relation coefficients in the angular order of the rows of ``D``.

    Without a positive kernel vector there are no positive roots at all,
    which is reported as "even".
    """
    cfg, C = _setup(points, C)
    if cfg.k != 1:
        raise ValueError("circuit parity needs k = 1")
    _require_uniform(cfg.A, "lifted exponent matrix")
    _require_uniform(C, "coefficient matrix")
    if linalg.positive_kernel_vector(C) is None:
        return "even"
    lam = [row[0] for row in linalg.kernel_basis(cfg.A)]
    D = generic_gale(C)

    def cmp(i, j):
        det = D[i][0] * D[j][1] - D[i][1] * D[j][0]
        return -1 if det > 0 else (1 if det < 0 else 0)

    order = sorted(range(cfg.n), key=cmp_to_key(cmp))
    return "odd" if lam[order[0]] * lam[order[-1]] < 0 else "even"


# -- real solutions by orthant ------------------------------------------------


@dataclass
class OrthantClass:
    epsilon: tuple[int, ...]
    representative: tuple[int, ...]
    multiplicity: int
    orthants: list[tuple[int, ...]] = field(default_factory=list)
    complement_in_image: bool = False


def orthant_classes(points) -> list[OrthantClass]:
    """Group the ``2^d`` orthants by the mod-2 pattern ``[s A']_2``."""
    cfg = ExponentConfiguration.from_points(points)
    if not cfg.integer_flag:
        raise ValueError("orthant classes need integer exponents")
    Ap = linalg.as_integers(cfg.A_prime)
    d, n = cfg.d, cfg.n
    groups: dict[tuple[int, ...], list[tuple[int, ...]]] = {}
    for s in product((0, 1), repeat=d):
        eps = tuple(sum(s[t] * Ap[t][j] for t in range(d)) % 2 for j in range(n))
        groups.setdefault(eps, []).append(s)
    out = []
    for eps in sorted(groups):
        comp = tuple(1 - e for e in eps)
        ss = sorted(groups[eps])
        out.append(OrthantClass(eps, ss[0], len(ss), ss, comp in groups))
    return out


def certify_real_orthants(points, C, config: Optional[CertifierConfig] = None, gale: Optional[GaleInput] = None,
                          route: Optional[Callable] = None) -> dict[tuple[int, ...], Certificate]:
    """Run the positive pipeline on each sign-flipped system ``C_s``."""
    config = config or CertifierConfig()
    cfg, C = _setup(points, C)
    route = route or certify_auto
    classes = orthant_classes(points)
    out = {}
    for oc in classes:
        s = oc.representative
        Cs = flip_coefficients(cfg.points, C, s)
        g = GaleInput(gale.B, flip_gale_rows(cfg.points, gale.D, s)) if gale is not None else None
        inner = route(points, Cs, config, gale=g) if route is certify_auto else route(points, Cs)
        info = {
            "s": list(s),
            "epsilon": list(oc.epsilon),
            "multiplicity": oc.multiplicity,
            "orthants": [list(t) for t in oc.orthants],
        }
        inner.orthant = info
        inner.C = C
        if inner.status == Status.POSITIVE_EXISTS:
            inner.status = Status.REAL_EXISTS
            inner.notes.append(f"positive solution of the system flipped by s={list(s)}")
        elif inner.status == Status.NECESSARY_FAILS:
            # the separating functional certifies the flipped system, keep it
            inner.notes.append(f"necessary condition fails for the system flipped by s={list(s)}")
        out[oc.epsilon] = inner
    real = sum(1 for c in out.values() if c.status == Status.REAL_EXISTS)
    bound = 2 ** linalg.rank_mod2(linalg.as_integers(cfg.A))
    if real > bound:
        raise AssertionError(f"{real} certified components exceed the bound {bound}")
    return out


# -- dispatch -----------------------------------------------------------------


def certify_auto(points, C, config: Optional[CertifierConfig] = None, gale: Optional[GaleInput] = None) -> Certificate:
    """Try the routes in ``config.route_order``; first positive certificate wins."""
    config = config or CertifierConfig()
    cfg, C = _setup(points, C)
    if linalg.positive_kernel_vector(C) is None:
        return necessary_fails(cfg, C)
    if cfg.n == cfg.d + 1:
        return certify_simplex_case(points, C)
    notes = []
    for name in config.route_order:
        if name == "simplex":
            continue
        try:
            cert = run_route(name, points, C, config, gale)
        except (ValueError, GeometryError, linalg.RankError) as exc:
            notes.append(f"{name}: not applicable ({exc})")
            continue
        if cert.status == Status.POSITIVE_EXISTS:
            cert.notes = notes + cert.notes
            return cert
        notes.append(f"{name}: " + "; ".join(n for n in cert.notes if not n.startswith("INCONCLUSIVE")))
    return inconclusive(cfg, C, None, notes)


def run_route(name: str, points, C, config: Optional[CertifierConfig] = None, gale: Optional[GaleInput] = None) -> Certificate:
    config = config or CertifierConfig()
    if name == "simplex":
        return certify_simplex_case(points, C)
    if name == "main":
        return search_main(points, C, config, gale)
    if name == "dominating":
        return certify_dominating(points, C, config)
    if name == "k2":
        return certify_k2(points, C, config)
    if name == "four_quadrant":
        return certify_four_quadrant(points, C, config)
    if name == "icompatible":
        return certify_icompatible(points, C, config)
    raise ValueError(f"unknown route {name!r}")
