"""Certificate records, JSON (de)serialization and exact re-verification.

A certificate stores everything needed to re-derive its verdict with exact
arithmetic: the Gale duals, the facet index set, the face-sign table and the
sign witnesses. :func:`recheck` uses only those stored values.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Optional, Sequence, Union

from galecert import geometry, linalg, lp
from galecert.linalg import shape

SCHEMA = "gale-cert/1"


class Status(str, Enum):
    POSITIVE_EXISTS = "POSITIVE_EXISTS"
    REAL_EXISTS = "REAL_EXISTS"
    NECESSARY_FAILS = "NECESSARY_FAILS"
    INCONCLUSIVE = "INCONCLUSIVE"


class Method(str, Enum):
    MAIN = "main"
    DOMINATING_SIGN = "dominating_sign"
    I_COMPATIBLE = "i_compatible"
    K2 = "k2"
    FOUR_QUADRANT = "four_quadrant"
    N_EQ_D_PLUS_1 = "n_eq_d_plus_1"


FaceCheck = tuple[tuple[int, ...], int, Union[int, str]]


@dataclass
class Certificate:
    status: Status
    method: Optional[Method]
    points: list[list[Fraction]]
    C: list[list[Fraction]]
    B: Optional[list[list[Fraction]]] = None
    D: Optional[list[list[Fraction]]] = None
    I_C: Optional[tuple[int, ...]] = None
    face_checks: list[FaceCheck] = field(default_factory=list)
    facet_checks: list[tuple[int, tuple[Fraction, ...]]] = field(default_factory=list)
    sign_witnesses: list[list[Fraction]] = field(default_factory=list)
    positive_witness: Optional[list[Fraction]] = None
    separating_functional: Optional[list[Fraction]] = None
    orthant: Optional[dict] = None
    route_data: dict = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    @property
    def A(self) -> list[list[Fraction]]:
        return geometry.lift(self.points)

    @property
    def positive(self) -> bool:
        return self.status in (Status.POSITIVE_EXISTS, Status.REAL_EXISTS)

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "status": self.status.value,
            "method": self.method.value if self.method else None,
            "points": _enc(self.points),
            "C": _enc(self.C),
            "witnesses": {
                "B": _enc(self.B),
                "D": _enc(self.D),
                "I_C": list(self.I_C) if self.I_C is not None else None,
                "face_checks": [[list(L), j, s] for L, j, s in self.face_checks],
                "facet_checks": [[i, _enc(list(prods))] for i, prods in self.facet_checks],
                "sign_witnesses": _enc(self.sign_witnesses),
                "positive_witness": _enc(self.positive_witness),
                "separating_functional": _enc(self.separating_functional),
            },
            "orthant": _enc_tree(self.orthant),
            "route_data": _enc_tree(self.route_data),
            "notes": list(self.notes),
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, doc: dict) -> "Certificate":
        if doc.get("schema") != SCHEMA:
            raise ValueError(f"unknown certificate schema {doc.get('schema')!r}")
        w = doc.get("witnesses", {})
        return cls(
            status=Status(doc["status"]),
            method=Method(doc["method"]) if doc.get("method") else None,
            points=_dec(doc["points"]),
            C=_dec(doc["C"]),
            B=_dec(w.get("B")),
            D=_dec(w.get("D")),
            I_C=tuple(w["I_C"]) if w.get("I_C") is not None else None,
            face_checks=[(tuple(L), j, s) for L, j, s in w.get("face_checks", [])],
            facet_checks=[(i, tuple(_dec(p))) for i, p in w.get("facet_checks", [])],
            sign_witnesses=_dec(w.get("sign_witnesses")) or [],
            positive_witness=_dec(w.get("positive_witness")),
            separating_functional=_dec(w.get("separating_functional")),
            orthant=doc.get("orthant"),
            route_data=doc.get("route_data") or {},
            notes=list(doc.get("notes", [])),
        )

    @classmethod
    def from_json(cls, text: str) -> "Certificate":
        return cls.from_dict(json.loads(text))


def _enc(x):
    if x is None:
        return None
    if isinstance(x, (list, tuple)):
        return [_enc(v) for v in x]
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, int):
        return str(x)
    return x


def _dec(x):
    if x is None:
        return None
    if isinstance(x, list):
        return [_dec(v) for v in x]
    return Fraction(x)


def _enc_tree(x):
    if isinstance(x, dict):
        return {k: _enc_tree(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_enc_tree(v) for v in x]
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, Enum):
        return x.value
    return x


# -- the two conditions -------------------------------------------------------


@dataclass
class MainCheck:
    """Outcome of checking both conditions of the boundary-sign criterion."""

    I_C: tuple[int, ...]
    delta: geometry.DeltaPolytope
    face_checks: list[FaceCheck]
    facet_checks: list[tuple[int, tuple[Fraction, ...]]]
    faces_ok: bool
    facets_ok: bool
    failures: list[str]

    @property
    def ok(self) -> bool:
        return self.faces_ok and self.facets_ok


def face_condition(B, delta: geometry.DeltaPolytope, pair=None) -> tuple[list[FaceCheck], list[str]]:
    """For each face ``L`` and column ``j``, the sign of ``g_j`` forced on ``F_L``.

    ``B_L`` is not weakly mixed iff some column gives a strict sign.
    """
    B = linalg.as_fractions(B)
    k = shape(B)[1]
    if pair is None:
        pair = geometry.GaleDualPair([[1]], [[1]], B, [[1] + [0] * k for _ in B])
    rows, bad = [], []
    for L in delta.faces():
        signs = [geometry.boundary_sign(pair, delta, L, j) for j in range(k)]
        for j, s in enumerate(signs):
            rows.append((tuple(sorted(L)), j, s))
        if not any(s in (1, -1) for s in signs):
            bad.append(f"B restricted to face {sorted(L)} is weakly mixed")
    return rows, bad


def facet_condition(B, D, IC) -> tuple[list[tuple[int, tuple[Fraction, ...]]], list[str]]:
    """Products ``b_ij * d_ij`` on each facet row plus the zero-pattern rule."""
    rows, bad = [], []
    k = shape(B)[1]
    for i in IC:
        prods = tuple(B[i][j] * D[i][j + 1] for j in range(k))
        rows.append((i, prods))
        if any(p < 0 for p in prods):
            bad.append(f"row {i}: b*d has a negative entry")
        if not any(p > 0 for p in prods):
            bad.append(f"row {i}: no strictly positive b*d")
        if any(B[i][j] == 0 and D[i][j + 1] != 0 for j in range(k)):
            bad.append(f"row {i}: b=0 but d!=0")
    return rows, bad


def check_main_conditions(A, C, B, D, delta: Optional[geometry.DeltaPolytope] = None) -> MainCheck:
    """Exact check of the face and facet conditions for the Gale pair ``(B, D)``.

    Raises :class:`geometry.GeometryError` when the pair is not a Gale pair
    or the polytope is empty or unbounded, and ``ValueError`` when ``C`` is
    not uniform.
    """
    pair = geometry.GaleDualPair(A, C, B, D)
    pair.check()
    if not linalg.is_uniform(pair.C):
        raise ValueError("coefficient matrix is not uniform")
    if delta is None:
        delta = geometry.build_delta(pair.D)
    else:
        # the face lattice only depends on C, but boundedness depends on D
        if not geometry.is_full_dimensional(pair.D):
            raise geometry.Infeasible("infeasible: the polytope has empty interior")
        if not geometry.is_bounded(pair.D):
            raise geometry.Unbounded("unbounded polytope; normalize the Gale dual first")
    IC = delta.facet_index_set
    face_rows, bad_faces = face_condition(pair.B, delta, pair)
    facet_rows, bad_facets = facet_condition(pair.B, pair.D, IC)
    return MainCheck(IC, delta, face_rows, facet_rows, not bad_faces, not bad_facets, bad_faces + bad_facets)


def separating_functional(C) -> Optional[list[Fraction]]:
    """``y`` with ``y C >= 0`` and ``sum(y C) >= 1``; exists iff the necessary condition fails."""
    C = linalg.as_fractions(C)
    d, n = shape(C)
    cols = linalg.columns(C)
    ge = [(list(c), 0) for c in cols]
    ge.append(([sum((c[t] for c in cols), Fraction(0)) for t in range(d)], 1))
    return lp.feasible_point(d, ge=ge)


# -- self validation ----------------------------------------------------------


class RecheckError(AssertionError):
    pass


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise RecheckError(msg)


def recheck(cert: Union[Certificate, str, dict]) -> bool:
    """Re-verify a certificate from its stored witnesses; raises on failure."""
    if isinstance(cert, str):
        cert = Certificate.from_json(cert)
    elif isinstance(cert, dict):
        cert = Certificate.from_dict(cert)
    A = cert.A
    C = linalg.as_fractions(cert.C)
    d, n = shape(C)
    if cert.status == Status.INCONCLUSIVE:
        return True
    if cert.status == Status.NECESSARY_FAILS:
        y = cert.separating_functional
        _require(y is not None, "missing separating functional")
        yc = [sum((y[t] * C[t][j] for t in range(d)), Fraction(0)) for j in range(n)]
        _require(all(v >= 0 for v in yc) and any(v > 0 for v in yc), "separating functional is invalid")
        return True
    if cert.status == Status.REAL_EXISTS:
        o = cert.orthant or {}
        s = [int(v) for v in o.get("s", [])]
        _require(len(s) == len(cert.points[0]), "orthant vector has the wrong length")
        # witnesses refer to the sign-flipped coefficients C_s
        inner = Certificate(
            status=Status.POSITIVE_EXISTS,
            method=cert.method,
            points=cert.points,
            C=flip_coefficients(cert.points, C, s),
            B=cert.B,
            D=cert.D,
            I_C=cert.I_C,
            face_checks=cert.face_checks,
            facet_checks=cert.facet_checks,
            sign_witnesses=cert.sign_witnesses,
            positive_witness=cert.positive_witness,
        )
        return recheck(inner)
    # positive certificates
    v = cert.positive_witness
    _require(v is not None and len(v) == n, "missing positive kernel witness")
    _require(all(x > 0 for x in v), "kernel witness is not positive")
    _require(all(x == 0 for x in linalg.matvec(C, v)), "kernel witness is not in ker(C)")
    if cert.method == Method.N_EQ_D_PLUS_1:
        _require(n == d + 1, "simplex certificate needs n = d + 1")
        _require(linalg.rank(A) == d + 1, "exponents are not affinely independent")
        return True
    _require(cert.B is not None and cert.D is not None, "missing Gale duals")
    try:
        chk = check_main_conditions(A, C, cert.B, cert.D)
    except (geometry.GeometryError, ValueError) as exc:
        raise RecheckError(str(exc)) from exc
    _require(chk.ok, "; ".join(chk.failures))
    if cert.I_C is not None:
        _require(tuple(cert.I_C) == tuple(chk.I_C), "stored facet index set differs")
    if cert.face_checks:
        stored = {(tuple(L), int(j)): s for L, j, s in cert.face_checks}
        fresh = {(tuple(L), j): s for L, j, s in chk.face_checks}
        _require(stored == fresh, "stored face-sign table differs")
    for w in cert.sign_witnesses:
        _require(all(x == 0 for x in linalg.matvec(C, w)), "sign witness is not in ker(C)")
    return True


def flip_coefficients(points, C, s: Sequence[int]) -> list[list[Fraction]]:
    """``(C_s)_ij = (-1)^<s, a_j> c_ij`` for integer exponents."""
    C = linalg.as_fractions(C)
    out = [list(r) for r in C]
    for j, a in enumerate(points):
        e = sum(int(si) * int(Fraction(aj)) for si, aj in zip(s, a))
        if e % 2:
            for r in out:
                r[j] = -r[j]
    return out


def flip_gale_rows(points, D, s: Sequence[int]) -> list[list[Fraction]]:
    """``(D_s)_i = (-1)^<s, a_i> P_i``, a Gale dual of ``C_s``."""
    D = linalg.as_fractions(D)
    out = []
    for row, a in zip(D, points):
        e = sum(int(si) * int(Fraction(aj)) for si, aj in zip(s, a))
        out.append([-x for x in row] if e % 2 else list(row))
    return out
