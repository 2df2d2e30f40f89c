"""Command-line interface: ``galecert {certify,verify,orthants,gale} FILE``.

Exit codes: 0 a positive or real solution is certified (for ``verify``: both
solvers agree without degeneracy), 2 the necessary sign condition fails,
3 inconclusive, 1 malformed input, 4 a certificate failed its own recheck.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from fractions import Fraction
from typing import Callable, Optional

from galecert import certifier, geometry, linalg, numeric
from galecert.certificate import Certificate, RecheckError, Status, check_main_conditions, recheck
from galecert.geometry import ExponentConfiguration
from galecert.system import InputError, SystemDescription, load, parse_sweep

EXIT_OK, EXIT_INPUT, EXIT_NECESSARY, EXIT_INCONCLUSIVE, EXIT_RECHECK = 0, 1, 2, 3, 4

METHODS = {
    "auto": None,
    "main": "main",
    "dominating": "dominating",
    "icompat": "icompatible",
    "k2": "k2",
    "quadrants": "four_quadrant",
}

STATUS_EXIT = {
    Status.POSITIVE_EXISTS: EXIT_OK,
    Status.REAL_EXISTS: EXIT_OK,
    Status.NECESSARY_FAILS: EXIT_NECESSARY,
    Status.INCONCLUSIVE: EXIT_INCONCLUSIVE,
}


class Output:
    def __init__(self, quiet: bool):
        self.quiet = quiet

    def __call__(self, *lines: str) -> None:
        if not self.quiet:
            for line in lines:
                print(line)


def fmt(x) -> str:
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (list, tuple)):
        return "(" + ", ".join(fmt(v) for v in x) + ")"
    return str(x)


def fmt_matrix(M, indent: str = "  ") -> list[str]:
    rows = [[fmt(x) for x in r] for r in M]
    if not rows or not rows[0]:
        return [indent + "(empty)"]
    w = max(len(s) for r in rows for s in r)
    return [indent + f"{i + 1:>3}: " + " ".join(s.rjust(w) for s in r) for i, r in enumerate(rows)]


def one_based(idx) -> list[int]:
    return [i + 1 for i in sorted(idx)]


# -- certify ------------------------------------------------------------------


def certify_system(desc: SystemDescription, method: Optional[str], config: certifier.CertifierConfig) -> Certificate:
    points, C = desc.points, desc.C
    gale = desc.gale()
    gin = certifier.GaleInput(*gale) if gale is not None else None
    if method is None:
        return certifier.certify_auto(points, C, config, gin)
    cfg, C = certifier._setup(points, C)
    if linalg.positive_kernel_vector(C) is None:
        return certifier.necessary_fails(cfg, C)
    if cfg.n == cfg.d + 1:
        return certifier.certify_simplex_case(points, C)
    try:
        if method == "main" and gin is not None:
            cert = certifier.certify_main(points, C, gin.B, gin.D)
            if cert.status == Status.POSITIVE_EXISTS:
                return cert
        return certifier.run_route(method, points, C, config, gin)
    except (ValueError, geometry.GeometryError, linalg.RankError) as exc:
        return certifier.inconclusive(cfg, C, None, [f"{method}: not applicable ({exc})"])


def describe_certificate(cert: Certificate) -> list[str]:
    lines = [f"status: {cert.status.value}", f"method: {cert.method.value if cert.method else '-'}"]
    if cert.I_C is not None:
        lines.append("I_C: {" + ", ".join(map(str, one_based(cert.I_C))) + "}")
    if cert.positive_witness is not None:
        lines.append("positive kernel vector: " + fmt(cert.positive_witness))
    if cert.separating_functional is not None:
        lines.append("separating functional: " + fmt(cert.separating_functional))
    if cert.B is not None and cert.status in (Status.POSITIVE_EXISTS, Status.REAL_EXISTS):
        lines += ["B:"] + fmt_matrix(cert.B) + ["D:"] + fmt_matrix(cert.D)
    lines += [f"note: {n}" for n in cert.notes]
    return lines


def cmd_certify(desc: SystemDescription, args, out: Output) -> tuple[int, dict]:
    config = certifier.CertifierConfig(quadrant_bound=args.quadrant_bound)
    t0 = time.perf_counter()
    cert = certify_system(desc, METHODS[args.method], config)
    doc = cert.to_dict()
    out(*describe_certificate(cert))
    code = STATUS_EXIT[cert.status]
    if args.recheck:
        try:
            recheck(Certificate.from_json(cert.to_json()))
            out("recheck: pass")
            doc["recheck"] = "pass"
        except RecheckError as exc:
            out(f"recheck: FAIL ({exc})")
            doc["recheck"] = f"fail: {exc}"
            code = EXIT_RECHECK
    out(f"time: {time.perf_counter() - t0:.2f}s")
    return code, doc


# -- verify -------------------------------------------------------------------


def verify_system(desc: SystemDescription, config: numeric.VerifierConfig, search: bool = True) -> dict:
    """Both numeric routes plus the degree bookkeeping, as plain data."""
    points, C = desc.points, desc.C
    cfg = ExponentConfiguration.from_points(points)
    t0 = time.perf_counter()
    B, D, degree_applies = degree_pair(desc, search)
    try:
        g = numeric.gale_roots(points, C, B, D, config)
        gale_error = None
    except (geometry.GeometryError, linalg.RankError, ValueError) as exc:
        g, gale_error = None, str(exc)
    t1 = time.perf_counter()
    direct = numeric.count_positive_roots_direct(points, C, config)
    t2 = time.perf_counter()
    parity = numeric.jacobian_parity_report(g.roots, cfg.k) if g is not None and degree_applies else None
    gale_count = g.count if g is not None else None
    agree = gale_count is not None and gale_count == direct.count
    degenerate = bool((g is not None and g.degenerate) or direct.degenerate or not direct.converged)
    return {
        "gale": gale_count,
        "direct": direct.count,
        "agree": agree,
        "degenerate": degenerate,
        "gale_converged": g.converged if g is not None else False,
        "direct_converged": direct.converged,
        "gale_error": gale_error,
        "gale_roots": [_root_doc(r) for r in g.roots] if g is not None else [],
        "direct_roots": [_root_doc(r) for r in direct.roots],
        "jacobian_tally": _tally(g.roots) if g is not None else None,
        "degree_applies": degree_applies,
        "degree_expected": parity.expected if parity else None,
        "degree_consistent": parity.consistent if parity else None,
        "three_or_more": parity.three_or_more if parity else None,
        "notes": (g.notes if g is not None else []) + direct.notes + (parity.notes if parity else []),
        "seconds": {"gale": round(t1 - t0, 3), "direct": round(t2 - t1, 3)},
    }


def degree_pair(desc: SystemDescription, search: bool = True):
    """Gale pair for the numeric run and whether the degree count applies.

    The Jacobian signs only have to add up to ``(-1)^k`` for a pair meeting
    the main sign conditions, so prefer a supplied pair that passes them,
    then the pair of a positive certificate, then the default duals.
    """
    points, C = desc.points, desc.C
    gale = desc.gale()
    if gale is not None:
        try:
            ok = check_main_conditions(geometry.lift(points), C, *gale).ok
        except (ValueError, geometry.GeometryError, linalg.RankError):
            ok = False
        return gale[0], gale[1], ok
    if not search:
        return None, None, False
    try:
        cert = certifier.certify_auto(points, C)
    except (ValueError, geometry.GeometryError, linalg.RankError):
        cert = None
    if cert is not None and cert.status == Status.POSITIVE_EXISTS and cert.B is not None:
        return cert.B, cert.D, True
    return None, None, False


def _tally(roots) -> dict:
    out = {"1": 0, "-1": 0, "degenerate": 0}
    for r in roots:
        out["degenerate" if r.jacobian_sign == 0 else str(r.jacobian_sign)] += 1
    return out


def _root_doc(r: numeric.RootRecord) -> dict:
    return {
        "x": [float(v) for v in r.x],
        "y": [float(v) for v in r.y] if r.y is not None else None,
        "gale_residual": float(r.gale_residual),
        "system_residual": float(r.system_residual),
        "jacobian_det": float(r.jacobian_det),
        "jacobian_sign": int(r.jacobian_sign),
        "degenerate": bool(r.degenerate),
    }


def verify_summary(rep: dict) -> str:
    g = "?" if rep["gale"] is None else rep["gale"]
    return f"gale:{g} direct:{rep['direct']} agree:{'yes' if rep['agree'] else 'no'}"


def cmd_verify(desc: SystemDescription, args, out: Output) -> tuple[int, dict]:
    config = numeric.VerifierConfig(grid=args.grid, tol=args.tol)
    rep = verify_system(desc, config, search=not args.numeric_only)
    out(verify_summary(rep))
    for r in rep["gale_roots"]:
        flag = " DEGENERATE" if r["degenerate"] else ""
        out(f"  x={fmt_floats(r['x'])} y={fmt_floats(r['y'])} residual={r['system_residual']:.1e} "
            f"det={r['jacobian_det']:.3e} sign={r['jacobian_sign']:+d}{flag}")
    if rep["jacobian_tally"] is not None:
        t = rep["jacobian_tally"]
        line = f"jacobian signs: +1:{t['1']} -1:{t['-1']} degenerate:{t['degenerate']}"
        if rep["degree_applies"]:
            line += f" expected degree {rep['degree_expected']:+d} consistent:{'yes' if rep['degree_consistent'] else 'no'}"
        else:
            line += " (sign conditions not met by this Gale pair: no degree prediction)"
        out(line)
    out(f"degenerate: {'yes' if rep['degenerate'] else 'no'}")
    if rep["gale_error"]:
        out(f"gale route: {rep['gale_error']}")
    for n in rep["notes"]:
        out(f"note: {n}")
    ok = rep["agree"] and not rep["degenerate"]
    return (EXIT_OK if ok else EXIT_INCONCLUSIVE), rep


def fmt_floats(v) -> str:
    if v is None:
        return "-"
    return "(" + ", ".join(f"{x:.6g}" for x in v) + ")"


# -- orthants -----------------------------------------------------------------


def cmd_orthants(desc: SystemDescription, args, out: Output) -> tuple[int, dict]:
    cfg = ExponentConfiguration.from_points(desc.points)
    if not cfg.integer_flag:
        raise InputError("orthant classes need integer exponents")
    gale = desc.gale()
    gin = certifier.GaleInput(*gale) if gale is not None else None
    config = certifier.CertifierConfig(quadrant_bound=args.quadrant_bound)
    route = None
    method = METHODS[args.method]
    if method is not None:
        def route(points, C, _m=method):
            return certify_system(SystemDescription(points, C), _m, config)
    certs = certifier.certify_real_orthants(desc.points, desc.C, config, gin, route)
    bound = 2 ** linalg.rank_mod2(linalg.as_integers(cfg.A))
    classes = []
    real_orthants = 0
    code = EXIT_NECESSARY
    for eps, cert in sorted(certs.items()):
        info = cert.orthant
        classes.append({"epsilon": list(eps), **info, "status": cert.status.value,
                        "certificate": cert.to_dict()})
        if cert.status == Status.REAL_EXISTS:
            real_orthants += info["multiplicity"]
            code = EXIT_OK
        elif cert.status == Status.INCONCLUSIVE and code != EXIT_OK:
            code = EXIT_INCONCLUSIVE
        out(f"epsilon={''.join(map(str, eps))} s={''.join(map(str, info['s']))} "
            f"multiplicity={info['multiplicity']} status={cert.status.value} "
            f"method={cert.method.value if cert.method else '-'}")
    if args.recheck:
        for cert in certs.values():
            try:
                recheck(Certificate.from_json(cert.to_json()))
            except RecheckError as exc:
                out(f"recheck: FAIL ({exc})")
                code = EXIT_RECHECK
        if code != EXIT_RECHECK:
            out("recheck: pass")
    certified = sum(1 for c in certs.values() if c.status == Status.REAL_EXISTS)
    out(f"classes: {len(certs)}  certified classes: {certified}  bound 2^rk2(A): {bound}  "
        f"orthants with certified solutions: {real_orthants} of {2 ** cfg.d}")
    doc = {"classes": classes, "certified_classes": certified, "component_bound": bound,
           "real_orthants": real_orthants}
    return code, doc


# -- gale ---------------------------------------------------------------------


def gale_dump(desc: SystemDescription) -> dict:
    """Exact Gale data of a system: deterministic, for debugging and snapshots."""
    cfg = ExponentConfiguration.from_points(desc.points)
    C = desc.C
    doc: dict = {"d": cfg.d, "n": cfg.n, "k": cfg.k, "notes": []}
    if cfg.k == 0:
        doc["notes"].append("n = d+1: no Gale variables, the Gale data is empty")
        return doc
    gale = desc.gale()
    if gale is not None:
        B, D = gale
        doc["notes"].append("B and D supplied by the input")
    else:
        B = linalg.as_fractions(linalg.z_gale_dual(cfg.A)) if cfg.integer_flag else linalg.kernel_basis(cfg.A)
        try:
            D = certifier.generic_gale(C)
        except (geometry.GeometryError, linalg.RankError, ValueError) as exc:
            doc["B"] = B
            doc["notes"].append(f"no bounded Gale dual of C: {exc}")
            return doc
    doc["B"], doc["D"] = B, D
    if cfg.integer_flag:
        doc["B_minor_gcd"] = linalg.minors_gcd(linalg.as_integers(B)) if all(
            x.denominator == 1 for r in B for x in r) else None
    if not geometry.necessary_condition(C):
        doc["notes"].append("necessary condition fails: the polytope is empty")
        return doc
    try:
        delta = geometry.build_delta(D)
    except geometry.GeometryError as exc:
        doc["notes"].append(str(exc))
        return doc
    doc["I_C"] = list(delta.facet_index_set)
    doc["vertices"] = [list(v) for v in delta.vertices]
    doc["vertex_incidence"] = [sorted(T) for T in delta.incidence]
    doc["faces"] = [sorted(L) for L in delta.faces()]
    return doc


def _json_ready(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, dict):
        return {k: _json_ready(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_json_ready(v) for v in x]
    return x


def cmd_gale(desc: SystemDescription, args, out: Output) -> tuple[int, dict]:
    doc = gale_dump(desc)
    out(f"d={doc['d']} n={doc['n']} k={doc['k']}")
    if "B" in doc:
        out("B:", *fmt_matrix(doc["B"]))
    if "D" in doc:
        out("D:", *fmt_matrix(doc["D"]))
    if "I_C" in doc:
        out("I_C: {" + ", ".join(map(str, one_based(doc["I_C"]))) + "}")
        out("vertices:")
        for v, T in zip(doc["vertices"], doc["vertex_incidence"]):
            out(f"  {fmt(v)} on facets {{{', '.join(map(str, one_based(T)))}}}")
        out(f"faces ({len(doc['faces'])}):")
        out("  " + " ".join("{" + ",".join(map(str, one_based(L))) + "}" for L in doc["faces"]))
    for n in doc["notes"]:
        out(f"note: {n}")
    return EXIT_OK, _json_ready(doc)


# -- driver -------------------------------------------------------------------

COMMANDS: dict[str, Callable] = {
    "certify": cmd_certify,
    "verify": cmd_verify,
    "orthants": cmd_orthants,
    "gale": cmd_gale,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="galecert", description="Certify and count positive solutions of sparse polynomial systems.")
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("input", help="system description (JSON)")
    ap.add_argument("--method", choices=list(METHODS), default="auto")
    ap.add_argument("--grid", type=int, default=40, help="seeds per axis for the numeric solvers")
    ap.add_argument("--tol", type=float, default=1e-8, help="relative residual accepted as a root")
    ap.add_argument("--param", action="append", default=[], metavar="NAME=a:b:n",
                    help="set or sweep a parameter with exact rational steps")
    ap.add_argument("--recheck", action="store_true", help="re-verify emitted certificates exactly")
    ap.add_argument("--numeric-only", action="store_true", help="accept float input (verify only)")
    ap.add_argument("--output", metavar="PATH", help="write the JSON result here ('-' for stdout)")
    ap.add_argument("--quiet", action="store_true")
    ap.add_argument("--quadrant-bound", type=int, default=10, help=argparse.SUPPRESS)
    return ap


def _sweep(desc: SystemDescription, specs: list[str]) -> list[tuple[dict, SystemDescription]]:
    runs = [({}, desc)]
    for spec in specs:
        name, values = parse_sweep(spec)
        runs = [({**p, name: v}, d.with_parameters(**{name: v})) for p, d in runs for v in values]
    return runs


def _combine(codes: list[int]) -> int:
    for c in (EXIT_INPUT, EXIT_RECHECK, EXIT_INCONCLUSIVE, EXIT_NECESSARY):
        if c in codes:
            return c
    return EXIT_OK


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    out = Output(args.quiet)
    try:
        if args.numeric_only and args.command != "verify":
            raise InputError("--numeric-only is only available for verify; certification needs exact input")
        desc = load(args.input, allow_float=args.numeric_only)
        runs = _sweep(desc, args.param)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    codes, docs = [], []
    for params, d in runs:
        if params:
            out("== " + " ".join(f"{k}={v}" for k, v in params.items()))
        try:
            code, doc = COMMANDS[args.command](d, args, out)
        except (InputError, geometry.GeometryError, linalg.RankError, ValueError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            code, doc = EXIT_INPUT, {"error": str(exc)}
        if params:
            doc = {"parameters": {k: str(v) for k, v in params.items()}, **doc}
        codes.append(code)
        docs.append(doc)
    result = docs[0] if len(docs) == 1 else docs
    if args.output:
        text = json.dumps(result, indent=2)
        if args.output == "-":
            print(text)
        else:
            with open(args.output, "w", encoding="utf-8") as fh:
                fh.write(text + "\n")
    return _combine(codes)


if __name__ == "__main__":
    sys.exit(main())
