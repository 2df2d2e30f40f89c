"""End-to-end acceptance checks. Each test prints one PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v``.
"""

from __future__ import annotations

import argparse
import random
import time
from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest

from galecert import certifier, cli, corpus, geometry, linalg, numeric, sturm
from galecert import combinatorics as comb
from galecert.certificate import Certificate, Method, Status, recheck
from galecert.system import SystemDescription

F = Fraction
CORPUS_SIZE = 200
CIRCUITS = 100
BOUNDED_SAMPLES = 100


def report(capsys, number: int, ok: bool, detail: str) -> None:
    with capsys.disabled():
        print(f"\n[acceptance {number}] {'PASS' if ok else 'FAIL'}: {detail}")


def three_roots_desc(c) -> SystemDescription:
    inst = corpus.three_roots(c)
    return SystemDescription(inst.points, inst.C, {}, inst.B, inst.D)


def args(**kw):
    base = dict(method="auto", grid=40, tol=1e-8, recheck=True, numeric_only=False, quadrant_bound=10)
    base.update(kw)
    return argparse.Namespace(**base)


def quiet():
    return cli.Output(True)


def min_pairwise_distance(roots) -> float:
    xs = [np.asarray(r["x"]) for r in roots]
    if len(xs) < 2:
        return float("inf")
    return min(float(np.linalg.norm(a - b)) for a, b in combinations(xs, 2))


# -- 1 ------------------------------------------------------------------------


def test_1_three_and_one_positive_solutions(capsys):
    details, ok = [], True
    for c, expected in ((F(1, 2), 3), (F(8, 7), 1)):
        t0 = time.perf_counter()
        code, rep = cli.cmd_verify(three_roots_desc(c), args(), quiet())
        secs = time.perf_counter() - t0
        residuals = [r["system_residual"] for r in rep["gale_roots"] + rep["direct_roots"]]
        good = (
            rep["gale"] == expected
            and rep["direct"] == expected
            and max(residuals) < 1e-8
            and min_pairwise_distance(rep["gale_roots"]) > 1e-6
            and min_pairwise_distance(rep["direct_roots"]) > 1e-6
            and secs < 30
            and code == cli.EXIT_OK
        )
        ok &= good
        details.append(f"c={c}: gale {rep['gale']} direct {rep['direct']} max residual {max(residuals):.1e} "
                       f"in {secs:.2f}s")
    report(capsys, 1, ok, "; ".join(details))
    assert ok


# -- 2 ------------------------------------------------------------------------


def test_2_hand_made_gale_pair_certifies(capsys):
    details, ok = [], True
    for c in (F(1, 10), F(1, 2), F(1), F(8, 7), F(5)):
        desc = three_roots_desc(c)
        code, doc = cli.cmd_certify(desc, args(method="main"), quiet())
        good = (
            code == cli.EXIT_OK
            and doc["status"] == Status.POSITIVE_EXISTS.value
            and doc["method"] == Method.MAIN.value
            and doc.get("recheck") == "pass"
        )
        # the emitted witnesses are the supplied matrices
        cert = Certificate.from_dict({k: v for k, v in doc.items() if k != "recheck"})
        good &= (cert.B, cert.D) == desc.gale()
        ok &= good
        details.append(f"c={c}: {doc['status']} via {doc['method']} recheck {doc.get('recheck')}")
    report(capsys, 2, ok, "; ".join(details))
    assert ok


# -- 3 ------------------------------------------------------------------------


def test_3_degenerate_root_is_flagged(capsys):
    code, rep = cli.cmd_verify(three_roots_desc(F(1)), args(), quiet())
    flagged = [r for r in rep["gale_roots"] if r["degenerate"] and abs(r["jacobian_det"]) < 1e-6]
    ok = bool(flagged) and rep["degenerate"] and code == cli.EXIT_INCONCLUSIVE
    x = flagged[0]["x"] if flagged else None
    report(capsys, 3, ok, f"degenerate root at x={x} with |det J|={abs(flagged[0]['jacobian_det']) if flagged else None}")
    assert ok


# -- 4, 5, 7 share one corpus ---------------------------------------------------


@pytest.fixture(scope="module")
def corpus_runs():
    runs = []
    for inst in corpus.soundness_corpus(size=CORPUS_SIZE):
        cert = certifier.certify_auto(inst.points, inst.C)
        gale = numeric.gale_roots(inst.points, inst.C)
        direct = numeric.count_positive_roots_direct(inst.points, inst.C)
        runs.append((inst, cert, gale, direct))
    return runs


def test_4_positive_certificates_are_sound(corpus_runs, capsys):
    violations = []
    positive = 0
    for inst, cert, _, direct in corpus_runs:
        if cert.status == Status.POSITIVE_EXISTS:
            positive += 1
            if direct.count < 1:
                violations.append(inst.label)
    ok = len(corpus_runs) >= 200 and not violations
    report(capsys, 4, ok, f"{positive} POSITIVE_EXISTS over {len(corpus_runs)} instances, "
                          f"{len(violations)} violations {violations[:5]}")
    assert ok


def test_5_gale_and_direct_counts_agree(corpus_runs, capsys):
    converged, mismatches = 0, []
    for inst, _, gale, direct in corpus_runs:
        if gale.converged and direct.converged:
            converged += 1
            if gale.count != direct.count:
                mismatches.append((inst.label, gale.count, direct.count))
    rate = converged / len(corpus_runs)
    ok = rate >= 0.95 and not mismatches
    report(capsys, 5, ok, f"convergence {converged}/{len(corpus_runs)} ({rate:.1%}), mismatches {mismatches[:5]}")
    assert ok


def test_7_exactness_invariants(corpus_runs, capsys):
    failures, witnesses, dominating = [], 0, 0
    for inst, cert, _, _ in corpus_runs:
        A = geometry.lift(inst.points)
        Z = linalg.z_gale_dual(A)
        if not linalg.is_zero(linalg.matmul(A, Z)) or linalg.minors_gcd(Z) != 1:
            failures.append(f"{inst.label}: integer Gale dual")
        for B in comb.iter_dominating_gale(A, limit=5):
            dominating += 1
            try:
                certifier.dominating_invariants(B)
            except AssertionError as exc:
                failures.append(f"{inst.label}: {exc}")
        if cert.B is not None and cert.D is not None:
            witnesses += 1
            if not linalg.is_zero(linalg.matmul(A, cert.B)):
                failures.append(f"{inst.label}: A B != 0")
            if not linalg.is_zero(linalg.matmul(cert.C, cert.D)):
                failures.append(f"{inst.label}: C D != 0")
            if cert.method in (Method.DOMINATING_SIGN, Method.I_COMPATIBLE):
                try:
                    certifier.dominating_invariants(cert.B)
                except AssertionError as exc:
                    failures.append(f"{inst.label}: {exc}")
        try:
            recheck(cert.to_json())
        except AssertionError as exc:
            failures.append(f"{inst.label}: recheck {exc}")
    ok = not failures
    report(capsys, 7, ok, f"{len(corpus_runs)} integer duals, {witnesses} witness pairs, "
                          f"{dominating} dominating duals checked; failures {failures[:5]}")
    assert ok


# -- 6 ------------------------------------------------------------------------


def test_6_circuit_parity_matches_sturm(capsys):
    mismatches, total = [], 0
    for inst in corpus.circuit_corpus(size=CIRCUITS):
        total += 1
        poly = sturm.laurent_to_poly([int(p[0]) for p in inst.points], inst.C[0])
        expected = "odd" if sturm.count_positive_roots(poly) % 2 else "even"
        if certifier.circuit_parity(inst.points, inst.C) != expected:
            mismatches.append(inst.label)
    ok = total >= 100 and not mismatches
    report(capsys, 6, ok, f"{total} trinomials, {len(mismatches)} parity mismatches")
    assert ok


# -- 8 ------------------------------------------------------------------------


def test_8_even_exponents_fill_all_orthants(capsys):
    rng = random.Random(3)
    certified = inconclusive = 0
    failures = []
    for i in range(30):
        d = rng.choice([1, 2])
        inst = corpus.even_exponent_instance(rng, d, rng.randint(d + 2, d + 3))
        desc = SystemDescription(inst.points, inst.C)
        code, doc = cli.cmd_orthants(desc, args(), quiet())
        A = geometry.lift(inst.points)
        bound = 2 ** linalg.rank_mod2(linalg.as_integers(A))
        if doc["certified_classes"] > bound:
            failures.append(f"{inst.label}: {doc['certified_classes']} classes > {bound}")
        if code == cli.EXIT_RECHECK:
            failures.append(f"{inst.label}: recheck failed")
        (cls,) = doc["classes"]  # even exponents: a single class
        if cls["status"] == Status.REAL_EXISTS.value:
            certified += 1
            if cls["multiplicity"] != 2 ** d or doc["real_orthants"] != 2 ** d:
                failures.append(f"{inst.label}: multiplicity {cls['multiplicity']}")
        else:
            inconclusive += 1
    ok = certified > 0 and not failures
    report(capsys, 8, ok, f"{certified} REAL_EXISTS with multiplicity 2^d, {inconclusive} not certified, "
                          f"failures {failures[:5]}")
    assert ok


# -- 9 ------------------------------------------------------------------------


def test_9_boundedness_iff_e0_in_cone(capsys):
    rng = random.Random(99)
    checked = skipped = 0
    mismatches, bounded = [], 0
    while checked < BOUNDED_SAMPLES:
        n = rng.randint(3, 7)
        k = rng.randint(1, min(3, n - 2))
        D = corpus.random_gale_matrix(rng, n, k, bound=5)
        if not geometry.is_full_dimensional(D):
            skipped += 1  # empty polytope: bounded for trivial reasons
            continue
        checked += 1
        b, e = geometry.is_bounded(D), geometry.e0_in_cone(D)
        bounded += b
        if b != e:
            mismatches.append(D)
    ok = not mismatches
    report(capsys, 9, ok, f"{checked} full-dimensional samples ({bounded} bounded, {skipped} empty skipped), "
                          f"{len(mismatches)} mismatches")
    assert ok
