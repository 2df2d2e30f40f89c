"""Certify and count positive solutions of the three-roots family over a range of c.

    python3 scripts/sweep_three_roots.py --lo 1/20 --hi 3 --steps 25
"""

from __future__ import annotations

import argparse
import csv
import sys
import time
from fractions import Fraction

from galecert import certifier, corpus, numeric
from galecert.certificate import recheck


def run(values, config: numeric.VerifierConfig):
    rows = []
    for c in values:
        inst = corpus.three_roots(c)
        t0 = time.perf_counter()
        cert = certifier.certify_main(inst.points, inst.C, inst.B, inst.D)
        recheck(cert)
        gale = numeric.gale_roots(inst.points, inst.C, inst.B, inst.D, config)
        direct = numeric.count_positive_roots_direct(inst.points, inst.C, config)
        rows.append({
            "c": str(c),
            "c_float": float(c),
            "status": cert.status.value,
            "gale": gale.count,
            "direct": direct.count,
            "degenerate": gale.degenerate or direct.degenerate,
            "seconds": round(time.perf_counter() - t0, 3),
        })
    return rows


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--lo", default="1/20")
    ap.add_argument("--hi", default="3")
    ap.add_argument("--steps", type=int, default=25)
    ap.add_argument("--grid", type=int, default=40)
    args = ap.parse_args(argv)
    lo, hi = Fraction(args.lo), Fraction(args.hi)
    values = [lo + (hi - lo) * i / max(args.steps - 1, 1) for i in range(args.steps)]
    # include the special values so the transition is visible
    values = sorted(set(values) | {Fraction(1), Fraction(8, 7)})
    rows = run(values, numeric.VerifierConfig(grid=args.grid))
    w = csv.DictWriter(sys.stdout, fieldnames=list(rows[0]))
    w.writeheader()
    w.writerows(rows)
    return 0


if __name__ == "__main__":
    sys.exit(main())
