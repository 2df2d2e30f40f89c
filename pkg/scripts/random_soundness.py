"""Random soundness run: certify, then count positive roots by both numeric routes.

    python3 scripts/random_soundness.py --size 200 --seed 2024
"""

from __future__ import annotations

import argparse
import sys
import time
from collections import Counter

from galecert import certifier, corpus, numeric
from galecert.certificate import Status, recheck


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--size", type=int, default=200)
    ap.add_argument("--seed", type=int, default=2024)
    ap.add_argument("--exp-max", type=int, default=4)
    ap.add_argument("--verbose", action="store_true")
    args = ap.parse_args(argv)

    statuses, methods = Counter(), Counter()
    converged = 0
    unsound, mismatched = [], []
    t0 = time.perf_counter()
    for inst in corpus.soundness_corpus(args.seed, args.size, exp_max=args.exp_max):
        cert = certifier.certify_auto(inst.points, inst.C)
        recheck(cert)
        gale = numeric.gale_roots(inst.points, inst.C)
        direct = numeric.count_positive_roots_direct(inst.points, inst.C)
        statuses[cert.status.value] += 1
        if cert.method is not None:
            methods[cert.method.value] += 1
        if cert.status == Status.POSITIVE_EXISTS and direct.count < 1:
            unsound.append(inst.label)
        if gale.converged and direct.converged:
            converged += 1
            if gale.count != direct.count:
                mismatched.append((inst.label, gale.count, direct.count))
        if args.verbose:
            print(f"{inst.label}: {cert.status.value} gale={gale.count} direct={direct.count}")
    print(f"instances: {args.size}  time: {time.perf_counter() - t0:.1f}s")
    print("statuses: " + ", ".join(f"{k}={v}" for k, v in sorted(statuses.items())))
    print("methods:  " + ", ".join(f"{k}={v}" for k, v in sorted(methods.items())))
    print(f"both solvers converged: {converged}/{args.size}")
    print(f"unsound certificates: {len(unsound)} {unsound[:10]}")
    print(f"count mismatches: {len(mismatched)} {mismatched[:10]}")
    return 1 if unsound or mismatched else 0


if __name__ == "__main__":
    sys.exit(main())
