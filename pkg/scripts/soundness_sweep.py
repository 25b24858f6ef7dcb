#!/usr/bin/env python3
"""Sweep random closed algebras through their axiom suites.

Generates closures of random partial functions for every signature row and
arity, runs the matching suite, and tabulates pass/fail counts.  Any
failure prints the full report and the offending algebra.
"""

import argparse
import collections
import random
import sys
import time

from funalg import finalg, pfun
from funalg.terms import Signature

ROWS = (
    "comp,adom",
    "comp,adom,meet",
    "comp,adom,pref",
    "comp,adom,meet,pref",
    "comp,adom,fix",
    "comp,adom,fix,pref",
)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--max-n", type=int, default=3)
    ap.add_argument("--injective", action="store_true")
    args = ap.parse_args(argv)

    rng = random.Random(args.seed)
    tally = collections.Counter()
    failures = 0
    t0 = time.time()
    done = 0
    while done < args.count:
        n = rng.randint(1, args.max_n)
        row = rng.choice(ROWS)
        calg = pfun.random_closed_algebra(
            rng, n, Signature.of(n, row), injective=args.injective
        )
        if calg is None:
            continue
        done += 1
        alg = finalg.from_concrete(calg, f"{row}/n={n}")
        report = finalg.check_axioms(
            alg, Signature.of(n, row), injective=args.injective
        )
        tally[(row, n, report.passed)] += 1
        if not report.passed:
            failures += 1
            print(f"FAILURE on {alg.label} (size {alg.size}):")
            for line in report.lines(alg.names):
                print(" ", line)
            sys.stdout.write(finalg.format_algebra_file(alg))
    dt = time.time() - t0
    for (row, n, ok), c in sorted(tally.items()):
        print(f"{row:24s} n={n} {'pass' if ok else 'FAIL'} {c}")
    print(f"{done} algebras, {failures} failures, {dt:.1f}s")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
