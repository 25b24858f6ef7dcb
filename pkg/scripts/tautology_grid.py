#!/usr/bin/env python3
"""Exhaustive check of the tautology-to-equation reduction.

Enumerates every propositional formula over a fixed letter alphabet up to
a depth bound, encodes each one with both the meet and the composition
encodings, and compares the truth-table verdict against the bounded
counter-model search at the complete linear bound.
"""

import argparse
import sys
import time

from funalg import decide
from funalg.terms import Signature, print_equation


def formulas(letters, depth):
    layer = {decide.Letter(x) for x in letters}
    out = set(layer)
    for _ in range(depth - 1):
        out = (
            {decide.Letter(x) for x in letters}
            | {decide.Not(p) for p in out}
            | {decide.And(l, r) for l in out for r in out}
        )
    return out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--letters", default="abc")
    ap.add_argument("--depth", type=int, default=4)
    ap.add_argument("--n", type=int, default=1)
    ap.add_argument("--i", type=int, default=1)
    args = ap.parse_args(argv)

    sig = Signature.of(args.n, "comp,adom,meet")
    todo = formulas(args.letters, args.depth)
    print(f"{len(todo)} formulas (letters={args.letters!r}, depth<={args.depth})")
    t0 = time.time()
    mismatches = 0
    tautologies = 0
    cache = {}
    for k, phi in enumerate(sorted(todo, key=repr)):
        taut = decide.is_tautology(phi)
        tautologies += taut
        for use_meet in (False, True):
            eq = decide.reduce_tautology(phi, args.i, args.n, use_meet=use_meet)
            key = print_equation(eq)
            if key not in cache:
                out = decide.decide_equation(eq, sig)
                cache[key] = isinstance(out, decide.Valid) and out.complete
            if cache[key] != taut:
                mismatches += 1
                print(f"MISMATCH taut={taut} meet={use_meet}: {key}")
        if (k + 1) % 5000 == 0:
            print(f"  {k + 1}/{len(todo)} ({time.time() - t0:.0f}s)")
    print(
        f"{len(todo)} formulas, {tautologies} tautologies, "
        f"{mismatches} mismatches, {time.time() - t0:.1f}s"
    )
    return 1 if mismatches else 0


if __name__ == "__main__":
    sys.exit(main())
