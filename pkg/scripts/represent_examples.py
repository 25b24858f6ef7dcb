#!/usr/bin/env python3
"""Walk the built-in examples through the representation pipeline.

For each example: run the axiom suite, dump the Boolean structure of the
antidomain elements, build and verify a representation (or show why none
exists), and list the injective elements.
"""

import argparse
import sys

from funalg import boolalg, finalg, represent


def show(alg):
    print(f"== {alg.label}: {alg.size} elements, n={alg.n} ==")
    report = finalg.check_axioms(alg)
    for line in report.lines(alg.names):
        print(" ", line)
    if report.passed:
        lat = boolalg.a_elements(alg)
        sys.stdout.write(boolalg.dump(lat))
        rep = represent.represent(alg)
        ok = represent.verify_representation(alg, rep)
        print(
            f"representation: base {rep.base.size}, "
            f"square={rep.is_square}, verified={ok.passed}"
        )
        inj = represent.injective_elements(alg)
        print("injective elements:", " ".join(alg.names[a] for a in sorted(inj)))
    else:
        rep = represent.represent(alg)
        print(f"not representable: {rep.message}")
    print()


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=2)
    args = ap.parse_args(argv)

    calg = finalg.build_quotient_example(args.n)
    alg = finalg.from_concrete(calg, "quotient-example")
    show(alg)

    q = finalg.quotient(
        alg, finalg.quotient_example_partition(calg), "identified-quotient"
    )
    show(q)

    _, prod = finalg.build_one_point_example(args.n)
    show(prod)
    return 0


if __name__ == "__main__":
    sys.exit(main())
