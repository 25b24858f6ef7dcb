"""Command-line front end.

Exit codes: 0 pass/valid/representable, 1 fail/refuted/not-representable,
2 usage or format error.
"""

from __future__ import annotations

import argparse
import sys

from . import decide as decide_mod
from . import finalg, represent
from .terms import Signature, TermError, parse_equation

EPILOG = """\
grammars:
  term      := VAR | "zero" | "pi"IDX | "comp(" term {"," term} ";" term ")"
             | "meet(" term "," term ")" | "dom"IDX "(" term ")"
             | "adom"IDX "(" term ")" | "fix"IDX "(" term ")"
             | "tie"IDX "(" term "," term ")" | "pref(" term "," term ")"
  equation  := term "=" term
  formula   := LETTER | "~" formula | "(" formula "&" formula ")"
  signature := comma-separated subset of comp,adom,meet,pref,fix,tie
file formats: see the algebra/function/representation emitters in
finalg, pfun and represent.
"""


def _sig(text: str, n: int) -> Signature:
    return Signature.of(n, text)


def _load_algebra(path: str) -> finalg.FiniteAlgebra:
    with open(path) as fh:
        return finalg.parse_algebra_file(fh.read())


def cmd_check_axioms(args) -> int:
    alg = _load_algebra(args.file)
    sig = _sig(args.sig, alg.n) if args.sig else alg.sig
    report = finalg.check_axioms(alg, sig, injective=args.injective)
    for line in report.lines(alg.names):
        print(line)
    return 0 if report.passed else 1


def cmd_represent(args) -> int:
    alg = _load_algebra(args.file)
    sig = _sig(args.sig, alg.n) if args.sig else alg.sig
    rep = represent.represent(alg, sig, injective_mode=args.injective)
    if isinstance(rep, represent.FailureReport):
        print(f"not representable: {rep.message}")
        for line in rep.report.lines(alg.names):
            print(line)
        return 1
    text = represent.format_representation(rep)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
        print(f"base {rep.base.size} square {rep.is_square}")
    else:
        sys.stdout.write(text)
    return 0


def cmd_verify_rep(args) -> int:
    alg = _load_algebra(args.algebra)
    with open(args.representation) as fh:
        report = represent.verify_rep_file(alg, fh.read())
    for line in report.lines():
        print(line)
    return 0 if report.passed else 1


def cmd_classify_injective(args) -> int:
    alg = _load_algebra(args.file)
    inj = represent.injective_elements(alg)
    for a in range(alg.size):
        mark = "injective" if a in inj else "not-injective"
        print(f"{alg.names[a]} {mark}")
    return 0


def cmd_decide(args) -> int:
    sig = _sig(args.sig, args.n)
    eq = parse_equation(args.eq, sig)
    budget = decide_mod.SearchBudget(max_base=args.max_base)
    result = decide_mod.decide_equation(eq, sig, budget)
    if isinstance(result, decide_mod.Valid):
        print(result.verdict)
        return 0
    sys.stdout.write(decide_mod.format_counter_model(result))
    print("REFUTED")
    return 1


def cmd_reduce_taut(args) -> int:
    phi = decide_mod.parse_prop(args.formula)
    eq = decide_mod.reduce_tautology(phi, args.i, args.n, use_meet=args.use_meet)
    from .terms import print_equation

    print(print_equation(eq))
    return 0


def cmd_gen(args) -> int:
    if args.what == "quotient-example":
        calg = finalg.build_quotient_example(args.n)
        alg = finalg.from_concrete(calg, "quotient-example")
    else:
        _, alg = finalg.build_one_point_example(args.n)
    sys.stdout.write(finalg.format_algebra_file(alg))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="funalg",
        description="workbench for finite algebras of n-ary partial functions",
        epilog=EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("check-axioms", help="run the axiom suite on an algebra file")
    q.add_argument("--sig", help="signature row, e.g. comp,adom,meet")
    q.add_argument("--injective", action="store_true")
    q.add_argument("file")
    q.set_defaults(fn=cmd_check_axioms)

    q = sub.add_parser("represent", help="build a partial-function representation")
    q.add_argument("--sig")
    q.add_argument("--injective", action="store_true")
    q.add_argument("-o", "--output")
    q.add_argument("file")
    q.set_defaults(fn=cmd_represent)

    q = sub.add_parser("verify-rep", help="check a representation file against an algebra")
    q.add_argument("algebra")
    q.add_argument("representation")
    q.set_defaults(fn=cmd_verify_rep)

    q = sub.add_parser("classify-injective", help="list injective elements")
    q.add_argument("file")
    q.set_defaults(fn=cmd_classify_injective)

    q = sub.add_parser("decide", help="bounded counter-model search for an equation")
    q.add_argument("--sig", required=True)
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--eq", required=True)
    q.add_argument("--max-base", type=int, default=None)
    q.set_defaults(fn=cmd_decide)

    q = sub.add_parser("reduce-taut", help="encode a propositional formula as an equation")
    q.add_argument("formula")
    q.add_argument("--i", type=int, required=True)
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--use-meet", action="store_true")
    q.set_defaults(fn=cmd_reduce_taut)

    q = sub.add_parser("gen", help="emit a built-in example algebra")
    q.add_argument("what", choices=["quotient-example", "one-point-product"])
    q.add_argument("--n", type=int, required=True)
    q.set_defaults(fn=cmd_gen)

    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (OSError, TermError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
