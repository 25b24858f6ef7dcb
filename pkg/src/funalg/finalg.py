"""Finite abstract algebras as operation tables.

Provides brute-force (quasi)equation checking over all assignments, the
axiom-suite catalog keyed by signature and representation mode, quotients
and products, and the two worked example algebras (the three-point quotient
counterexample and the one-point-base product).

Element tables are dense tuples indexed by element number; the constant 0,
the projections and the domain operations are derived from composition and
antidomain at load time.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field

import numpy as np

from . import pfun
from .terms import (
    Adom,
    Comp,
    Dom,
    Equation,
    Fix,
    Meet,
    Pref,
    Proj,
    Quasiequation,
    Signature,
    Term,
    TermError,
    Tie,
    Var,
    Zero,
    expand_derived,
    term_vars,
)


class FinalgError(ValueError):
    pass


class BudgetError(FinalgError):
    pass


DEFAULT_BUDGET = 10**8


@dataclass(frozen=True, eq=False)
class FiniteAlgebra:
    """Operation tables over elements 0..size-1.

    Table keys: "comp" (flat, row-major over (args..., tail)); ("adom", i),
    ("dom", i), ("fix", i) as length-size tuples; "meet", "pref" and
    ("tie", i) flat over (left, right).  When comp and adom are present the
    constant 0 must be well defined: ⟨A₁ⁿa⟩∘a is the same element for every
    a, and 0, π_i, D_i are derived from it.
    """

    n: int
    sig: Signature
    names: tuple
    tables: dict
    label: str = "algebra"

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        if len(set(self.names)) != len(self.names):
            raise FinalgError("duplicate element names")
        size = len(self.names)
        if size < 1:
            raise FinalgError("algebra must be nonempty")
        for key, table in self.tables.items():
            arity = self._arity(key)
            want = size**arity
            if len(table) != want:
                raise FinalgError(f"table {key} has {len(table)} entries, expected {want}")
            if any(not 0 <= v < size for v in table):
                raise FinalgError(f"table {key} has out-of-range entries")
        missing = [
            op
            for op in self.sig.ops
            if op not in ("zero", "proj", "dom") and not self._has_table(op)
        ]
        if missing:
            raise FinalgError(f"missing tables for {missing}")
        if self.sig.has("comp") and self.sig.has("adom"):
            self._derive_constants()

    def _arity(self, key) -> int:
        op = key[0] if isinstance(key, tuple) else key
        if op == "comp":
            return self.n + 1
        if op in ("meet", "pref", "tie"):
            return 2
        if op in ("adom", "dom", "fix"):
            return 1
        raise FinalgError(f"unknown table key {key!r}")

    def _has_table(self, op: str) -> bool:
        if op in ("comp", "meet", "pref"):
            return op in self.tables
        return all((op, i) in self.tables for i in range(1, self.n + 1))

    @property
    def size(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise FinalgError(f"no element named {name}") from None

    # -- raw table access ---------------------------------------------------

    def comp(self, args, tail: int) -> int:
        idx = 0
        for a in args:
            idx = idx * self.size + a
        return self.tables["comp"][idx * self.size + tail]

    def un(self, op: str, i: int, a: int) -> int:
        try:
            return self.tables[(op, i)][a]
        except KeyError:
            if op == "dom":
                adom = self.tables[("adom", i)]
                return adom[adom[a]]
            raise FinalgError(f"missing table ({op}, {i})") from None

    def bin(self, op: str, a: int, b: int, i: int | None = None) -> int:
        key = (op, i) if op == "tie" else op
        try:
            return self.tables[key][a * self.size + b]
        except KeyError:
            raise FinalgError(f"missing table {key!r}") from None

    def _derive_constants(self):
        zeros = {
            self.comp([self.un("adom", i, a) for i in range(1, self.n + 1)], a)
            for a in range(self.size)
        }
        if len(zeros) != 1:
            raise FinalgError(
                f"⟨A₁ⁿa⟩∘a is not constant: takes values {sorted(zeros)}"
            )
        zero = zeros.pop()
        object.__setattr__(self, "zero_elem", zero)
        object.__setattr__(
            self,
            "proj_elem",
            tuple(self.un("adom", i, zero) for i in range(1, self.n + 1)),
        )

    # -- numpy views, built lazily ------------------------------------------

    def np_table(self, key):
        cache = self.__dict__.setdefault("_np_cache", {})
        if key not in cache:
            size = self.size
            if key == "comp":
                arr = np.asarray(self.tables["comp"], dtype=np.int64)
                cache[key] = arr.reshape((size,) * (self.n + 1))
            elif isinstance(key, tuple) and key[0] == "dom" and key not in self.tables:
                adom = self.np_table(("adom", key[1]))
                cache[key] = adom[adom]
            elif key in ("meet", "pref") or (isinstance(key, tuple) and key[0] == "tie"):
                arr = np.asarray(self.tables[key], dtype=np.int64)
                cache[key] = arr.reshape((size, size))
            else:
                cache[key] = np.asarray(self.tables[key], dtype=np.int64)
        return cache[key]


# ---------------------------------------------------------------------------
# evaluation

def eval_abstract(t: Term, alg: FiniteAlgebra, assign: dict) -> int:
    """Table-driven evaluation of a term at a single assignment."""
    if isinstance(t, Var):
        try:
            return assign[t.name]
        except KeyError:
            raise FinalgError(f"unbound variable {t.name}") from None
    if isinstance(t, Zero):
        return alg.zero_elem
    if isinstance(t, Proj):
        return alg.proj_elem[t.i - 1]
    if isinstance(t, Comp):
        return alg.comp(
            [eval_abstract(a, alg, assign) for a in t.args],
            eval_abstract(t.tail, alg, assign),
        )
    if isinstance(t, (Dom, Adom, Fix)):
        op = {Dom: "dom", Adom: "adom", Fix: "fix"}[type(t)]
        return alg.un(op, t.i, eval_abstract(t.arg, alg, assign))
    if isinstance(t, Meet):
        return alg.bin("meet", eval_abstract(t.left, alg, assign), eval_abstract(t.right, alg, assign))
    if isinstance(t, Pref):
        return alg.bin("pref", eval_abstract(t.left, alg, assign), eval_abstract(t.right, alg, assign))
    if isinstance(t, Tie):
        return alg.bin("tie", eval_abstract(t.left, alg, assign), eval_abstract(t.right, alg, assign), t.i)
    raise TermError(f"not a term: {t!r}")


def _np_eval(t: Term, alg: FiniteAlgebra, axes: dict, m: int):
    """Evaluate a term over the full assignment grid by broadcasting.

    axes maps each variable to its grid axis; the result broadcasts over a
    shape of m axes of length alg.size, in variable-name order, so the flat
    C-order index of the first violation is the lexicographically least
    witness.
    """
    if isinstance(t, Var):
        k = axes[t.name]
        shape = [1] * m
        shape[k] = alg.size
        return np.arange(alg.size, dtype=np.int64).reshape(shape)
    if isinstance(t, Zero):
        return np.int64(alg.zero_elem)
    if isinstance(t, Proj):
        return np.int64(alg.proj_elem[t.i - 1])
    if isinstance(t, Comp):
        parts = [_np_eval(a, alg, axes, m) for a in t.args]
        parts.append(_np_eval(t.tail, alg, axes, m))
        return alg.np_table("comp")[tuple(parts)]
    if isinstance(t, (Dom, Adom, Fix)):
        op = {Dom: "dom", Adom: "adom", Fix: "fix"}[type(t)]
        key = (op, t.i)
        if key not in alg.tables and op != "dom":
            raise FinalgError(f"missing table {key!r}")
        return alg.np_table(key)[_np_eval(t.arg, alg, axes, m)]
    if isinstance(t, (Meet, Pref, Tie)):
        key = ("tie", t.i) if isinstance(t, Tie) else type(t).__name__.lower()
        if key not in alg.tables:
            raise FinalgError(f"missing table {key!r}")
        return alg.np_table(key)[
            _np_eval(t.left, alg, axes, m), _np_eval(t.right, alg, axes, m)
        ]
    raise TermError(f"not a term: {t!r}")


def holds(
    alg: FiniteAlgebra, q: Quasiequation, budget: int = DEFAULT_BUDGET
):
    """Check a quasiequation over every assignment.

    Returns None when it holds, otherwise the lexicographically least
    refuting assignment as a dict variable → element index (variables in
    sorted name order, elements in index order).
    """
    names = sorted(
        set().union(
            *(
                term_vars(e.lhs) | term_vars(e.rhs)
                for e in (*q.premises, q.conclusion)
            )
        )
    )
    m = len(names)
    if alg.size**m > budget:
        raise BudgetError(
            f"{alg.size}^{m} assignments exceed budget {budget}"
        )
    axes = {v: k for k, v in enumerate(names)}
    if m == 0:
        ok = all(
            eval_abstract(e.lhs, alg, {}) == eval_abstract(e.rhs, alg, {})
            for e in q.premises
        )
        if not ok:
            return None
        if eval_abstract(q.conclusion.lhs, alg, {}) == eval_abstract(
            q.conclusion.rhs, alg, {}
        ):
            return None
        return {}
    shape = (alg.size,) * m
    bad = np.broadcast_to(
        _np_eval(q.conclusion.lhs, alg, axes, m)
        != _np_eval(q.conclusion.rhs, alg, axes, m),
        shape,
    )
    if bad.any():
        bad = bad.copy()
        for e in q.premises:
            if not bad.any():
                break
            prem = np.broadcast_to(
                _np_eval(e.lhs, alg, axes, m) == _np_eval(e.rhs, alg, axes, m),
                shape,
            )
            bad &= prem
    if not bad.any():
        return None
    flat = int(np.argmax(bad))
    combo = np.unravel_index(flat, shape)
    return {v: int(combo[axes[v]]) for v in names}


def leq(alg: FiniteAlgebra, a: int, b: int) -> bool:
    """a ≤ b  ⟺  ⟨D₁ⁿa⟩∘b = a."""
    return alg.comp([alg.un("dom", i, a) for i in range(1, alg.n + 1)], b) == a


# ---------------------------------------------------------------------------
# sentence builders

def _v(name: str) -> Var:
    return Var(name)


def _bold(con, t: Term, n: int) -> tuple:
    return tuple(con(i, t) for i in range(1, n + 1))


def _cA(t: Term, u: Term, n: int) -> Term:
    """⟨A₁ⁿt⟩∘u"""
    return Comp(_bold(Adom, t, n), u)


def _cD(t: Term, u: Term, n: int) -> Term:
    """⟨D₁ⁿt⟩∘u"""
    return Comp(_bold(Dom, t, n), u)


def _plus(i: int, u: Term, v: Term, n: int) -> Term:
    """α +_i β := A_i(⟨A₁ⁿα⟩∘A_iβ)"""
    return Adom(i, _cA(u, Adom(i, v), n))


def _eq(lhs: Term, rhs: Term) -> Quasiequation:
    return Quasiequation((), Equation(lhs, rhs))


@dataclass(frozen=True)
class Sentence:
    """One report line: a tag plus the indexed instances it stands for."""

    tag: str
    instances: tuple
    note: str = ""

    def __post_init__(self):
        object.__setattr__(self, "instances", tuple(self.instances))

    def variables(self) -> set:
        out: set = set()
        for q in self.instances:
            for e in (*q.premises, q.conclusion):
                out |= term_vars(e.lhs) | term_vars(e.rhs)
        return out


def base_sentences(n: int) -> list:
    """Tags (1)-(9): the composition/antidomain axioms."""
    rng = range(1, n + 1)
    a, b, c = _v("a"), _v("b"), _v("c")
    avec = tuple(_v(f"a{i}") for i in rng)
    bvec = tuple(_v(f"b{i}") for i in rng)
    out = []
    out.append(
        Sentence(
            "(1)",
            [
                _eq(
                    Comp(tuple(Comp(avec, bi) for bi in bvec), c),
                    Comp(avec, Comp(bvec, c)),
                )
            ],
        )
    )
    out.append(
        Sentence("(2)", [_eq(Comp(tuple(Proj(i) for i in rng), a), a)])
    )
    out.append(Sentence("(3)", [_eq(_cA(a, a, n), Zero())]))
    out.append(
        Sentence(
            "(4)",
            [
                _eq(
                    Comp(
                        tuple(
                            Zero() if j == i else avec[j - 1] for j in rng
                        ),
                        b,
                    ),
                    Zero(),
                )
                for i in rng
            ],
        )
    )
    out.append(Sentence("(5)", [_eq(Comp(avec, Zero()), Zero())]))
    twisted = []
    for i in rng:
        rhs: Term = avec[i - 1]
        for aj in reversed(avec):
            rhs = _cD(aj, rhs, n)
        rhs = _cA(Comp(avec, b), rhs, n)
        twisted.append(_eq(Comp(avec, Adom(i, b)), rhs))
    out.append(Sentence("(6)", twisted))
    out.append(
        Sentence(
            "(7)",
            [
                Quasiequation(
                    (
                        Equation(_cD(a, b, n), _cD(a, c, n)),
                        Equation(_cA(a, b, n), _cA(a, c, n)),
                    ),
                    Equation(b, c),
                )
            ],
        )
    )
    out.append(Sentence("(8)", [_eq(_cD(a, a, n), a)]))
    out.append(
        Sentence(
            "(9)",
            [
                _eq(Adom(i, Adom(j, a)), Adom(i, Adom(k, a)))
                for i in rng
                for j in rng
                for k in rng
                if j < k
            ]
            or [_eq(Adom(1, Adom(1, a)), Adom(1, Adom(1, a)))],
        )
    )
    return out


def derived_sentences(n: int) -> list:
    """Laws provable from (1)-(9); used as a soundness regression."""
    rng = range(1, n + 1)
    a, b, c, d = _v("a"), _v("b"), _v("c"), _v("d")
    avec = tuple(_v(f"a{i}") for i in rng)
    out = []
    out.append(
        Sentence(
            "(10)",
            [
                _eq(
                    _cA(a, Adom(i, b), n),
                    _cA(_cA(a, b, n), Adom(i, a), n),
                )
                for i in rng
            ],
        )
    )
    out.append(
        Sentence("(11)", [_eq(_cA(a, Adom(i, a), n), Adom(i, a)) for i in rng])
    )
    out.append(
        Sentence(
            "(12)",
            [_eq(_cA(a, Adom(i, b), n), _cA(b, Adom(i, a), n)) for i in rng],
        )
    )
    out.append(
        Sentence("(13)", [_eq(_cA(a, _cA(b, c, n), n), _cA(b, _cA(a, c, n), n))])
    )
    out.append(
        Sentence(
            "(14)",
            [
                _eq(Dom(j, _cA(a, Adom(i, b), n)), _cA(a, Adom(j, b), n))
                for i in rng
                for j in rng
            ],
        )
    )
    out.append(
        Sentence(
            "(15)",
            [
                _eq(
                    _cD(Comp(avec, b), Dom(i, avec[j - 1]), n),
                    Dom(i, Comp(avec, b)),
                )
                for i in rng
                for j in rng
            ],
        )
    )
    out.append(
        Sentence(
            "(16)",
            [
                _eq(
                    Comp(avec, Dom(i, b)),
                    _cD(Comp(avec, b), avec[i - 1], n),
                )
                for i in rng
            ],
        )
    )
    out.append(Sentence("(17)", [_eq(_cD(c, d, n), _cA(_cA(c, d, n), d, n))]))
    out.append(
        Sentence(
            "(20)",
            [
                Quasiequation(
                    (Equation(_cA(a, b, n), Zero()),),
                    Equation(
                        _cD(Adom(i, a), Adom(i, b), n), Adom(i, a)
                    ),
                )
                for i in rng
            ],
        )
    )
    return out


def injective_sentence(n: int) -> Sentence:
    """Tag (28): the injectivity quasiequations."""
    rng = range(1, n + 1)
    a = _v("a")
    bvec = tuple(_v(f"b{i}") for i in rng)
    cvec = tuple(_v(f"c{i}") for i in rng)
    return Sentence(
        "(28)",
        [
            Quasiequation(
                (Equation(Comp(bvec, a), Comp(cvec, a)),),
                Equation(Comp(bvec, Dom(i, a)), Comp(cvec, Dom(i, a))),
            )
            for i in rng
        ],
    )


def meet_sentences(n: int) -> list:
    """Tags (29)-(35): the intersection axioms (tie spelt out via meet)."""
    rng = range(1, n + 1)
    a, b, c, x = _v("a"), _v("b"), _v("c"), _v("x")
    sig = Signature.of(n, "comp,adom,meet,tie")
    ex = lambda t: expand_derived(t, sig, expand_tie=True)
    out = []
    out.append(Sentence("(29)", [_eq(Meet(a, a), a)]))
    out.append(Sentence("(30)", [_eq(Meet(a, b), Meet(b, a))]))
    avec = tuple(_v(f"a{i}") for i in rng)
    out.append(
        Sentence(
            "(31)",
            [
                _eq(
                    Comp(avec, Meet(b, c)),
                    Meet(Comp(avec, b), Comp(avec, c)),
                )
            ],
        )
    )
    out.append(Sentence("(32)", [_eq(_cD(Meet(a, b), a, n), Meet(a, b))]))
    ties = tuple(Tie(i, a, b) for i in rng)
    out.append(
        Sentence("(33)", [_eq(ex(Comp(ties, a)), ex(Comp(ties, b)))])
    )
    bAx = tuple(Adom(j, x) for j in rng)
    long_laws = []
    for i in rng:
        lhs = _plus(
            i,
            Comp(bAx, Dom(i, Comp(bAx, Meet(a, b)))),
            Comp(bAx, _cA(Comp(bAx, a), Adom(i, Comp(bAx, b)), n)),
            n,
        )
        long_laws.append(_eq(ex(lhs), ex(Comp(bAx, Tie(i, a, b)))))
    out.append(Sentence("(34)", long_laws))
    out.append(
        Sentence(
            "(35)",
            [
                _eq(
                    ex(
                        _plus(
                            i,
                            _cD(a, Tie(i, b, c), n),
                            _cA(a, Tie(i, b, c), n),
                            n,
                        )
                    ),
                    ex(Tie(i, b, c)),
                )
                for i in rng
            ],
        )
    )
    return out


def tie_injective_sentence(n: int) -> Sentence:
    """Equational injectivity in the presence of intersection."""
    rng = range(1, n + 1)
    a = _v("a")
    bvec = tuple(_v(f"b{i}") for i in rng)
    cvec = tuple(_v(f"c{i}") for i in rng)
    sig = Signature.of(n, "comp,adom,meet,tie")
    ex = lambda t: expand_derived(t, sig, expand_tie=True)
    return Sentence(
        "(tie-inj)",
        [
            _eq(
                ex(
                    _cD(
                        Meet(Comp(bvec, a), Comp(cvec, a)),
                        Adom(i, Tie(i, bvec[i - 1], cvec[i - 1])),
                        n,
                    )
                ),
                Zero(),
            )
            for i in rng
        ],
    )


def pref_sentences(n: int, with_bonus: bool) -> list:
    """Tags (18), (19) and, for the equational suites, (bonus)."""
    a, b = _v("a"), _v("b")
    out = [
        Sentence("(18)", [_eq(_cD(a, Pref(a, b), n), a)]),
        Sentence("(19)", [_eq(_cA(a, Pref(a, b), n), _cA(a, b, n))]),
    ]
    if with_bonus:
        out.append(
            Sentence(
                "(bonus)",
                [_eq(Pref(_cD(a, b, n), _cA(a, b, n)), b)],
            )
        )
    return out


def fix_sentences(n: int) -> list:
    rng = range(1, n + 1)
    a = _v("a")
    bvec = tuple(_v(f"b{i}") for i in rng)
    return [
        Sentence(
            "(fix1)", [_eq(Dom(i, Fix(i, a)), Fix(i, a)) for i in rng]
        ),
        Sentence(
            "(fix2)",
            [_eq(_cD(Fix(i, a), a, n), Fix(i, a)) for i in rng],
        ),
        Sentence(
            "(fix3)",
            [
                Quasiequation(
                    (Equation(Comp(bvec, a), bvec[i - 1]),),
                    Equation(Comp(bvec, Fix(i, a)), bvec[i - 1]),
                )
                for i in rng
            ],
        ),
    ]


# ---------------------------------------------------------------------------
# suites

@dataclass(frozen=True)
class AxiomSuite:
    name: str
    sig: Signature
    injective: bool
    sentences: tuple
    classification: str

    def __post_init__(self):
        object.__setattr__(self, "sentences", tuple(self.sentences))


def _mark_derivable(sent: Sentence) -> Sentence:
    return Sentence(sent.tag, sent.instances, "derivable")


def axiom_suite(sig: Signature, injective: bool = False) -> AxiomSuite:
    """The axiom suite for one signature row and representation mode."""
    if not (sig.has("comp") and sig.has("adom")):
        raise FinalgError("suites require comp and adom in the signature")
    extras = frozenset(sig.ops) - {"comp", "adom", "zero", "proj", "dom"}
    n = sig.n
    base = base_sentences(n)
    base_eq = [s for s in base if s.tag != "(7)"]
    quasi = next(s for s in base if s.tag == "(7)")

    def suite(key, sentences, classification):
        mode = "injective" if injective else "plain"
        return AxiomSuite(
            f"{key}/{mode}", sig, injective, tuple(sentences), classification
        )

    if extras == frozenset():
        if injective:
            return suite(
                "comp-adom", base + [injective_sentence(n)], "quasivariety"
            )
        return suite("comp-adom", base, "proper quasivariety")
    if extras == {"meet"}:
        eqs = base_eq + [_mark_derivable(quasi)] + meet_sentences(n)
        if injective:
            return suite(
                "comp-adom-meet", eqs + [tie_injective_sentence(n)], "variety"
            )
        return suite("comp-adom-meet", eqs, "variety")
    if extras == {"pref"}:
        if injective:
            return suite(
                "comp-adom-pref",
                base
                + [injective_sentence(n)]
                + pref_sentences(n, with_bonus=False),
                "quasivariety",
            )
        return suite(
            "comp-adom-pref",
            base_eq
            + [_mark_derivable(quasi)]
            + pref_sentences(n, with_bonus=True),
            "variety",
        )
    if extras == {"meet", "pref"}:
        eqs = base_eq + [_mark_derivable(quasi)] + meet_sentences(n)
        extra = [injective_sentence(n)] if injective else []
        return suite(
            "comp-adom-meet-pref",
            eqs + extra + pref_sentences(n, with_bonus=False),
            "variety",
        )
    if extras == {"fix"}:
        extra = [injective_sentence(n)] if injective else []
        return suite(
            "comp-adom-fix", base + extra + fix_sentences(n), "quasivariety"
        )
    if extras == {"fix", "pref"}:
        extra = [injective_sentence(n)] if injective else []
        return suite(
            "comp-adom-fix-pref",
            base + extra + pref_sentences(n, with_bonus=False) + fix_sentences(n),
            "quasivariety",
        )
    raise FinalgError(f"unsupported signature extras {sorted(extras)}")


SUITE_ROWS = (
    "comp,adom",
    "comp,adom,meet",
    "comp,adom,pref",
    "comp,adom,meet,pref",
    "comp,adom,fix",
    "comp,adom,fix,pref",
)


@dataclass(frozen=True)
class Report:
    suite: AxiomSuite
    results: tuple  # (tag, witness-or-None, note)

    @property
    def passed(self) -> bool:
        return all(w is None for _, w, _ in self.results)

    def failing_tags(self) -> list:
        return [t for t, w, _ in self.results if w is not None]

    def lines(self, names=None) -> list:
        out = []
        for tag, witness, note in self.results:
            if witness is None:
                line = f"{tag} PASS"
            else:
                shown = " ".join(
                    f"{v}={names[e] if names else e}"
                    for v, e in sorted(witness.items())
                )
                line = f"{tag} FAIL {shown}".rstrip()
            if note:
                line += f"  # {note}"
            out.append(line)
        return out


def check_axioms(
    alg: FiniteAlgebra,
    sig: Signature | None = None,
    injective: bool = False,
    budget: int = DEFAULT_BUDGET,
) -> Report:
    """Evaluate the suite for the signature on the algebra.

    A sentence with indexed instances fails if any instance fails; the
    witness reported is from the first failing instance.
    """
    if sig is None:
        sig = alg.sig
    suite = axiom_suite(sig, injective)
    results = []
    for sent in suite.sentences:
        witness = None
        for q in sent.instances:
            witness = holds(alg, q, budget)
            if witness is not None:
                break
        results.append((sent.tag, witness, sent.note))
    return Report(suite, tuple(results))


# ---------------------------------------------------------------------------
# constructions

def from_concrete(calg: pfun.ConcreteAlgebra, label: str = "algebra") -> FiniteAlgebra:
    """Tabulate a concrete algebra.  Raises if it is not closed."""
    elems = list(calg.elements)
    index = {f: k for k, f in enumerate(elems)}
    n = calg.n

    def look(f, what):
        try:
            return index[f]
        except KeyError:
            raise FinalgError(f"not closed under {what}") from None

    tables: dict = {}
    if calg.sig.has("comp"):
        flat = []
        for combo in itertools.product(elems, repeat=n):
            for tail in elems:
                flat.append(look(pfun.compose(combo, tail), "comp"))
        tables["comp"] = tuple(flat)
    for op, fn in (("adom", pfun.adom), ("dom", pfun.dom), ("fix", pfun.fixset)):
        if calg.sig.has(op):
            for i in range(1, n + 1):
                tables[(op, i)] = tuple(look(fn(i, f), op) for f in elems)
    for op, fn in (("meet", pfun.meet), ("pref", pfun.pref)):
        if calg.sig.has(op):
            tables[op] = tuple(
                look(fn(f, g), op)
                for f in elems
                for g in elems
            )
    if calg.sig.has("tie"):
        for i in range(1, n + 1):
            tables[("tie", i)] = tuple(
                look(pfun.tie(i, f, g), "tie")
                for f in elems
                for g in elems
            )
    names = tuple(f"e{k}" for k in range(len(elems)))
    return FiniteAlgebra(n, calg.sig, names, tables, label)


def quotient(alg: FiniteAlgebra, partition, label: str = "quotient") -> FiniteAlgebra:
    """Quotient by a partition of element indices; verifies it is a
    congruence for every table."""
    blocks = [sorted(b) for b in partition]
    cls = {}
    for k, block in enumerate(blocks):
        for e in block:
            if e in cls:
                raise FinalgError(f"element {e} in two blocks")
            cls[e] = k
    if sorted(cls) != list(range(alg.size)):
        raise FinalgError("partition does not cover the elements")
    # renumber blocks by least member for deterministic output
    blocks.sort()
    cls = {e: rank for rank, block in enumerate(blocks) for e in block}
    reps = [block[0] for block in blocks]
    m = len(blocks)
    tables: dict = {}
    for key, table in alg.tables.items():
        arity = alg._arity(key)
        new = {}
        for combo in itertools.product(range(alg.size), repeat=arity):
            idx = 0
            for a in combo:
                idx = idx * alg.size + a
            out = cls[table[idx]]
            ckey = tuple(cls[a] for a in combo)
            if new.setdefault(ckey, out) != out:
                raise FinalgError(
                    f"partition is not a congruence for {key} at classes {ckey}"
                )
        flat = []
        for combo in itertools.product(range(m), repeat=arity):
            flat.append(new[combo])
        tables[key] = tuple(flat)
    names = tuple(
        "[" + "+".join(alg.names[e] for e in block) + "]" for block in blocks
    )
    return FiniteAlgebra(alg.n, alg.sig, names, tables, label)


def product(algs, label: str = "product") -> FiniteAlgebra:
    algs = list(algs)
    if not algs:
        raise FinalgError("empty factor list")
    n, sig = algs[0].n, algs[0].sig
    for a in algs[1:]:
        if a.n != n or a.sig != sig:
            raise FinalgError("factors must share arity and signature")
    combos = list(itertools.product(*(range(a.size) for a in algs)))
    index = {c: k for k, c in enumerate(combos)}
    tables: dict = {}
    for key in algs[0].tables:
        arity = algs[0]._arity(key)
        flat = []
        for args in itertools.product(combos, repeat=arity):
            out = tuple(
                alg.tables[key][_flat_index(alg.size, [a[k] for a in args])]
                for k, alg in enumerate(algs)
            )
            flat.append(index[out])
        tables[key] = tuple(flat)
    names = tuple(
        "(" + ",".join(algs[k].names[c[k]] for k in range(len(algs))) + ")"
        for c in combos
    )
    return FiniteAlgebra(n, sig, names, tables, label)


def _flat_index(size: int, combo) -> int:
    idx = 0
    for a in combo:
        idx = idx * size + a
    return idx


# ---------------------------------------------------------------------------
# worked examples

def build_quotient_example(n: int) -> pfun.ConcreteAlgebra:
    """The 2(n+3)-element algebra on base {1,2,3} with classes {1},{2,3}.

    Points are numbered 0,1,2 for 1,2,3.  Elements: the empty function, the
    n projections on {2,3}ⁿ, the two constants on {2,3}ⁿ, and each of those
    with (1,..,1) ↦ 1 adjoined.
    """
    if n < 1:
        raise FinalgError("n must be positive")
    base = pfun.Base(3, (0, 1, 1))
    cls_tuples = [t for t in base.uniform_tuples(n) if t[0] != 0]
    ones = (0,) * n
    plain = []
    for i in range(1, n + 1):
        plain.append(
            pfun.PartialFunction(base, n, tuple((t, t[i - 1]) for t in cls_tuples))
        )
    for const in (1, 2):
        plain.append(
            pfun.PartialFunction(base, n, tuple((t, const) for t in cls_tuples))
        )
    elems = [pfun.zero(base, n)]
    elems.extend(plain)
    elems.append(pfun.PartialFunction(base, n, ((ones, 0),)))
    for f in plain:
        elems.append(pfun.PartialFunction(base, n, f.graph + ((ones, 0),)))
    calg = pfun.ConcreteAlgebra(
        base, n, Signature.of(n, "comp,adom"), tuple(elems)
    )
    calg.verify_closed()
    return calg


def quotient_example_partition(calg: pfun.ConcreteAlgebra) -> list:
    """Blocks of element indices identifying all domain-{2,3}ⁿ elements."""
    full = frozenset(
        t for t in calg.base.uniform_tuples(calg.n) if t[0] != 0
    )
    block = [
        k for k, f in enumerate(calg.elements) if f.domain() == full
    ]
    rest = [[k] for k in range(len(calg.elements)) if k not in block]
    return [block] + rest


def build_one_point_example(n: int):
    """The 2-element algebra on a 1-point base and the product of 2 copies."""
    base = pfun.Base.square(1)
    total = pfun.PartialFunction(base, n, (((0,) * n, 0),))
    a = pfun.ConcreteAlgebra(
        base,
        n,
        Signature.of(n, "comp,adom"),
        (pfun.zero(base, n), total),
    )
    fa = from_concrete(a, "one-point")
    return a, product([fa, fa], "one-point-product")


# ---------------------------------------------------------------------------
# file format

def format_algebra_file(alg: FiniteAlgebra) -> str:
    lines = [f"algebra {alg.label}"]
    lines.append(f"n {alg.n}")
    lines.append("signature " + " ".join(sorted(alg.sig.ops)))
    lines.append("elements " + " ".join(alg.names))
    nm = alg.names

    def emit(keyname, arity, table):
        for combo in itertools.product(range(alg.size), repeat=arity):
            idx = 0
            for a in combo:
                idx = idx * alg.size + a
            if keyname == "comp":
                args = " ".join(nm[a] for a in combo[:-1])
                lines.append(
                    f"table comp {args} ; {nm[combo[-1]]} -> {nm[table[idx]]}"
                )
            else:
                args = " ".join(nm[a] for a in combo)
                lines.append(f"table {keyname} {args} -> {nm[table[idx]]}")

    for key in sorted(alg.tables, key=lambda k: (k,) if isinstance(k, str) else k):
        keyname = key if isinstance(key, str) else f"{key[0]}{key[1]}"
        emit(keyname, alg._arity(key), alg.tables[key])
    lines.append("end")
    return "\n".join(lines) + "\n"


_INDEXED_TABLE = re.compile(r"^(adom|dom|fix|tie)([1-9][0-9]*)$")


def parse_algebra_file(text: str) -> FiniteAlgebra:
    lines = []
    for raw in text.splitlines():
        ln = raw.split("#", 1)[0].strip()
        if ln:
            lines.append(ln)
    if not lines or not lines[0].startswith("algebra"):
        raise FinalgError("expected 'algebra <name>' on first line")
    label = lines[0].split(None, 1)[1] if " " in lines[0] else "algebra"
    fields = {}
    idx = 1
    for key in ("n", "signature", "elements"):
        if idx >= len(lines) or not lines[idx].startswith(key + " "):
            raise FinalgError(f"expected '{key} ...' line")
        fields[key] = lines[idx].split()[1:]
        idx += 1
    n = int(fields["n"][0])
    sig = Signature.of(n, fields["signature"])
    names = tuple(fields["elements"])
    which = {name: k for k, name in enumerate(names)}
    size = len(names)
    entries: dict = {}
    for ln in lines[idx:]:
        if ln == "end":
            break
        parts = ln.split()
        if parts[0] != "table":
            raise FinalgError(f"bad table line: {ln!r}")
        opname = parts[1]
        m = _INDEXED_TABLE.match(opname)
        key = (m.group(1), int(m.group(2))) if m else opname
        body = parts[2:]
        if body[-2] != "->":
            raise FinalgError(f"bad table line: {ln!r}")
        out = which[body[-1]]
        args = [w for w in body[:-2] if w != ";"]
        flat = 0
        for w in args:
            flat = flat * size + which[w]
        entries.setdefault(key, {})[flat] = out
    else:
        raise FinalgError("missing 'end' line")
    tables = {}
    for key, got in entries.items():
        arity = 1
        op = key[0] if isinstance(key, tuple) else key
        if op == "comp":
            arity = n + 1
        elif op in ("meet", "pref", "tie"):
            arity = 2
        want = size**arity
        if sorted(got) != list(range(want)):
            raise FinalgError(f"table {key} incomplete")
        tables[key] = tuple(got[k] for k in range(want))
    return FiniteAlgebra(n, sig, names, tables, label)
