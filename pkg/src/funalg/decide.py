"""Equational validity over the representation class.

An equation fails over partial functions iff it fails at a single
E-uniform tuple of some model, and the evaluation there only consults the
assigned functions at finitely many points — at most one point per term
node beyond the n seed coordinates, all inside one equivalence class.  So
invalid equations have counter-models on a square base whose size is
linear in the equation length, and the search below enumerates exactly
the consulted values: a depth-first search that branches only when the
evaluation actually asks for an unknown function value (undefined first,
then existing points in order, then one fresh point).  With the point cap
at the linear bound, exhausting the search is a proof of validity.

The module also houses the restriction machinery (the witness set Y and
counterexample shrinking) and the reduction from propositional
tautologies that makes the equational theories coNP-hard.
"""

from __future__ import annotations

import itertools
import re
import time
from dataclasses import dataclass, field

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
    Signature,
    Term,
    TermError,
    Tie,
    Var,
    Zero,
    term_length,
    term_vars,
)


class DecideError(ValueError):
    pass


def linear_bound(eq: Equation, n: int) -> int:
    """Base size that makes the bounded search refutation-complete:
    one point per term node plus the n seed coordinates."""
    return term_length(eq.lhs) + term_length(eq.rhs) + n


@dataclass(frozen=True)
class SearchBudget:
    """Caps for the counter-model search.

    max_base: point-count ceiling (None: the linear bound).
    max_class_count: E-class ceiling; every minimal counter-model lives in
      a single class, so anything >= 1 does not change completeness.
    max_consultations: cap on oracle consultations per variable.
    max_seconds: wall-clock cap.
    """

    max_base: int | None = None
    max_class_count: int = 1
    max_consultations: int | None = None
    max_seconds: float | None = None

    def __post_init__(self):
        if self.max_base is not None and self.max_base < 1:
            raise DecideError("max_base must be positive")
        if self.max_class_count < 1:
            raise DecideError("max_class_count must be positive")


@dataclass(frozen=True)
class CounterModel:
    base: pfun.Base
    assign: dict  # var name -> PartialFunction
    point: tuple
    lhs_value: int | None
    rhs_value: int | None

    def refutes(self, eq: Equation) -> bool:
        lv = pfun.eval_concrete(eq.lhs, self.assign, self.base, len(self.point))(
            self.point
        )
        rv = pfun.eval_concrete(eq.rhs, self.assign, self.base, len(self.point))(
            self.point
        )
        return (lv, rv) == (self.lhs_value, self.rhs_value) and lv != rv


@dataclass(frozen=True)
class Valid:
    verdict: str  # "VALID (complete)" or "NO COUNTEREXAMPLE (bounded)"
    searched_base: int

    @property
    def complete(self) -> bool:
        return self.verdict == "VALID (complete)"


class _Budget:
    def __init__(self, budget: SearchBudget, nvars: int):
        self.deadline = (
            time.monotonic() + budget.max_seconds if budget.max_seconds else None
        )
        self.per_var = budget.max_consultations
        self.counts: dict = {}
        self.hit = False

    def spend(self, var: str) -> bool:
        if self.deadline is not None and time.monotonic() > self.deadline:
            self.hit = True
            return False
        c = self.counts.get(var, 0) + 1
        self.counts[var] = c
        if self.per_var is not None and c > self.per_var:
            self.hit = True
            return False
        return True


class _Need(Exception):
    def __init__(self, key):
        self.key = key  # (var name, argument tuple)


def _seed_tuples(n: int):
    """Canonical E-uniform seed tuples: restricted-growth patterns."""
    out = []
    for combo in itertools.product(range(n), repeat=n):
        top = 0
        ok = True
        for x in combo:
            if x > top:
                ok = False
                break
            if x == top:
                top += 1
        if ok:
            out.append(combo)
    return out


def _eval_oracle(t: Term, x: tuple, oracle: dict, n: int):
    """Value of t at x given the consulted values so far; raises _Need at
    the first missing consultation.  None encodes undefined."""
    if isinstance(t, Var):
        key = (t.name, x)
        if key not in oracle:
            raise _Need(key)
        return oracle[key]
    if isinstance(t, Zero):
        return None
    if isinstance(t, Proj):
        return x[t.i - 1]
    if isinstance(t, Comp):
        images = []
        for a in t.args:
            v = _eval_oracle(a, x, oracle, n)
            if v is None:
                return None
            images.append(v)
        return _eval_oracle(t.tail, tuple(images), oracle, n)
    if isinstance(t, Dom):
        v = _eval_oracle(t.arg, x, oracle, n)
        return None if v is None else x[t.i - 1]
    if isinstance(t, Adom):
        v = _eval_oracle(t.arg, x, oracle, n)
        return x[t.i - 1] if v is None else None
    if isinstance(t, Fix):
        v = _eval_oracle(t.arg, x, oracle, n)
        return v if v is not None and v == x[t.i - 1] else None
    if isinstance(t, Meet):
        lv = _eval_oracle(t.left, x, oracle, n)
        rv = _eval_oracle(t.right, x, oracle, n)
        return lv if lv is not None and lv == rv else None
    if isinstance(t, Tie):
        lv = _eval_oracle(t.left, x, oracle, n)
        rv = _eval_oracle(t.right, x, oracle, n)
        if lv is None and rv is None:
            return x[t.i - 1]
        if lv is not None and lv == rv:
            return x[t.i - 1]
        return None
    if isinstance(t, Pref):
        lv = _eval_oracle(t.left, x, oracle, n)
        return lv if lv is not None else _eval_oracle(t.right, x, oracle, n)
    raise TermError(f"not a term: {t!r}")


def _search_stage(eq: Equation, n: int, cap: int, tracker: _Budget):
    """DFS over consulted values with at most cap base points; returns a
    CounterModel or None."""
    for seed in _seed_tuples(n):
        width = len(set(seed))
        if width > cap:
            continue
        oracle: dict = {}
        npts = [width]

        def dfs():
            try:
                lv = _eval_oracle(eq.lhs, seed, oracle, n)
                rv = _eval_oracle(eq.rhs, seed, oracle, n)
            except _Need as need:
                key = need.key
                if not tracker.spend(key[0]):
                    return None
                choices = [None, *range(npts[0])]
                if npts[0] < cap:
                    choices.append(npts[0])
                for v in choices:
                    fresh = v is not None and v == npts[0]
                    oracle[key] = v
                    if fresh:
                        npts[0] += 1
                    hit = dfs()
                    if fresh:
                        npts[0] -= 1
                    del oracle[key]
                    if hit is not None:
                        return hit
                return None
            if lv != rv:
                return _materialize(eq, n, seed, dict(oracle), npts[0], lv, rv)
            return None

        found = dfs()
        if found is not None:
            return found
    return None


def _materialize(eq, n, seed, oracle, npts, lv, rv) -> CounterModel:
    base = pfun.Base.square(max(npts, 1))
    graphs: dict = {v: [] for v in sorted(term_vars(eq.lhs) | term_vars(eq.rhs))}
    for (var, xs), y in oracle.items():
        if y is not None:
            graphs[var].append((xs, y))
    assign = {
        v: pfun.PartialFunction(base, n, tuple(g)) for v, g in graphs.items()
    }
    cm = CounterModel(base, assign, seed, lv, rv)
    if not cm.refutes(eq):
        raise AssertionError(
            "internal error: materialized model does not refute the equation"
        )
    return cm


def decide_equation(
    eq: Equation, sig: Signature, budget: SearchBudget = SearchBudget()
):
    """Bounded counter-model search, smallest base first.

    Returns a CounterModel, or Valid whose verdict says whether the
    search covered the refutation-completeness bound.
    """
    for t in (eq.lhs, eq.rhs):
        for op in _ops_of(t):
            if not sig.allows(op):
                raise DecideError(f"operation {op} not in signature")
    n = sig.n
    bound = linear_bound(eq, n)
    cap = bound if budget.max_base is None else min(budget.max_base, bound)
    tracker = _Budget(budget, len(term_vars(eq.lhs) | term_vars(eq.rhs)))
    searched = 0
    for s in range(1, cap + 1):
        found = _search_stage(eq, n, s, tracker)
        if found is not None:
            return found
        if tracker.hit:
            break
        searched = s
    if searched >= bound and not tracker.hit:
        return Valid("VALID (complete)", searched)
    return Valid("NO COUNTEREXAMPLE (bounded)", searched)


def _ops_of(t: Term):
    yield from {
        Var: (),
        Zero: ("zero",),
        Proj: ("proj",),
        Comp: ("comp",),
        Meet: ("meet",),
        Dom: ("dom",),
        Adom: ("adom",),
        Fix: ("fix",),
        Tie: ("tie",),
        Pref: ("pref",),
    }[type(t)]
    for s in getattr(t, "args", ()):
        yield from _ops_of(s)
    for name in ("tail", "arg", "left", "right"):
        s = getattr(t, name, None)
        if s is not None:
            yield from _ops_of(s)


# ---------------------------------------------------------------------------
# restriction witnesses and shrinking

def witness_restriction(
    t: Term, assign: dict, x: tuple, base=None, n: int | None = None
) -> frozenset:
    """The point set Y whose induced restriction preserves the value of t
    at x (defined with the same value, or undefined on both sides).

    base and n are only needed for variable-free terms; otherwise they are
    read off the assignment."""
    x = tuple(x)
    if assign:
        some = next(iter(assign.values()))
        base, n = some.base, some.n
    elif base is None or n is None:
        raise DecideError("base and n are required for a variable-free term")
    seeds = frozenset(x)

    def Y(t, x):
        if isinstance(t, Var):
            v = assign[t.name](x)
            return frozenset(x) | (frozenset() if v is None else {v})
        if isinstance(t, (Zero, Proj)):
            return frozenset(x)
        if isinstance(t, Comp):
            # the arguments' witness sets are needed even when one of them
            # is undefined: antitone operators below an undefined argument
            # could otherwise become defined after restriction
            images = []
            out = frozenset(x)
            for a in t.args:
                images.append(pfun.eval_concrete(a, assign, base, n)(x))
                out |= Y(a, x)
            if any(v is None for v in images):
                return out
            return out | Y(t.tail, tuple(images))
        if isinstance(t, (Dom, Adom, Fix)):
            return Y(t.arg, x)
        if isinstance(t, (Meet, Tie, Pref)):
            return Y(t.left, x) | Y(t.right, x)
        raise TermError(f"not a term: {t!r}")

    return seeds | Y(t, x)


def shrink_counterexample(eq: Equation, cm: CounterModel) -> CounterModel:
    """Restrict a counter-model to the witness set of both sides.

    The result must still refute the equation; anything else would
    contradict the restriction property, so it aborts loudly.
    """
    if not cm.refutes(eq):
        raise DecideError("model does not refute the equation")
    n = len(cm.point)
    keep = sorted(
        witness_restriction(eq.lhs, cm.assign, cm.point, cm.base, n)
        | witness_restriction(eq.rhs, cm.assign, cm.point, cm.base, n)
    )
    renum = {p: k for k, p in enumerate(keep)}
    base = pfun.Base(len(keep), tuple(cm.base.eclass[p] for p in keep))
    kept = set(keep)
    assign = {}
    for v, f in cm.assign.items():
        graph = tuple(
            (tuple(renum[p] for p in xs), renum[y])
            for xs, y in f.graph
            if set(xs) <= kept and y in kept
        )
        assign[v] = pfun.PartialFunction(base, f.n, graph)
    point = tuple(renum[p] for p in cm.point)
    lv = pfun.eval_concrete(eq.lhs, assign, base, len(point))(point)
    rv = pfun.eval_concrete(eq.rhs, assign, base, len(point))(point)
    small = CounterModel(base, assign, point, lv, rv)
    want_l = None if cm.lhs_value is None else renum[cm.lhs_value]
    want_r = None if cm.rhs_value is None else renum[cm.rhs_value]
    if (lv, rv) != (want_l, want_r) or lv == rv:
        raise AssertionError(
            "restriction failed to preserve the refutation -- this "
            "contradicts the witness-set property; aborting"
        )
    return small


# ---------------------------------------------------------------------------
# propositional formulas and the hardness reduction

@dataclass(frozen=True)
class Letter:
    name: str


@dataclass(frozen=True)
class Not:
    arg: "PropFormula"


@dataclass(frozen=True)
class And:
    left: "PropFormula"
    right: "PropFormula"


PropFormula = Letter | Not | And

_PROP_TOKEN = re.compile(r"\s*(~|\(|\)|&|[a-z][a-z0-9_]*)")


def parse_prop(text: str) -> PropFormula:
    """Grammar: phi := LETTER | "~" phi | "(" phi "&" phi ")"."""
    pos = 0

    def take(expected=None):
        nonlocal pos
        m = _PROP_TOKEN.match(text, pos)
        if not m:
            raise DecideError(f"bad formula at position {pos}")
        pos = m.end()
        tok = m.group(1)
        if expected is not None and tok != expected:
            raise DecideError(f"expected {expected!r}, got {tok!r}")
        return tok

    def phi():
        tok = take()
        if tok == "~":
            return Not(phi())
        if tok == "(":
            left = phi()
            take("&")
            right = phi()
            take(")")
            return And(left, right)
        if tok in ("&", ")"):
            raise DecideError(f"unexpected {tok!r}")
        return Letter(tok)

    out = phi()
    if text[pos:].strip():
        raise DecideError(f"trailing input: {text[pos:].strip()!r}")
    return out


def prop_letters(phi: PropFormula) -> set:
    if isinstance(phi, Letter):
        return {phi.name}
    if isinstance(phi, Not):
        return prop_letters(phi.arg)
    return prop_letters(phi.left) | prop_letters(phi.right)


def prop_depth(phi: PropFormula) -> int:
    if isinstance(phi, Letter):
        return 1
    if isinstance(phi, Not):
        return 1 + prop_depth(phi.arg)
    return 1 + max(prop_depth(phi.left), prop_depth(phi.right))


def is_tautology(phi: PropFormula) -> bool:
    letters = sorted(prop_letters(phi))

    def ev(phi, row):
        if isinstance(phi, Letter):
            return row[phi.name]
        if isinstance(phi, Not):
            return not ev(phi.arg, row)
        return ev(phi.left, row) and ev(phi.right, row)

    return all(
        ev(phi, dict(zip(letters, bits)))
        for bits in itertools.product((False, True), repeat=len(letters))
    )


def reduce_tautology(
    phi: PropFormula, i: int, n: int, use_meet: bool = False
) -> Equation:
    """phi is a tautology iff the returned equation is valid over algebras
    of n-ary partial functions.

    Letters become D_i of a variable, negation becomes A_i, conjunction
    becomes meet or, in the meet-free encoding, the product
    ⟨D₁u,..,Dₙu⟩∘v which agrees with intersection on A_i-type elements.
    """
    if not 1 <= i <= n:
        raise DecideError(f"index {i} out of range for arity {n}")

    def enc(phi):
        if isinstance(phi, Letter):
            return Dom(i, Var(phi.name))
        if isinstance(phi, Not):
            return Adom(i, enc(phi.arg))
        u, v = enc(phi.left), enc(phi.right)
        if use_meet:
            return Meet(u, v)
        return Comp(tuple(Dom(j, u) for j in range(1, n + 1)), v)

    return Equation(enc(phi), Proj(i))


# ---------------------------------------------------------------------------
# counter-model output

def format_counter_model(cm: CounterModel) -> str:
    body = pfun.format_pfun_file(
        cm.base, len(cm.point), sorted(cm.assign.items())
    )
    point = "(" + ",".join(str(p) for p in cm.point) + ")"
    lv = "undef" if cm.lhs_value is None else str(cm.lhs_value)
    rv = "undef" if cm.rhs_value is None else str(cm.rhs_value)
    return body + f"at {point}\nlhs {lv}\nrhs {rv}\n"
