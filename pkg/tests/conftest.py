import random

import pytest
from hypothesis import strategies as st

from funalg import pfun, terms
from funalg.terms import Signature

ALL_OPS = ("comp", "adom", "meet", "pref", "fix", "tie")

SUITE_ROWS = (
    "comp,adom",
    "comp,adom,meet",
    "comp,adom,pref",
    "comp,adom,meet,pref",
    "comp,adom,fix",
    "comp,adom,fix,pref",
)


@st.composite
def bases(draw, max_size=4):
    size = draw(st.integers(1, max_size))
    labels = [0]
    nxt = 1
    for _ in range(size - 1):
        pick = draw(st.integers(0, nxt))
        labels.append(pick)
        if pick == nxt:
            nxt += 1
    return pfun.Base(size, tuple(labels))


@st.composite
def pfuns(draw, base=None, n=None, max_size=4, max_n=3):
    if base is None:
        base = draw(bases(max_size))
    if n is None:
        n = draw(st.integers(1, max_n))
    graph = []
    for t in base.uniform_tuples(n):
        cls = base.class_of(t[0])
        v = draw(st.sampled_from((None,) + cls))
        if v is not None:
            graph.append((t, v))
    return pfun.PartialFunction(base, n, tuple(graph))


@st.composite
def terms_over(draw, names, n, max_depth=3, sig=None):
    kinds = ["var", "zero", "proj"]
    if max_depth > 0:
        extra = ["comp", "dom", "adom"]
        if sig is None or sig.has("meet"):
            extra.append("meet")
        if sig is None or sig.has("fix"):
            extra.append("fix")
        if sig is None or sig.has("tie"):
            extra.append("tie")
        if sig is None or sig.has("pref"):
            extra.append("pref")
        kinds += extra
    kind = draw(st.sampled_from(kinds))
    sub = lambda: draw(terms_over(names, n, max_depth - 1, sig))
    if kind == "var":
        return terms.Var(draw(st.sampled_from(names)))
    if kind == "zero":
        return terms.Zero()
    if kind == "proj":
        return terms.Proj(draw(st.integers(1, n)))
    if kind == "comp":
        return terms.Comp(tuple(sub() for _ in range(n)), sub())
    if kind == "meet":
        return terms.Meet(sub(), sub())
    if kind == "dom":
        return terms.Dom(draw(st.integers(1, n)), sub())
    if kind == "adom":
        return terms.Adom(draw(st.integers(1, n)), sub())
    if kind == "fix":
        return terms.Fix(draw(st.integers(1, n)), sub())
    if kind == "tie":
        return terms.Tie(draw(st.integers(1, n)), sub(), sub())
    return terms.Pref(sub(), sub())


def corpus(seed, count, rows=SUITE_ROWS, ns=(1, 2, 3), injective=False, **kw):
    """Deterministic stream of (n, row, ConcreteAlgebra)."""
    rng = random.Random(seed)
    out = []
    guard = 0
    while len(out) < count and guard < count * 60:
        guard += 1
        n = rng.choice(list(ns))
        row = rng.choice(list(rows))
        calg = pfun.random_closed_algebra(
            rng, n, Signature.of(n, row), injective=injective, **kw
        )
        if calg is not None:
            out.append((n, row, calg))
    return out


# independent comprehension-style oracles for the pointwise operations

def o_compose(fs, g):
    base, n = fs[0].base, fs[0].n
    graph = []
    for x in base.uniform_tuples(n):
        ys = [f(x) for f in fs]
        if None not in ys and g(tuple(ys)) is not None:
            graph.append((x, g(tuple(ys))))
    return pfun.PartialFunction(base, n, tuple(graph))


def o_meet(f, g):
    return pfun.PartialFunction(
        f.base, f.n, tuple(sorted(set(f.graph) & set(g.graph)))
    )


def o_dom(i, f):
    return pfun.PartialFunction(
        f.base, f.n, tuple((x, x[i - 1]) for x in sorted(f.domain()))
    )


def o_adom(i, f):
    d = f.domain()
    return pfun.PartialFunction(
        f.base,
        f.n,
        tuple((x, x[i - 1]) for x in f.base.uniform_tuples(f.n) if x not in d),
    )


def o_fix(i, f):
    return pfun.PartialFunction(
        f.base, f.n, tuple((x, y) for x, y in f.graph if y == x[i - 1])
    )


def o_tie(i, f, g):
    graph = []
    for x in f.base.uniform_tuples(f.n):
        a, b = f(x), g(x)
        if (a is None and b is None) or (a is not None and a == b):
            graph.append((x, x[i - 1]))
    return pfun.PartialFunction(f.base, f.n, tuple(graph))


def o_pref(f, g):
    d = f.domain()
    graph = list(f.graph) + [(x, y) for x, y in g.graph if x not in d]
    return pfun.PartialFunction(f.base, f.n, tuple(graph))
