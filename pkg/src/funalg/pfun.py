"""Concrete algebras of n-ary partial functions over a finite base.

A base is a finite set {0,..,size-1} together with an equivalence relation
given by class labels.  An n-ary partial function maps E-uniform n-tuples
(all coordinates equivalent) to points equivalent to them.  The operations
here — composition, intersection, domain, antidomain, fixset, tie and
preferential union — are the semantic ground truth that the abstract-table
machinery is measured against.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import cached_property

from .terms import (
    Adom,
    Comp,
    Dom,
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
)


class PfunError(ValueError):
    pass


@dataclass(frozen=True)
class Base:
    """Finite base set with an equivalence relation given by class labels."""

    size: int
    eclass: tuple

    def __post_init__(self):
        object.__setattr__(self, "eclass", tuple(self.eclass))
        if self.size < 0:
            raise PfunError("base size must be nonnegative")
        if len(self.eclass) != self.size:
            raise PfunError("eclass must label every base point")

    @staticmethod
    def square(size: int) -> "Base":
        return Base(size, (0,) * size)

    @property
    def is_square(self) -> bool:
        return len(set(self.eclass)) <= 1

    def related(self, x: int, y: int) -> bool:
        return self.eclass[x] == self.eclass[y]

    @cached_property
    def classes(self) -> tuple:
        by_label: dict = {}
        for x in range(self.size):
            by_label.setdefault(self.eclass[x], []).append(x)
        return tuple(tuple(c) for c in by_label.values())

    def class_of(self, x: int) -> tuple:
        label = self.eclass[x]
        return tuple(y for y in range(self.size) if self.eclass[y] == label)

    def uniform_tuples(self, n: int) -> tuple:
        """All E-uniform n-tuples, in lexicographic order."""
        key = ("unif", n)
        cache = self.__dict__.setdefault("_tuple_cache", {})
        if key not in cache:
            out = []
            for cls in self.classes:
                out.extend(itertools.product(cls, repeat=n))
            out.sort()
            cache[key] = tuple(out)
        return cache[key]


@dataclass(frozen=True)
class PartialFunction:
    base: Base
    n: int
    graph: tuple  # sorted ((x1,..,xn), y) pairs

    def __post_init__(self):
        g = self.graph
        if isinstance(g, dict):
            g = g.items()
        pairs = sorted((tuple(xs), y) for xs, y in g)
        object.__setattr__(self, "graph", tuple(pairs))
        seen = set()
        for xs, y in self.graph:
            if len(xs) != self.n:
                raise PfunError(f"tuple {xs} has wrong arity")
            if xs in seen:
                raise PfunError(f"duplicate argument tuple {xs}")
            seen.add(xs)
            pts = xs + (y,)
            if any(not 0 <= p < self.base.size for p in pts):
                raise PfunError(f"point out of base in {xs} -> {y}")
            if any(not self.base.related(p, y) for p in xs):
                raise PfunError(f"{xs} -> {y} crosses equivalence classes")

    @cached_property
    def as_dict(self) -> dict:
        return dict(self.graph)

    def __call__(self, xs):
        return self.as_dict.get(tuple(xs))

    def domain(self) -> frozenset:
        return frozenset(xs for xs, _ in self.graph)

    def restrict(self, tuples) -> "PartialFunction":
        keep = set(map(tuple, tuples))
        return PartialFunction(
            self.base, self.n, tuple(p for p in self.graph if p[0] in keep)
        )


def _same_frame(*fns):
    base, n = fns[0].base, fns[0].n
    for f in fns[1:]:
        if f.base != base or f.n != n:
            raise PfunError("mismatched base or arity")
    return base, n


def zero(base: Base, n: int) -> PartialFunction:
    return PartialFunction(base, n, ())


def proj(i: int, base: Base, n: int) -> PartialFunction:
    _check_index(i, n)
    return PartialFunction(
        base, n, tuple((xs, xs[i - 1]) for xs in base.uniform_tuples(n))
    )


def _check_index(i: int, n: int):
    if not 1 <= i <= n:
        raise PfunError(f"index {i} out of range 1..{n}")


def compose(fs, g: PartialFunction) -> PartialFunction:
    """(n+1)-ary composition: apply g to the pointwise images of fs."""
    fs = list(fs)
    base, n = _same_frame(g, *fs)
    if len(fs) != n:
        raise PfunError(f"composition needs {n} inner functions")
    graph = []
    for xs in base.uniform_tuples(n):
        inner = tuple(f(xs) for f in fs)
        if None in inner:
            continue
        y = g(inner)
        if y is not None:
            graph.append((xs, y))
    return PartialFunction(base, n, tuple(graph))


def meet(f: PartialFunction, g: PartialFunction) -> PartialFunction:
    base, n = _same_frame(f, g)
    gd = g.as_dict
    return PartialFunction(
        base, n, tuple(p for p in f.graph if gd.get(p[0]) == p[1])
    )


def dom(i: int, f: PartialFunction) -> PartialFunction:
    _check_index(i, f.n)
    return PartialFunction(
        f.base, f.n, tuple((xs, xs[i - 1]) for xs, _ in f.graph)
    )


def adom(i: int, f: PartialFunction) -> PartialFunction:
    _check_index(i, f.n)
    defined = f.domain()
    return PartialFunction(
        f.base,
        f.n,
        tuple(
            (xs, xs[i - 1])
            for xs in f.base.uniform_tuples(f.n)
            if xs not in defined
        ),
    )


def fixset(i: int, f: PartialFunction) -> PartialFunction:
    _check_index(i, f.n)
    return PartialFunction(
        f.base, f.n, tuple((xs, y) for xs, y in f.graph if y == xs[i - 1])
    )


def tie(i: int, f: PartialFunction, g: PartialFunction) -> PartialFunction:
    """i-th projection where f and g agree (equal value or both undefined)."""
    base, n = _same_frame(f, g)
    _check_index(i, n)
    fd, gd = f.as_dict, g.as_dict
    return PartialFunction(
        base,
        n,
        tuple(
            (xs, xs[i - 1])
            for xs in base.uniform_tuples(n)
            if fd.get(xs) == gd.get(xs)
        ),
    )


def pref(f: PartialFunction, g: PartialFunction) -> PartialFunction:
    """f where f is defined, else g."""
    base, n = _same_frame(f, g)
    merged = dict(g.graph)
    merged.update(f.as_dict)
    return PartialFunction(base, n, tuple(merged.items()))


def is_injective_fn(f: PartialFunction) -> bool:
    seen = set()
    for _, y in f.graph:
        if y in seen:
            return False
        seen.add(y)
    return True


def is_square(base: Base) -> bool:
    return base.is_square


# ---------------------------------------------------------------------------
# term evaluation

def eval_concrete(
    t: Term, assign: dict, base: Base | None = None, n: int | None = None
) -> PartialFunction:
    """Interpret a term over concrete partial functions.

    base/n may be omitted when the assignment is nonempty.
    """
    if base is None or n is None:
        try:
            some = next(iter(assign.values()))
        except StopIteration:
            raise PfunError("need base and arity for a closed term") from None
        base, n = some.base, some.n

    def ev(t: Term) -> PartialFunction:
        if isinstance(t, Var):
            try:
                return assign[t.name]
            except KeyError:
                raise PfunError(f"unbound variable {t.name}") from None
        if isinstance(t, Zero):
            return zero(base, n)
        if isinstance(t, Proj):
            return proj(t.i, base, n)
        if isinstance(t, Comp):
            return compose([ev(a) for a in t.args], ev(t.tail))
        if isinstance(t, Meet):
            return meet(ev(t.left), ev(t.right))
        if isinstance(t, Dom):
            return dom(t.i, ev(t.arg))
        if isinstance(t, Adom):
            return adom(t.i, ev(t.arg))
        if isinstance(t, Fix):
            return fixset(t.i, ev(t.arg))
        if isinstance(t, Tie):
            return tie(t.i, ev(t.left), ev(t.right))
        if isinstance(t, Pref):
            return pref(ev(t.left), ev(t.right))
        raise TermError(f"not a term: {t!r}")

    return ev(t)


# ---------------------------------------------------------------------------
# concrete algebras

@dataclass(frozen=True)
class ConcreteAlgebra:
    base: Base
    n: int
    sig: Signature
    elements: tuple

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        if len(set(self.elements)) != len(self.elements):
            raise PfunError("duplicate elements")
        for f in self.elements:
            if f.base != self.base or f.n != self.n:
                raise PfunError("element on wrong base or arity")

    def index_of(self, f: PartialFunction) -> int:
        return self.elements.index(f)

    def verify_closed(self):
        """Check closure under every operation of the signature."""
        elems = set(self.elements)
        for f, op, args in _op_applications(self.elements, self.sig, self.n):
            if f not in elems:
                raise PfunError(f"not closed under {op} at {args}")


def _op_applications(elements, sig: Signature, n: int):
    elems = list(elements)
    base = elems[0].base
    if sig.has("zero"):
        yield zero(base, n), "zero", ()
    if sig.has("proj"):
        for i in range(1, n + 1):
            yield proj(i, base, n), "proj", (i,)
    for f in elems:
        for i in range(1, n + 1):
            if sig.has("dom"):
                yield dom(i, f), "dom", (i, f)
            if sig.has("adom"):
                yield adom(i, f), "adom", (i, f)
            if sig.has("fix"):
                yield fixset(i, f), "fix", (i, f)
    for f, g in itertools.product(elems, repeat=2):
        if sig.has("meet"):
            yield meet(f, g), "meet", (f, g)
        if sig.has("pref"):
            yield pref(f, g), "pref", (f, g)
        if sig.has("tie"):
            for i in range(1, n + 1):
                yield tie(i, f, g), "tie", (i, f, g)
    if sig.has("comp"):
        for combo in itertools.product(elems, repeat=n):
            for tail in elems:
                yield compose(combo, tail), "comp", (*combo, tail)


def generate_subalgebra(
    gens, sig: Signature, max_elements: int = 10**6
) -> ConcreteAlgebra:
    """Least signature-closed set of functions containing the generators."""
    gens = list(gens)
    if not gens:
        raise PfunError("at least one generator required")
    base, n = _same_frame(*gens)
    if isinstance(sig, (set, frozenset, list, tuple, str)):
        sig = Signature.of(n, sig)
    seen: set = set()
    queue: list = []

    def add(f):
        if f not in seen:
            seen.add(f)
            if len(seen) > max_elements:
                raise PfunError(f"closure exceeded {max_elements} elements")
            queue.append(f)

    for f in gens:
        add(f)
    if sig.has("zero"):
        add(zero(base, n))
    if sig.has("proj"):
        for i in range(1, n + 1):
            add(proj(i, base, n))
    # worklist closure: when f is processed, combine it with everything
    # processed so far (including itself), so each op tuple is seen exactly
    # when its last member comes off the queue
    known: list = []
    while queue:
        f = queue.pop()
        known.append(f)
        for i in range(1, n + 1):
            if sig.has("dom"):
                add(dom(i, f))
            if sig.has("adom"):
                add(adom(i, f))
            if sig.has("fix"):
                add(fixset(i, f))
        for g in known:
            if sig.has("meet"):
                add(meet(f, g))
            if sig.has("pref"):
                add(pref(f, g))
                add(pref(g, f))
            if sig.has("tie"):
                for i in range(1, n + 1):
                    add(tie(i, f, g))
                    add(tie(i, g, f))
        if sig.has("comp"):
            snapshot = list(known)
            for p in range(n + 1):
                for rest in itertools.product(snapshot, repeat=n):
                    combo = rest[:p] + (f,) + rest[p:]
                    add(compose(combo[:n], combo[n]))
    return ConcreteAlgebra(
        base, n, sig, tuple(sorted(known, key=lambda f: f.graph))
    )


def disjoint_union(maps, sig: Signature | None = None):
    """Glue per-part element maps into one map over the sum base.

    ``maps`` is a sequence of dicts keyed by the same element set, each
    valued in PartialFunctions over a part-local base.  The parts' bases
    are juxtaposed with shifted points; class labels stay disjoint across
    parts, so the union of square parts is non-square.  Returns
    (combined_base, dict element -> PartialFunction).
    """
    maps = list(maps)
    if not maps:
        raise PfunError("nothing to unite")
    keys = list(maps[0].keys())
    n = next(iter(maps[0].values())).n
    labels: list = []
    offsets = []
    offset = 0
    for k, m in enumerate(maps):
        if set(m.keys()) != set(keys):
            raise PfunError("parts must map the same elements")
        b = next(iter(m.values())).base
        for f in m.values():
            if f.base != b or f.n != n:
                raise PfunError("mismatched base or arity inside a part")
        offsets.append(offset)
        labels.extend((k, lab) for lab in b.eclass)
        offset += b.size
    canon = {lab: j for j, lab in enumerate(dict.fromkeys(labels))}
    big = Base(offset, tuple(canon[lab] for lab in labels))
    out = {}
    for key in keys:
        graph = []
        for m, off in zip(maps, offsets):
            for xs, y in m[key].graph:
                graph.append((tuple(x + off for x in xs), y + off))
        out[key] = PartialFunction(big, n, tuple(graph))
    return big, out


# ---------------------------------------------------------------------------
# file format
#
#   base <size>
#   eclass <id0> <id1> ... <id_{size-1}>
#   n <arity>
#   fun <name> : (x1,...,xn)-><y> ...
#
# '#' starts a comment; emitted files are bit-exact with pairs in
# lexicographic tuple order.

_PAIR_RE = re.compile(r"\(([0-9,]*)\)->([0-9]+)")


def format_pfun_file(base: Base, n: int, named_fns) -> str:
    lines = [f"base {base.size}"]
    lines.append("eclass " + " ".join(str(c) for c in base.eclass))
    lines.append(f"n {n}")
    for name, f in named_fns:
        pairs = " ".join(
            "(" + ",".join(map(str, xs)) + f")->{y}" for xs, y in f.graph
        )
        lines.append(f"fun {name} :" + (f" {pairs}" if pairs else ""))
    return "\n".join(lines) + "\n"


def parse_pfun_file(text: str):
    """Inverse of :func:`format_pfun_file` → (base, n, [(name, fn), ...])."""
    lines = []
    for raw in text.splitlines():
        ln = raw.split("#", 1)[0].strip()
        if ln:
            lines.append(ln)
    if not lines or not lines[0].startswith("base "):
        raise PfunError("expected 'base <size>' on first line")
    size = int(lines[0].split()[1])
    idx = 1
    if idx < len(lines) and lines[idx].startswith("eclass"):
        eclass = tuple(int(c) for c in lines[idx].split()[1:])
        idx += 1
    else:
        eclass = (0,) * size
    base = Base(size, eclass)
    if idx >= len(lines) or not lines[idx].startswith("n "):
        raise PfunError("expected 'n <arity>' line")
    n = int(lines[idx].split()[1])
    idx += 1
    fns = []
    for ln in lines[idx:]:
        m = re.match(r"fun\s+(\S+)\s*:(.*)$", ln)
        if not m:
            raise PfunError(f"bad line in function file: {ln!r}")
        name, rest = m.group(1), m.group(2)
        if _PAIR_RE.sub("", rest).strip():
            raise PfunError(f"bad pairs in line: {ln!r}")
        graph = []
        for pm in _PAIR_RE.finditer(rest):
            xs = tuple(int(x) for x in pm.group(1).split(",") if x)
            graph.append((xs, int(pm.group(2))))
        fns.append((name, PartialFunction(base, n, tuple(graph))))
    return base, n, fns


# ---------------------------------------------------------------------------
# random generation for test corpora

SIZE_CAPS = {1: 60, 2: 12, 3: 5}


def random_base(rng, max_size: int = 4) -> Base:
    """Random base with a random equivalence, classes labelled in order of
    first appearance."""
    size = rng.randint(1, max_size)
    labels = []
    nxt = 0
    for _ in range(size):
        if nxt and rng.random() < 0.6:
            labels.append(rng.randrange(nxt))
        else:
            labels.append(nxt)
            nxt += 1
    return Base(size, tuple(labels))


def random_pfun(rng, base: Base, n: int) -> PartialFunction:
    graph = []
    for t in base.uniform_tuples(n):
        cls = [x for x in range(base.size) if base.related(x, t[0])]
        v = rng.choice([None] * len(cls) + cls)
        if v is not None:
            graph.append((t, v))
    return PartialFunction(base, n, tuple(graph))


def random_closed_algebra(
    rng,
    n: int,
    sig: Signature,
    max_size: int | None = None,
    max_base: int = 4,
    tries: int = 200,
    injective: bool = False,
):
    """A random generated subalgebra within the element cap, or None.

    In injective mode the base is forced to singleton classes at n >= 2
    (any adom-closed algebra over a class with two points contains a
    non-injective projection) and draws whose closure contains a
    non-injective element are rejected.
    """
    if max_size is None:
        max_size = SIZE_CAPS[n]
    for _ in range(tries):
        base = random_base(rng, max_base)
        if injective and n >= 2:
            base = Base(base.size, tuple(range(base.size)))
        gens = [random_pfun(rng, base, n) for _ in range(rng.randint(1, 2))]
        if injective:
            gens = [f for f in gens if is_injective_fn(f)]
            if not gens:
                continue
        try:
            calg = generate_subalgebra(gens, sig, max_elements=max_size)
        except PfunError:
            continue
        if injective and not all(is_injective_fn(f) for f in calg.elements):
            continue
        return calg
    return None
