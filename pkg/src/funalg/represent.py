"""Representation by partial functions.

Pipeline: for each ordered pair a ≰ b a separating ultrafilter of
A-elements is built; each ultrafilter U induces a right congruence
(a ~ b iff bolde∘a = bolde∘b for the generating atom e) whose nonzero
classes form the base of a square algebra, with every element b acting
as the partial function ([a₁],..,[aₙ]) ↦ [⟨a₁,..,aₙ⟩∘b].  The disjoint
union of these square pieces over deduplicated ultrafilters is faithful,
with base at most the cube of the algebra size.  The same maps represent
meet, preferential union, fixset and tie whenever those are in the
signature, and send exactly the injective elements to injective
functions.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from . import boolalg, pfun
from .boolalg import AElementLattice, Ultrafilter
from .finalg import (
    DEFAULT_BUDGET,
    FiniteAlgebra,
    FinalgError,
    Report,
    check_axioms,
    leq,
)
from .terms import Signature


class RepresentError(FinalgError):
    pass


# ---------------------------------------------------------------------------
# congruences and the per-ultrafilter maps

@dataclass(frozen=True, eq=False)
class Congruence:
    """The right congruence of an ultrafilter, via its generating atom."""

    host: FiniteAlgebra
    ultrafilter: Ultrafilter
    classes: tuple  # tuple of sorted element tuples, ordered by least member

    def class_index(self, a: int) -> int:
        for k, cls in enumerate(self.classes):
            if a in cls:
                return k
        raise RepresentError(f"element {a} not classified")

    def witness(self, a: int, b: int) -> int:
        """An A-element α in U with boldα∘a = boldα∘b."""
        if self.class_index(a) != self.class_index(b):
            raise RepresentError(f"{a} and {b} are not congruent")
        return self.ultrafilter.atom

    def related(self, a: int, b: int) -> bool:
        return self.class_index(a) == self.class_index(b)


def _atom_key(alg: FiniteAlgebra, lat: AElementLattice, atom: int):
    bold = lat.bold(atom)
    return lambda x: alg.comp(bold, x)


def congruence_of(alg: FiniteAlgebra, U: Ultrafilter, verify: bool = True) -> Congruence:
    lat = boolalg.a_elements(alg, verify=False)
    key = _atom_key(alg, lat, U.atom)
    groups: dict = {}
    for a in range(alg.size):
        groups.setdefault(key(a), []).append(a)
    classes = tuple(sorted(tuple(g) for g in groups.values()))
    cong = Congruence(alg, U, classes)
    if verify:
        _verify_right_congruence(alg, key)
    return cong


def _verify_right_congruence(alg: FiniteAlgebra, key):
    """a_i ~ b_i for all i implies ⟨a⟩∘c ~ ⟨b⟩∘c."""
    n = alg.n
    kv = [key(a) for a in range(alg.size)]
    cells: dict = {}
    for a in range(alg.size):
        cells.setdefault(kv[a], []).append(a)
    for combo in itertools.product(cells.values(), repeat=n):
        for c in range(alg.size):
            got = {
                kv[alg.comp(pick, c)]
                for pick in itertools.product(*combo)
            }
            if len(got) > 1:
                raise RepresentError(
                    "right congruence law fails; the host violates the suite"
                )


@dataclass(frozen=True, eq=False)
class ThetaMap:
    """One square piece of the representation."""

    host: FiniteAlgebra
    ultrafilter: Ultrafilter
    congruence: Congruence
    base: pfun.Base
    points: tuple  # base point k <-> points[k] = congruence class index
    fmap: dict  # element index -> PartialFunction


def theta_U(alg: FiniteAlgebra, U: Ultrafilter, verify: bool = True) -> ThetaMap:
    """The square algebra of an ultrafilter and the action of each element."""
    cong = congruence_of(alg, U, verify=verify)
    zero_cls = cong.class_index(alg.zero_elem)
    live = [k for k in range(len(cong.classes)) if k != zero_cls]
    point_of = {k: p for p, k in enumerate(live)}
    base = pfun.Base.square(len(live))
    n = alg.n
    reps = [cls[0] for cls in cong.classes]
    fmap = {}
    for b in range(alg.size):
        graph = []
        for combo in itertools.product(live, repeat=n):
            out = cong.class_index(alg.comp([reps[k] for k in combo], b))
            if out != zero_cls:
                graph.append((tuple(point_of[k] for k in combo), point_of[out]))
        fmap[b] = pfun.PartialFunction(base, n, tuple(graph))
    tm = ThetaMap(alg, U, cong, base, tuple(live), fmap)
    if verify:
        _verify_theta(tm)
    return tm


def _verify_theta(tm: ThetaMap):
    alg, fmap = tm.host, tm.fmap
    n = alg.n
    if fmap[alg.zero_elem].graph != ():
        raise RepresentError("theta_U does not send 0 to the empty function")
    for combo in itertools.product(range(alg.size), repeat=n):
        for b in range(alg.size):
            want = fmap[alg.comp(combo, b)]
            got = pfun.compose([fmap[a] for a in combo], fmap[b])
            if want != got:
                raise RepresentError("theta_U is not a comp homomorphism")
    for i in range(1, n + 1):
        for a in range(alg.size):
            if fmap[alg.un("adom", i, a)] != pfun.adom(i, fmap[a]):
                raise RepresentError("theta_U is not an adom homomorphism")
    cong = tm.congruence
    zero = alg.zero_elem
    for a in range(alg.size):
        for b in range(alg.size):
            if not cong.related(a, zero) and not cong.related(a, b):
                if fmap[a] == fmap[b]:
                    raise RepresentError("theta_U fails the separation property")


def separating_ultrafilter(alg: FiniteAlgebra, a: int, b: int) -> Ultrafilter:
    """An ultrafilter whose congruence separates a from both 0 and b."""
    if leq(alg, a, b):
        raise RepresentError(f"{a} <= {b}: nothing to separate")
    lat = boolalg.a_elements(alg, verify=False)
    gens = [alpha for alpha in lat.carrier if alg.comp(lat.bold(alpha), a) == a]
    gens += [
        lat.complement(beta)
        for beta in lat.carrier
        if alg.comp(lat.bold(beta), a) == alg.comp(lat.bold(beta), b)
    ]
    filt = boolalg.filter_generated(lat, gens)
    if filt is boolalg.IMPROPER:
        raise RepresentError(
            "separating filter is improper; the host violates the suite"
        )
    return boolalg.extend_to_ultrafilter(lat, filt)


# ---------------------------------------------------------------------------
# injective elements

def injective_elements(alg: FiniteAlgebra) -> frozenset:
    """Elements a with: ⟨b⟩∘a = ⟨c⟩∘a forces ⟨b⟩∘D_i(a) = ⟨c⟩∘D_i(a).

    Grouping argument tuples by ⟨b⟩∘a makes this O(size^n) per element
    instead of O(size^2n).
    """
    n = alg.n
    out = set()
    for a in range(alg.size):
        doms = [alg.un("dom", i, a) for i in range(1, n + 1)]
        groups: dict = {}
        good = True
        for combo in itertools.product(range(alg.size), repeat=n):
            key = alg.comp(combo, a)
            vals = tuple(alg.comp(combo, d) for d in doms)
            if groups.setdefault(key, vals) != vals:
                good = False
                break
        if good:
            out.add(a)
    return frozenset(out)


# ---------------------------------------------------------------------------
# assembly

@dataclass(frozen=True, eq=False)
class Representation:
    host: FiniteAlgebra
    sig: Signature
    base: pfun.Base
    fmap: dict  # element index -> PartialFunction
    provenance: tuple  # ((a, b), Ultrafilter) in pair order, deduplicated
    injective_mode: bool = False

    @property
    def target(self) -> pfun.ConcreteAlgebra:
        return pfun.ConcreteAlgebra(
            self.base,
            self.host.n,
            self.sig,
            tuple(sorted(self.fmap.values(), key=lambda f: f.graph)),
        )

    @property
    def is_square(self) -> bool:
        return self.base.is_square


@dataclass(frozen=True)
class FailureReport:
    report: Report
    message: str


def represent(
    alg: FiniteAlgebra,
    sig: Signature | None = None,
    injective_mode: bool = False,
    prune: bool = True,
):
    """Build a faithful representation, or report the failing sentence."""
    if sig is None:
        sig = alg.sig
    report = check_axioms(alg, sig, injective=injective_mode)
    if not report.passed:
        tags = ", ".join(report.failing_tags())
        return FailureReport(report, f"axiom suite fails: {tags}")
    pairs = [
        (a, b)
        for a in range(alg.size)
        for b in range(alg.size)
        if not leq(alg, a, b)
    ]
    chosen: list = []
    seen_atoms: dict = {}
    for pair in pairs:
        U = separating_ultrafilter(alg, *pair)
        if U.atom not in seen_atoms:
            seen_atoms[U.atom] = U
            chosen.append((pair, U))
    if not chosen:
        base = pfun.Base(0, ())
        fmap = {a: pfun.PartialFunction(base, alg.n, ()) for a in range(alg.size)}
        return Representation(alg, sig, base, fmap, (), injective_mode)
    parts = [theta_U(alg, U).fmap for _, U in chosen]
    base, fmap = pfun.disjoint_union(parts)
    rep = Representation(alg, sig, base, fmap, tuple(chosen), injective_mode)
    if prune:
        rep = _prune(rep)
    return rep


def _prune(rep: Representation) -> Representation:
    """Drop base points that no graph touches, if faithfulness survives."""
    used: set = set()
    for f in rep.fmap.values():
        for xs, y in f.graph:
            used.update(xs)
            used.add(y)
    if len(used) == rep.base.size:
        return rep
    keep = sorted(used)
    renum = {x: k for k, x in enumerate(keep)}
    base = pfun.Base(len(keep), tuple(rep.base.eclass[x] for x in keep))
    fmap = {
        a: pfun.PartialFunction(
            base,
            rep.host.n,
            tuple(
                (tuple(renum[x] for x in xs), renum[y]) for xs, y in f.graph
            ),
        )
        for a, f in rep.fmap.items()
    }
    pruned = Representation(
        rep.host, rep.sig, base, fmap, rep.provenance, rep.injective_mode
    )
    if verify_representation(rep.host, pruned).passed:
        return pruned
    return rep


_CONCRETE_OPS = {
    "meet": pfun.meet,
    "pref": pfun.pref,
}


@dataclass(frozen=True)
class RepReport:
    failures: tuple
    is_square: bool
    base_size: int

    @property
    def passed(self) -> bool:
        return not self.failures

    def lines(self) -> list:
        if self.passed:
            return ["representation PASS"]
        return [f"representation FAIL {msg}" for msg in self.failures]


def verify_representation(alg: FiniteAlgebra, rep: Representation) -> RepReport:
    """Full enumeration check: bijectivity, homomorphism per operation of
    the signature, the cube bound, and injectivity of images when asked."""
    fails = []
    fmap = rep.fmap
    n = alg.n
    if sorted(fmap) != list(range(alg.size)):
        fails.append("map is not total on the algebra")
        return RepReport(tuple(fails), rep.base.is_square, rep.base.size)
    if len(set(fmap.values())) != alg.size:
        fails.append("map is not injective")
    if rep.base.size > alg.size**3:
        fails.append(
            f"base {rep.base.size} exceeds cube bound {alg.size ** 3}"
        )
    if rep.sig.has("comp"):
        for combo in itertools.product(range(alg.size), repeat=n):
            for b in range(alg.size):
                if fmap[alg.comp(combo, b)] != pfun.compose(
                    [fmap[a] for a in combo], fmap[b]
                ):
                    fails.append(f"comp at {(*combo, b)}")
                    break
            else:
                continue
            break
    for op, fn in (("adom", pfun.adom), ("dom", pfun.dom), ("fix", pfun.fixset)):
        if not rep.sig.has(op):
            continue
        for i in range(1, n + 1):
            for a in range(alg.size):
                if fmap[alg.un(op, i, a)] != fn(i, fmap[a]):
                    fails.append(f"{op}{i} at {a}")
                    break
    for op, fn in _CONCRETE_OPS.items():
        if not rep.sig.has(op):
            continue
        for a in range(alg.size):
            for b in range(alg.size):
                if fmap[alg.bin(op, a, b)] != fn(fmap[a], fmap[b]):
                    fails.append(f"{op} at ({a},{b})")
                    break
    if rep.sig.has("tie"):
        for i in range(1, n + 1):
            for a in range(alg.size):
                for b in range(alg.size):
                    if fmap[alg.bin("tie", a, b, i)] != pfun.tie(
                        i, fmap[a], fmap[b]
                    ):
                        fails.append(f"tie{i} at ({a},{b})")
                        break
    if rep.injective_mode:
        for a in range(alg.size):
            if not pfun.is_injective_fn(fmap[a]):
                fails.append(f"image of {a} is not injective")
    return RepReport(tuple(fails), rep.base.is_square, rep.base.size)


# ---------------------------------------------------------------------------
# bounded square-representability search

def square_representation_search(
    alg: FiniteAlgebra, sig: Signature | None = None, max_base: int = 2
):
    """Exhaustive embedding search over square bases of size <= max_base.

    Returns a Representation or None.  Feasible only at desk scale: the
    candidate pool is every partial function on the base.
    """
    if sig is None:
        sig = alg.sig
    n = alg.n
    for s in range(1, max_base + 1):
        base = pfun.Base.square(s)
        pool = _all_pfuns(base, n)
        assign: dict = {}

        def consistent(a, f):
            assign[a] = f
            ok = _partial_hom_ok(alg, sig, assign)
            del assign[a]
            return ok

        def search(k):
            if k == alg.size:
                return True
            for f in pool:
                if f in assign.values():
                    continue
                if consistent(k, f):
                    assign[k] = f
                    if search(k + 1):
                        return True
                    del assign[k]
            return False

        if search(0):
            return Representation(alg, sig, base, dict(assign), (), False)
    return None


def _all_pfuns(base: pfun.Base, n: int) -> list:
    tuples = base.uniform_tuples(n)
    out = []
    for vals in itertools.product(
        *[(None, *base.class_of(t[0])) for t in tuples]
    ):
        graph = tuple(
            (t, v) for t, v in zip(tuples, vals) if v is not None
        )
        out.append(pfun.PartialFunction(base, n, graph))
    return out


def _partial_hom_ok(alg: FiniteAlgebra, sig: Signature, assign: dict) -> bool:
    n = alg.n
    have = list(assign)
    for i in range(1, n + 1):
        for op, fn in (("adom", pfun.adom), ("dom", pfun.dom), ("fix", pfun.fixset)):
            if not sig.has(op):
                continue
            for a in have:
                r = alg.un(op, i, a)
                if r in assign and assign[r] != fn(i, assign[a]):
                    return False
    for op, fn in _CONCRETE_OPS.items():
        if not sig.has(op):
            continue
        for a in have:
            for b in have:
                r = alg.bin(op, a, b)
                if r in assign and assign[r] != fn(assign[a], assign[b]):
                    return False
    if sig.has("tie"):
        for i in range(1, n + 1):
            for a in have:
                for b in have:
                    r = alg.bin("tie", a, b, i)
                    if r in assign and assign[r] != pfun.tie(i, assign[a], assign[b]):
                        return False
    if sig.has("comp"):
        for combo in itertools.product(have, repeat=n):
            for b in have:
                r = alg.comp(combo, b)
                if r in assign and assign[r] != pfun.compose(
                    [assign[a] for a in combo], assign[b]
                ):
                    return False
    return True


# ---------------------------------------------------------------------------
# file format

def format_representation(rep: Representation) -> str:
    nm = rep.host.names
    lines = [f"represents {rep.host.label}"]
    named = []
    for a in sorted(rep.fmap):
        lines.append(f"map {nm[a]} -> f{a}")
        named.append((f"f{a}", rep.fmap[a]))
    return (
        "\n".join(lines)
        + "\n"
        + pfun.format_pfun_file(rep.base, rep.host.n, named)
    )


def parse_representation(text: str):
    """Returns (algebra label, base, n, dict element-name -> PartialFunction)."""
    head, rest = [], []
    body = False
    for raw in text.splitlines():
        ln = raw.split("#", 1)[0].strip()
        if not ln:
            continue
        if ln.startswith("base "):
            body = True
        (rest if body else head).append(ln)
    if not head or not head[0].startswith("represents "):
        raise RepresentError("expected 'represents <name>' header")
    label = head[0].split(None, 1)[1]
    assigned = {}
    for ln in head[1:]:
        parts = ln.split()
        if parts[0] != "map" or parts[2] != "->":
            raise RepresentError(f"bad map line: {ln!r}")
        assigned[parts[1]] = parts[3]
    base, n, fns = pfun.parse_pfun_file("\n".join(rest))
    byname = dict(fns)
    try:
        fmap = {elem: byname[fname] for elem, fname in assigned.items()}
    except KeyError as e:
        raise RepresentError(f"map references unknown function {e}") from None
    return label, base, n, fmap


def verify_rep_file(alg: FiniteAlgebra, text: str) -> RepReport:
    """Check a parsed representation file against an algebra."""
    label, base, n, named = parse_representation(text)
    if n != alg.n:
        return RepReport(("arity mismatch",), base.is_square, base.size)
    try:
        fmap = {alg.index(name): f for name, f in named.items()}
    except FinalgError as e:
        return RepReport((str(e),), base.is_square, base.size)
    rep = Representation(alg, alg.sig, base, fmap, ())
    return verify_representation(alg, rep)
