"""The Boolean algebra of antidomain elements of a finite algebra.

The carrier is the set of A₁-images.  The product α•β is ⟨α₁,..,αₙ⟩∘β
where α_j = D_j(α) is the A_j-image of α under the index-change map θ_j1;
the complement is A₁, the top is π₁ and the bottom is 0.  Sums come from
the tie machinery: α + β = A₁(⟨α₁,..,αₙ⟩∘A₁β).

Construction verifies the whole structure (atom decomposition, the index
maps, closure) and reports failures with witnesses rather than asserting,
so the lattice doubles as a diagnostic for algebras that almost satisfy
the axiom suite.
"""

from __future__ import annotations

from dataclasses import dataclass

from .finalg import FiniteAlgebra, FinalgError, leq


class BoolalgError(FinalgError):
    def __init__(self, message, report=()):
        super().__init__(message)
        self.report = tuple(report)


IMPROPER = "IMPROPER"


@dataclass(frozen=True)
class Filter:
    members: frozenset

    def __contains__(self, x):
        return x in self.members


@dataclass(frozen=True)
class Ultrafilter:
    members: frozenset
    atom: int  # the generating atom; ultrafilters are principal here

    def __contains__(self, x):
        return x in self.members


@dataclass(frozen=True, eq=False)
class AElementLattice:
    host: FiniteAlgebra
    carrier: tuple  # sorted element indices, the A₁-images

    def __contains__(self, x):
        return x in self.carrier

    def bold(self, alpha: int) -> tuple:
        """⟨α₁,..,αₙ⟩: the indexed images of a carrier element."""
        return tuple(
            self.host.un("dom", j, alpha) for j in range(1, self.host.n + 1)
        )

    @property
    def top(self) -> int:
        return self.host.proj_elem[0]

    @property
    def bottom(self) -> int:
        return self.host.zero_elem

    def complement(self, alpha: int) -> int:
        self._check(alpha)
        return self.host.un("adom", 1, alpha)

    def bullet(self, alpha: int, beta: int) -> int:
        self._check(alpha)
        self._check(beta)
        return self.host.comp(self.bold(alpha), beta)

    def plus(self, alpha: int, beta: int) -> int:
        self._check(alpha)
        self._check(beta)
        cotuple = tuple(
            self.host.un("adom", j, alpha) for j in range(1, self.host.n + 1)
        )
        return self.host.un(
            "adom", 1, self.host.comp(cotuple, self.host.un("adom", 1, beta))
        )

    def below(self, alpha: int, beta: int) -> bool:
        return self.bullet(alpha, beta) == alpha

    def _check(self, x: int):
        if x not in self.carrier:
            raise BoolalgError(f"element {x} is not in the carrier")

    def i_elements(self, i: int) -> tuple:
        """The A_i-images, in element order."""
        return tuple(
            sorted({self.host.un("adom", i, a) for a in range(self.host.size)})
        )


def a_elements(alg: FiniteAlgebra, verify: bool = True) -> AElementLattice:
    """Build and (by default) verify the lattice of A₁-elements."""
    carrier = tuple(
        sorted({alg.un("adom", 1, a) for a in range(alg.size)})
    )
    lat = AElementLattice(alg, carrier)
    if verify:
        report = verify_lattice(lat)
        if report:
            raise BoolalgError(
                "Boolean structure verification failed: " + report[0], report
            )
    return lat


def verify_lattice(lat: AElementLattice) -> list:
    """Witnessed failure lines; empty when the structure is Boolean.

    Completeness for finite Boolean algebras: closure, complement and
    identity laws plus the atom decomposition (every element is determined
    by its atom set and meet/complement act as intersection/set complement)
    pin the structure down to the powerset of the atoms.
    """
    out = []
    alg, carrier = lat.host, lat.carrier
    cset = set(carrier)
    if lat.top not in cset or lat.bottom not in cset:
        out.append("top or bottom missing from carrier")
        return out
    for a in carrier:
        if lat.complement(a) not in cset:
            out.append(f"carrier not closed under complement at {a}")
            return out
        if lat.complement(lat.complement(a)) != a:
            out.append(f"double complement fails at {a}")
    for a in carrier:
        for b in carrier:
            if lat.bullet(a, b) not in cset:
                out.append(f"carrier not closed under product at ({a},{b})")
                return out
            if lat.bullet(a, b) != lat.bullet(b, a):
                out.append(f"product not commutative at ({a},{b})")
            if lat.plus(a, b) != lat.complement(
                lat.bullet(lat.complement(a), lat.complement(b))
            ):
                out.append(f"sum is not the De Morgan dual at ({a},{b})")
    for a in carrier:
        if lat.bullet(a, lat.top) != a:
            out.append(f"top is not a product identity at {a}")
        if lat.bullet(a, lat.bottom) != lat.bottom:
            out.append(f"bottom not absorbing at {a}")
        if lat.bullet(a, lat.complement(a)) != lat.bottom:
            out.append(f"a • A(a) != 0 at {a}")
        if lat.plus(a, lat.complement(a)) != lat.top:
            out.append(f"a + A(a) != top at {a}")
    if out:
        return out
    ats = atoms(lat)
    atom_sets = {
        a: frozenset(e for e in ats if lat.bullet(e, a) == e) for a in carrier
    }
    if len(set(atom_sets.values())) != len(carrier):
        out.append("distinct elements share an atom set")
    for a in carrier:
        if atom_sets[lat.complement(a)] != frozenset(ats) - atom_sets[a]:
            out.append(f"complement does not flip the atom set at {a}")
        for b in carrier:
            if atom_sets[lat.bullet(a, b)] != atom_sets[a] & atom_sets[b]:
                out.append(f"product is not atom-set intersection at ({a},{b})")
    # index-change maps θ_j1 : A₁-elements -> A_j-elements
    n = alg.n
    for j in range(1, n + 1):
        targets = lat.i_elements(j)
        image = [alg.un("dom", j, a) for a in carrier]
        if sorted(set(image)) != list(targets) or len(set(image)) != len(carrier):
            out.append(f"index map to A_{j}-elements is not a bijection")
        for a in range(alg.size):
            if alg.un("dom", j, alg.un("adom", 1, a)) != alg.un("adom", j, a):
                out.append(f"index map disagrees with A_{j} at element {a}")
                break
    return out


def theta(lat: AElementLattice, j: int, i: int, x: int) -> int:
    """Move an A_i-element to its A_j-image."""
    if x not in lat.i_elements(i):
        raise BoolalgError(f"element {x} is not an A_{i}-element")
    return lat.host.un("dom", j, x)


def atoms(lat: AElementLattice) -> tuple:
    nonzero = [a for a in lat.carrier if a != lat.bottom]
    return tuple(
        a
        for a in nonzero
        if not any(b != a and lat.bullet(b, a) == b for b in nonzero)
    )


def ultrafilters(lat: AElementLattice) -> tuple:
    """All ultrafilters, one per atom, in atom order."""
    return tuple(
        Ultrafilter(
            frozenset(a for a in lat.carrier if lat.bullet(e, a) == e), e
        )
        for e in atoms(lat)
    )


def filter_generated(lat: AElementLattice, gens):
    """Upward closure of the finite meets of gens, or IMPROPER."""
    m = lat.top
    for g in gens:
        m = lat.bullet(m, g)
    if m == lat.bottom:
        return IMPROPER
    return Filter(frozenset(a for a in lat.carrier if lat.bullet(m, a) == m))


def filter_minimum(lat: AElementLattice, f: Filter) -> int:
    m = lat.top
    for g in f.members:
        m = lat.bullet(m, g)
    return m


def extend_to_ultrafilter(lat: AElementLattice, f: Filter) -> Ultrafilter:
    """Principal extension: take the least atom below the filter minimum."""
    m = filter_minimum(lat, f)
    if m == lat.bottom:
        raise BoolalgError("cannot extend an improper filter")
    for e in atoms(lat):
        if lat.bullet(e, m) == e:
            return Ultrafilter(
                frozenset(a for a in lat.carrier if lat.bullet(e, a) == e), e
            )
    raise BoolalgError("no atom below the filter minimum")


def dump(lat: AElementLattice) -> str:
    nm = lat.host.names
    lines = ["atoms: " + " ".join(nm[e] for e in atoms(lat))]
    for k, u in enumerate(ultrafilters(lat)):
        lines.append(
            f"ultrafilter {k}: " + " ".join(nm[e] for e in sorted(u.members))
        )
    return "\n".join(lines) + "\n"
