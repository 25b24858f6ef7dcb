"""Boolean structure of the antidomain elements."""

import re

import pytest

from funalg import boolalg, finalg
from funalg.boolalg import (
    IMPROPER,
    BoolalgError,
    a_elements,
    atoms,
    dump,
    extend_to_ultrafilter,
    filter_generated,
    filter_minimum,
    theta,
    ultrafilters,
)

from conftest import corpus


HOSTS = [
    finalg.from_concrete(calg, label=f"{row}/{n}")
    for n, row, calg in corpus(seed=401, count=25)
]


@pytest.fixture(scope="module")
def quotient_host():
    return finalg.from_concrete(finalg.build_quotient_example(2), "qex2")


@pytest.mark.parametrize("alg", HOSTS, ids=lambda a: a.label)
def test_lattice_is_boolean_on_corpus(alg):
    lat = a_elements(alg)  # raises on any structural failure
    ats = atoms(lat)
    assert len(lat.carrier) == 2 ** len(ats)
    assert len(ultrafilters(lat)) == len(ats)


@pytest.mark.parametrize("alg", HOSTS[:8], ids=lambda a: a.label)
def test_order_agrees_with_domain_order(alg):
    lat = a_elements(alg)
    for a in lat.carrier:
        for b in lat.carrier:
            assert lat.below(a, b) == finalg.leq(alg, a, b)


@pytest.mark.parametrize("alg", HOSTS[:8], ids=lambda a: a.label)
def test_lattice_operations_by_brute_force(alg):
    lat = a_elements(alg)
    down = {a: frozenset(b for b in lat.carrier if lat.below(b, a))
            for a in lat.carrier}
    for a in lat.carrier:
        for b in lat.carrier:
            # product = greatest lower bound, sum = least upper bound
            assert down[lat.bullet(a, b)] == down[a] & down[b]
            ups = [c for c in lat.carrier
                   if lat.below(a, c) and lat.below(b, c)]
            join = lat.plus(a, b)
            assert join in ups
            assert all(lat.below(join, c) for c in ups)


@pytest.mark.parametrize("alg", HOSTS[:8], ids=lambda a: a.label)
def test_index_maps_compose(alg):
    lat = a_elements(alg)
    n = alg.n
    for x in lat.carrier:
        assert theta(lat, 1, 1, x) == x
        for j in range(1, n + 1):
            y = theta(lat, j, 1, x)
            assert y in lat.i_elements(j)
            for k in range(1, n + 1):
                assert theta(lat, k, j, y) == theta(lat, k, 1, x)


def test_theta_rejects_non_members(quotient_host):
    lat = a_elements(quotient_host)
    outside = next(a for a in range(quotient_host.size) if a not in lat.carrier)
    with pytest.raises(BoolalgError, match="is not an A_1-element"):
        theta(lat, 2, 1, outside)


@pytest.mark.parametrize("alg", HOSTS[:8], ids=lambda a: a.label)
def test_filter_generated_is_least_filter(alg):
    import itertools

    lat = a_elements(alg)
    for r in range(min(len(lat.carrier), 3) + 1):
        for gens in itertools.combinations(lat.carrier, r):
            f = filter_generated(lat, gens)
            m = lat.top
            for g in gens:
                m = lat.bullet(m, g)
            if m == lat.bottom:
                assert f is IMPROPER
            else:
                # exactly the upward closure of the meet of the generators
                assert f.members == frozenset(
                    a for a in lat.carrier if lat.below(m, a)
                )
                assert filter_minimum(lat, f) == m


@pytest.mark.parametrize("alg", HOSTS[:8], ids=lambda a: a.label)
def test_ultrafilters_are_maximal_proper(alg):
    lat = a_elements(alg)
    for u in ultrafilters(lat):
        assert lat.bottom not in u
        assert lat.top in u
        for a in lat.carrier:
            # an ultrafilter decides every element
            assert (a in u) != (lat.complement(a) in u)


def test_extend_to_ultrafilter(quotient_host):
    lat = a_elements(quotient_host)
    f = filter_generated(lat, [lat.top])
    u = extend_to_ultrafilter(lat, f)
    assert f.members <= u.members
    assert u.atom in atoms(lat)
    improper = boolalg.Filter(frozenset(lat.carrier))
    with pytest.raises(BoolalgError, match="improper"):
        extend_to_ultrafilter(lat, improper)


def test_quotient_example_lattice(quotient_host):
    lat = a_elements(quotient_host)
    assert len(lat.carrier) == 4
    assert len(atoms(lat)) == 2
    text = dump(lat)
    lines = text.splitlines()
    assert re.fullmatch(r"atoms:( \S+){2}", lines[0])
    assert len(lines) == 3
    for k, line in enumerate(lines[1:]):
        assert line.startswith(f"ultrafilter {k}: ")


def test_carrier_membership_checked(quotient_host):
    lat = a_elements(quotient_host)
    outside = next(a for a in range(quotient_host.size) if a not in lat.carrier)
    with pytest.raises(BoolalgError, match="not in the carrier"):
        lat.bullet(outside, lat.top)
