import pytest

from finitecoh.cohomology import cohomology_group
from finitecoh.gmodules import augmentation_sequence, diagonal_sequence, regular_module, trivial_module
from finitecoh.groups import catalog, get_group
from finitecoh.sha import propdata_certificate, sha1_omega

import oracles


@pytest.mark.parametrize("name", ["C2", "C4", "C6", "C8"])
def test_cyclic_groups_have_trivial_sha(name):
    G = get_group(name)
    for M in (trivial_module(G, 4), augmentation_sequence(G, 4).A, diagonal_sequence(G, 4).C):
        assert sha1_omega(G, M).order == 1


@pytest.mark.parametrize("name,n,expected", [
    ("V4", 4, 2),
    ("V4", 2, 1),
    ("C2xC4", 2, 1),
    ("S3", 3, 1),
])
def test_sha_hprime_against_enumeration(name, n, expected):
    G = get_group(name)
    M = augmentation_sequence(G, n).A
    order, profile = oracles.sha1_by_enumeration(G, M)
    assert order == expected
    S = sha1_omega(G, M)
    assert S.order == expected
    assert oracles.torsion_profile_of_factors(S.subgroup.invariant_factors, n) == profile


def test_sha_trivial_module_v4_against_enumeration():
    # H^1 of a trivial module is Hom(G, Z/n); a hom vanishing on all <g> is zero
    G = get_group("V4")
    M = trivial_module(G, 4)
    assert oracles.sha1_by_enumeration(G, M)[0] == 1
    assert sha1_omega(G, M).order == 1


def test_sha_v4_n4_invariants_and_generators():
    G = get_group("V4")
    S = sha1_omega(G, augmentation_sequence(G, 4).A)
    assert S.subgroup.invariant_factors == (2,)
    assert len(S.generators) == 1
    (x,) = S.generators
    assert S.contains(x) and x.order == 2
    H1 = cohomology_group(G, augmentation_sequence(G, 4).A, 1)
    assert sum(S.contains(y) for y in H1.elements()) == 2


def test_sha_c2_cubed_n8():
    G = get_group("C2xC2xC2")
    S = sha1_omega(G, augmentation_sequence(G, 8).A)
    assert S.subgroup.invariant_factors == (4,)


def test_sha_of_regular_module_is_trivial():
    G = get_group("Q8")
    assert sha1_omega(G, regular_module(G, 4)).order == 1


def test_certificate_v4_n4():
    c = propdata_certificate(get_group("V4"), 4)
    assert (c.N, c.Nprime) == (4, 2)
    assert c.sha_invariants.invariant_factors == (2,)
    assert c.order_matches and c.cyclic and c.generator_ok and c.ok
    js = c.to_json()
    assert js["expected_order"] == 2 and js["ok"]


@pytest.mark.parametrize("n", [2, 3, 4, 6, 12])
def test_certificate_s3(n):
    c = propdata_certificate(get_group("S3"), n)
    assert c.N == c.Nprime
    assert c.sha_invariants.is_trivial and c.ok


def test_certificate_d4_n8():
    c = propdata_certificate(get_group("D4"), 8)
    assert (c.N, c.Nprime) == (8, 4)
    assert c.sha_invariants.invariant_factors == (2,) and c.ok


@pytest.mark.parametrize("G", list(catalog(8).values()), ids=lambda G: G.name)
def test_certificate_n1(G):
    c = propdata_certificate(G, 1)
    assert c.N == c.Nprime == 1 and c.sha_invariants.is_trivial and c.ok


@pytest.mark.parametrize("name,n", [("C2xC2xC2", 4), ("C2xC4", 8), ("Q8", 8), ("D4", 4)])
def test_certificate_noncyclic(name, n):
    G = get_group(name)
    c = propdata_certificate(G, n)
    assert c.ok and c.sha_invariants.order == c.expected_order
