import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from finitecoh.exactlinalg import snf_mod
from finitecoh.gmodules import (
    GModule,
    ModuleMap,
    Pairing,
    ShortExactSequence,
    augmentation_sequence,
    cartier_pairing,
    diagonal_sequence,
    dual_module,
    equivariant_maps,
    induced_module,
    module_from_json,
    module_from_name,
    module_to_json,
    regular_module,
    trivial_module,
    verify_duality,
)
from finitecoh.groups import catalog, generated_subgroup, get_group, trivial_subgroup, whole_group

CATALOG8 = list(catalog(8).values())


def test_trivial_module_examples():
    G = get_group("V4")
    M = trivial_module(G, 4)
    assert M.rank == 1 and all((M.action[g] == 1).all() for g in range(4))
    Z = trivial_module(get_group("C1"), 1, rank=3)
    assert not Z.action.any()
    M2 = trivial_module(get_group("C2"), 2)
    assert M2.rank == 1 and (M2.action == 1).all()


def test_regular_module_examples():
    assert regular_module(get_group("C1"), 5).rank == 1
    G = get_group("C2")
    R = regular_module(G, 4)
    assert R.rank == 2
    g = G.non_identity[0]
    assert (R.action[g] == [[0, 1], [1, 0]]).all()
    R4 = regular_module(get_group("V4"), 4)
    assert R4.rank == 4
    for g in range(4):
        P = R4.action[g]
        assert (P.sum(axis=0) == 1).all() and (P.sum(axis=1) == 1).all()


def test_induced_module_examples():
    G = get_group("S3")
    W = induced_module(G, whole_group(G), 3)
    assert W.rank == 1 and (W.action == 1).all()
    assert np.array_equal(induced_module(G, trivial_subgroup(G), 3).action, regular_module(G, 3).action)
    C4 = get_group("C4")
    g2 = next(g for g in range(4) if C4.element_orders[g] == 2)
    M = induced_module(C4, generated_subgroup(C4, [g2]), 2)
    assert M.rank == 2
    gen = next(g for g in range(4) if C4.element_orders[g] == 4)
    assert (M.action[gen] == [[0, 1], [1, 0]]).all()
    assert (M.action[g2] == np.eye(2)).all()


def test_dual_examples():
    G = get_group("D4")
    T = trivial_module(G, 4)
    D, P = dual_module(T)
    assert np.array_equal(D.action, T.action)
    R = regular_module(G, 4)
    RD, _ = dual_module(R)
    # an explicit equivariant isomorphism, found by linear solving
    sol = equivariant_maps(RD, R, [(np.eye(8), np.eye(8)[:, [0]], np.eye(8)[:, [0]])])
    assert sol is not None
    F = sol[0]
    s = snf_mod(F, 4)
    assert s.rank == 8 and all(d == 1 for d in s.diag)
    ModuleMap(RD, R, F)
    M = diagonal_sequence(G, 4).C
    DD, _ = dual_module(dual_module(M)[0])
    assert np.array_equal(DD.action, M.action)


@pytest.mark.parametrize("G", CATALOG8, ids=lambda G: G.name)
def test_dual_pairing_is_perfect_and_invariant(G):
    for M in (diagonal_sequence(G, 4).C, augmentation_sequence(G, 4).A, regular_module(G, 4)):
        D, P = dual_module(M)
        assert P.perfect
        rng = np.random.default_rng(0)
        a = rng.integers(0, 4, M.rank)
        b = rng.integers(0, 4, M.rank)
        for g in range(G.size):
            assert P(M.act(g, a), D.act(g, b)) == P(a, b)


def test_diagonal_sequence_examples():
    assert diagonal_sequence(get_group("C1"), 3).C.rank == 0
    H = diagonal_sequence(get_group("C2"), 2).C
    assert H.rank == 1 and (H.action % 2 == 1).all()
    assert diagonal_sequence(get_group("V4"), 4).C.rank == 3


def test_augmentation_sequence_examples():
    assert augmentation_sequence(get_group("C1"), 3).A.rank == 0
    G = get_group("C2")
    Hp = augmentation_sequence(G, 4).A
    assert Hp.rank == 1
    assert Hp.action[G.non_identity[0]][0, 0] == 3
    S = augmentation_sequence(get_group("V4"), 4)
    assert S.A.rank == 3
    # the last map is the augmentation
    assert (S.surj.matrix == 1).all()


def test_cartier_pairing_is_perfect():
    for G in CATALOG8:
        P = cartier_pairing(G, 4)
        assert P.left == diagonal_sequence(G, 4).C
        assert P.right == augmentation_sequence(G, 4).A
        assert P.perfect


@pytest.mark.parametrize("name,n", [("C1", 4), ("C2", 4), ("V4", 4), ("S3", 3), ("Q8", 8)])
def test_verify_duality_examples(name, n):
    G = get_group(name)
    rep = verify_duality(G, n)
    assert rep.ok, rep.failure
    if name == "C2":
        assert rep.isomorphisms["phi_A"].shape == (1, 1)
        assert rep.isomorphisms["phi_B"].shape == (2, 2)
    assert rep.to_json()["ok"]


def test_non_equivariant_map_rejected():
    G = get_group("C2")
    with pytest.raises(ValueError):
        ModuleMap(regular_module(G, 4), trivial_module(G, 4), [[1, 0]])


def test_non_exact_sequence_rejected():
    G = get_group("C2")
    T, R = trivial_module(G, 4), regular_module(G, 4)
    inj = ModuleMap(T, R, [[1], [1]])
    with pytest.raises(ValueError):
        ShortExactSequence(inj, ModuleMap(R, T, [[0, 0]]))


def test_invalid_action_rejected():
    G = get_group("C2")
    with pytest.raises(ValueError):
        GModule(G, 4, [[[1]], [[2]]])
    with pytest.raises(ValueError):
        GModule(G, 0, [[[1]], [[1]]])


def test_non_invariant_pairing_rejected():
    G = get_group("C2")
    R = regular_module(G, 4)
    with pytest.raises(ValueError):
        Pairing(R, R, [[1, 0], [0, 0]])


def test_module_names_and_json():
    G = get_group("V4")
    for spec, rank in (("trivial", 1), ("regular", 4), ("H", 3), ("Hprime", 3), ("induced:1", 2), ("dual:H", 3)):
        M = module_from_name(G, spec, 4)
        assert M.rank == rank
        assert module_from_json(G, module_to_json(M)) == GModule(G, 4, M.action)
    with pytest.raises(ValueError):
        module_from_name(G, "bogus", 4)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(CATALOG8), st.sampled_from([2, 3, 4, 6]), st.sampled_from(["regular", "H", "Hprime", "trivial"]))
def test_double_dual_is_identity(G, n, spec):
    M = module_from_name(G, spec, n)
    DD, _ = dual_module(dual_module(M)[0])
    assert np.array_equal(DD.action, M.action)
