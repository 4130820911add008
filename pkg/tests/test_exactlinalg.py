import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from finitecoh.exactlinalg import (
    FinAbGroup,
    NotAMemberError,
    determinant,
    element_order,
    hom_kernel,
    kernel_mod,
    smith_normal_form,
    snf_mod,
    solve_mod,
    subgroup_of,
    subquotient,
)

from oracles import (
    _det,
    lattice_quotient_profile,
    solve_by_search,
    span_mod,
    torsion_profile_of_factors,
    torsion_profile_of_quotient,
)


def _check_smith(A, s):
    A = np.asarray(A, dtype=object)
    assert ((s.U @ A @ s.V) == s.D).all()
    assert abs(determinant(s.U)) == 1
    assert abs(determinant(s.V)) == 1
    m, k = A.shape
    for i in range(m):
        for j in range(k):
            if i != j:
                assert s.D[i, j] == 0
    diag = s.diagonal
    assert all(d > 0 for d in diag)
    assert all(b % a == 0 for a, b in zip(diag, diag[1:]))
    assert all(s.D[i, i] == 0 for i in range(s.rank, min(m, k)))


# ---------------------------------------------------------------- integer SNF


def test_identity_smith():
    A = np.eye(3, dtype=np.int64)
    s = smith_normal_form(A)
    _check_smith(A, s)
    assert s.diagonal == [1, 1, 1]


def test_zero_smith():
    A = np.zeros((2, 3), dtype=np.int64)
    s = smith_normal_form(A)
    _check_smith(A, s)
    assert s.rank == 0


def test_smith_2468_against_lattice_count():
    A = [[2, 4], [6, 8]]
    s = smith_normal_form(A)
    _check_smith(A, s)
    assert s.diagonal == [2, 4]
    # Z^2 / im A enumerated inside (Z/|det|)^2
    order, profile = lattice_quotient_profile(A)
    assert order == 8
    assert profile == torsion_profile_of_factors([2, 4], 8)


def test_smith_against_lattice_count_small_cases():
    for A in ([[3, 0], [0, 5]], [[1, 2], [3, 4]], [[4, 6], [6, 4]], [[2, 0, 0], [0, 4, 2], [0, 2, 4]]):
        s = smith_normal_form(A)
        _check_smith(A, s)
        order, profile = lattice_quotient_profile(A)
        N = abs(_det(A))
        diag = s.diagonal
        assert order == np.prod(diag)
        assert profile == torsion_profile_of_factors(diag, N)


def test_determinant_matches_permutation_expansion():
    rng = np.random.default_rng(7)
    for k in range(0, 6):
        for _ in range(10):
            A = rng.integers(-9, 10, size=(k, k)).tolist()
            assert determinant(A) == (_det(A) if k else 1)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 8), st.integers(1, 8), st.data())
def test_smith_property(m, k, data):
    A = data.draw(st.lists(st.lists(st.integers(-20, 20), min_size=k, max_size=k), min_size=m, max_size=m))
    _check_smith(A, smith_normal_form(A))


# ---------------------------------------------------------------- mod-n SNF


def _check_mod_smith(A, n, s):
    A = np.asarray(A, dtype=np.int64) % n
    m, k = A.shape
    D = np.zeros((m, k), dtype=np.int64)
    for i, d in enumerate(s.diag):
        D[i, i] = d
    assert not ((s.U @ A @ s.V - D) % n).any()
    assert not ((s.U @ s.Uinv - np.eye(m, dtype=np.int64)) % n).any()
    assert all(n % d == 0 and d < n for d in s.diag)
    assert all(b % a == 0 for a, b in zip(s.diag, s.diag[1:]))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 6), st.integers(1, 6), st.integers(1, 12), st.data())
def test_snf_mod_property(m, k, n, data):
    A = data.draw(st.lists(st.lists(st.integers(-20, 20), min_size=k, max_size=k), min_size=m, max_size=m))
    full = snf_mod(A, n, left=True, right=True)
    _check_mod_smith(A, n, full)
    # the row-pruned path produces the same diagonal and an equivalent kernel
    pruned = snf_mod(A, n, left=False, right=True)
    assert pruned.diag == full.diag
    K = kernel_mod(A, n)
    assert not ((np.asarray(A) % n @ K) % n).any()
    if n <= 6 and k <= 3:
        rows = [tuple(r) for r in (np.asarray(A) % n).tolist()]
        brute = {x for x in itertools.product(range(n), repeat=k)
                 if all(sum(a * b for a, b in zip(r, x)) % n == 0 for r in rows)}
        assert span_mod(K.T.tolist(), n, k) == brute


def test_snf_mod_diag_matches_integer_snf():
    rng = np.random.default_rng(11)
    for _ in range(50):
        m, k = rng.integers(1, 6, size=2)
        A = rng.integers(-20, 21, size=(m, k))
        n = int(rng.integers(2, 30))
        integer = smith_normal_form(A).diagonal
        expected = sorted(int(np.gcd(d, n)) for d in integer + [0] * (min(m, k) - len(integer)))
        expected = [d for d in expected if d != n]
        assert snf_mod(A, n).diag == expected


def test_snf_mod_rejects_bad_modulus():
    with pytest.raises(ValueError):
        snf_mod([[1]], 0)


# ---------------------------------------------------------------- solve_mod


def test_solve_identity():
    b = np.array([3, 1, 2])
    assert solve_mod(np.eye(3, dtype=np.int64), b, 4).tolist() == [3, 1, 2]


def test_solve_no_solution():
    assert solve_by_search([[2]], [1], 4) == []
    assert solve_mod([[2]], [1], 4) is None


def test_solve_with_solution():
    assert solve_by_search([[2]], [2], 4) == [(1,), (3,)]
    x = solve_mod([[2]], [2], 4)
    assert tuple(x.tolist()) in {(1,), (3,)}


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.integers(1, 6), st.data())
def test_solve_property(m, k, n, data):
    A = data.draw(st.lists(st.lists(st.integers(0, n - 1), min_size=k, max_size=k), min_size=m, max_size=m))
    b = data.draw(st.lists(st.integers(0, n - 1), min_size=m, max_size=m))
    sols = solve_by_search(A, b, n)
    x = solve_mod(A, b, n)
    if sols:
        assert x is not None and tuple(int(v) for v in x) in set(sols)
    else:
        assert x is None


def test_solve_is_deterministic():
    A = [[2, 4, 6], [1, 3, 5]]
    b = [4, 3]
    assert solve_mod(A, b, 12).tolist() == solve_mod(A, b, 12).tolist()


# ---------------------------------------------------------------- subquotients


def test_subquotient_full_free():
    sq = subquotient(np.eye(2, dtype=np.int64), np.zeros((2, 0), dtype=np.int64), 4)
    assert sq.group.invariant_factors == (4, 4)


def test_subquotient_z4_mod_2z4():
    sq = subquotient([[1]], [[2]], 4)
    Z, B = span_mod([[1]], 4, 1), span_mod([[2]], 4, 1)
    assert len(Z) // len(B) == 2
    assert sq.group.invariant_factors == (2,)


def test_subquotient_z_equals_b():
    Z = np.array([[1, 2], [0, 2]])
    assert subquotient(Z, Z, 6).group.is_trivial


def test_subquotient_rejects_b_outside_z():
    with pytest.raises(NotAMemberError):
        subquotient([[2]], [[1]], 4)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3), st.integers(1, 6), st.data())
def test_subquotient_property(k, n, data):
    vec = st.lists(st.integers(0, n - 1), min_size=k, max_size=k)
    zg = data.draw(st.lists(vec, min_size=1, max_size=3))
    # boundaries are combinations of cycles, so B <= Z holds
    coeffs = data.draw(st.lists(st.lists(st.integers(0, n - 1), min_size=len(zg), max_size=len(zg)),
                                min_size=0, max_size=3))
    bg = [[sum(c * z[i] for c, z in zip(cs, zg)) % n for i in range(k)] for cs in coeffs]
    Zm = np.array(zg, dtype=np.int64).T
    Bm = np.array(bg, dtype=np.int64).T if bg else np.zeros((k, 0), dtype=np.int64)
    sq = subquotient(Zm, Bm, n)
    Z, B = span_mod(zg, n, k), span_mod(bg, n, k)
    assert sq.group.order == len(Z) // len(B)
    if n > 1:
        assert torsion_profile_of_factors(sq.group.invariant_factors, n) == torsion_profile_of_quotient(Z, B, n)
    # coords are constant on cosets and distinguish them
    for z in Z:
        assert sq.contains(z)
    seen = {}
    for z in Z:
        c = sq.coords(z)
        key = frozenset(tuple((a - b) % n for a, b in zip(z, w)) for w in B)
        seen.setdefault(c, set()).add(key)
    assert len(seen) == sq.group.order
    for i in range(sq.basis.shape[1]):
        unit = tuple(int(j == i) for j in range(sq.basis.shape[1]))
        assert sq.coords(sq.basis[:, i]) == unit


def test_hom_kernel_and_subgroup():
    # Z/4 x Z/2 -> Z/2, (a, b) -> a + b mod 2
    K = hom_kernel([[1, 1]], (2, 4), (2,), 4)
    assert K.group.order == 4
    S = subgroup_of([[2], [0]], (4, 4), 4)
    assert S.group.invariant_factors == (2,)


def test_finabgroup_canonical_form():
    assert FinAbGroup.from_cyclic_orders([2, 3]).invariant_factors == (6,)
    assert FinAbGroup.from_cyclic_orders([4, 2, 1]).invariant_factors == (2, 4)
    with pytest.raises(ValueError):
        FinAbGroup((4, 2))
    assert element_order((2, 1), (4, 4)) == 4
