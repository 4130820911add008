"""G-modules that are free over Z/n, equivariant maps, and pairings.

A module stores one ``rank x rank`` matrix per group element; vectors are
column vectors and ``g . v = action[g] @ v (mod n)``.

The two modules built from the regular module are realised with explicit
bases:

* ``H  = (Z/n)[G] / diagonal``: basis the images of ``e_g``, g != 1, so
  ``e_1 == -(sum of the others)``.
* ``H' = ker(augmentation)``: basis ``e_g - e_1``, g != 1.

Both are free of rank ``|G| - 1`` because the diagonal inclusion and the
augmentation split over Z/n.  Non-identity elements are taken in index
order.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .exactlinalg import kernel_mod, snf_mod, solve_mod
from .groups import FiniteGroup, Subgroup, generated_subgroup, trivial_subgroup

__all__ = [
    "GModule",
    "ModuleMap",
    "ShortExactSequence",
    "Pairing",
    "DualityReport",
    "trivial_module",
    "regular_module",
    "induced_module",
    "dual_module",
    "restrict_module",
    "diagonal_sequence",
    "augmentation_sequence",
    "cartier_pairing",
    "verify_duality",
    "equivariant_maps",
    "module_from_json",
    "module_to_json",
    "module_from_name",
]


class GModule:
    """A free Z/n-module of finite rank with a linear G-action.

    ``induced_from`` and ``cosets`` are set by :func:`induced_module`; the
    Shapiro map needs them.
    """

    def __init__(self, group: FiniteGroup, n: int, action, name: str = "M",
                 induced_from: Subgroup | None = None,
                 cosets: tuple[tuple[int, ...], ...] | None = None):
        if n < 1:
            raise ValueError(f"modulus must be >= 1, got {n}")
        act = np.array(action, dtype=np.int64) % n
        if act.ndim != 3 or act.shape[0] != group.size or act.shape[1] != act.shape[2]:
            raise ValueError(f"action must have shape ({group.size}, r, r), got {act.shape}")
        self.group = group
        self.n = n
        self.rank = act.shape[1]
        self.action = act
        self.name = name
        self.induced_from = induced_from
        self.cosets = cosets
        self._check()
        act.setflags(write=False)
        self._key = (group, n, act.tobytes(), act.shape,
                     induced_from.members if induced_from else None)

    def _check(self):
        G, A, n = self.group, self.action, self.n
        eye = np.eye(self.rank, dtype=np.int64) % n
        if not (A[G.identity] == eye).all():
            raise ValueError(f"{self.name}: identity does not act trivially")
        # action(g h) == action(g) action(h) for all pairs
        prods = np.einsum("gij,hjk->ghik", A, A) % n
        bad = np.argwhere((prods != A[G.cayley]).any(axis=(2, 3)))
        if bad.size:
            g, h = (int(x) for x in bad[0])
            raise ValueError(f"{self.name}: action is not a homomorphism at ({g}, {h})")

    def __hash__(self):
        return hash(self._key)

    def __eq__(self, other):
        return isinstance(other, GModule) and self._key == other._key

    def __repr__(self):
        return f"GModule({self.name!r}, group={self.group.name}, n={self.n}, rank={self.rank})"

    def act(self, g: int, v) -> np.ndarray:
        return (self.action[g] @ np.asarray(v, dtype=np.int64)) % self.n

    def is_trivial_on(self, members) -> bool:
        eye = np.eye(self.rank, dtype=np.int64) % self.n
        return all((self.action[g] == eye).all() for g in members)

    def fixed_vectors(self) -> np.ndarray:
        """Columns generating the invariants M^G."""
        eye = np.eye(self.rank, dtype=np.int64)
        stacked = np.concatenate([self.action[g] - eye for g in range(self.group.size)])
        return kernel_mod(stacked % self.n, self.n)


@dataclass
class ModuleMap:
    """A G-equivariant Z/n-linear map, ``matrix`` is target.rank x source.rank."""

    source: GModule
    target: GModule
    matrix: np.ndarray

    def __post_init__(self):
        S, T = self.source, self.target
        if S.group != T.group or S.n != T.n:
            raise ValueError("source and target must share group and modulus")
        n = S.n
        F = np.array(self.matrix, dtype=np.int64).reshape(T.rank, S.rank) % n
        self.matrix = F
        for g in range(S.group.size):
            if ((F @ S.action[g] - T.action[g] @ F) % n).any():
                raise ValueError(f"map {S.name} -> {T.name} is not equivariant at g={g}")

    def __call__(self, v) -> np.ndarray:
        return (self.matrix @ np.asarray(v, dtype=np.int64)) % self.source.n

    def compose(self, other: "ModuleMap") -> "ModuleMap":
        """``self o other``."""
        return ModuleMap(other.source, self.target, (self.matrix @ other.matrix) % self.source.n)


@dataclass
class ShortExactSequence:
    """``0 -> A --inj--> B --surj--> C -> 0``, exactness checked on construction."""

    inj: ModuleMap
    surj: ModuleMap

    def __post_init__(self):
        if self.inj.target != self.surj.source:
            raise ValueError("inj.target must equal surj.source")
        n = self.inj.source.n
        A, B, C = self.A, self.B, self.C
        if n == 1:
            return
        if kernel_mod(self.inj.matrix, n).any():
            raise ValueError("inj is not injective")
        s = snf_mod(self.surj.matrix, n, right=False)
        if s.rank != C.rank or any(d != 1 for d in s.diag):
            raise ValueError("surj is not surjective")
        if ((self.surj.matrix @ self.inj.matrix) % n).any():
            raise ValueError("surj o inj != 0")
        # |im inj| = n^rank(A) (inj injective, A free); |ker surj| = n^(rank B - rank C)
        if A.rank != B.rank - C.rank:
            raise ValueError("image of inj is smaller than the kernel of surj")

    @property
    def A(self) -> GModule:
        return self.inj.source

    @property
    def B(self) -> GModule:
        return self.inj.target

    @property
    def C(self) -> GModule:
        return self.surj.target


@dataclass
class Pairing:
    """A bilinear form ``<a, b> = a^T matrix b`` into Z/n with trivial action."""

    left: GModule
    right: GModule
    matrix: np.ndarray
    perfect: bool = False

    def __post_init__(self):
        L, R = self.left, self.right
        n = L.n
        P = np.array(self.matrix, dtype=np.int64).reshape(L.rank, R.rank) % n
        self.matrix = P
        for g in range(L.group.size):
            if ((L.action[g].T @ P @ R.action[g] - P) % n).any():
                raise ValueError(f"pairing is not G-invariant at g={g}")
        if self.perfect:
            s = snf_mod(P, n, right=False)
            if L.rank != R.rank or (n > 1 and (s.rank != L.rank or any(d != 1 for d in s.diag))):
                raise ValueError("pairing flagged perfect but its matrix is not invertible mod n")

    def __call__(self, a, b) -> int:
        return int(np.asarray(a) @ self.matrix @ np.asarray(b)) % self.left.n


# --------------------------------------------------------------------------
# constructors


def trivial_module(G: FiniteGroup, n: int, rank: int = 1, name: str | None = None) -> GModule:
    act = np.broadcast_to(np.eye(rank, dtype=np.int64), (G.size, rank, rank))
    return GModule(G, n, act, name=name or ("Z/%d" % n if rank == 1 else f"(Z/{n})^{rank}"))


def induced_module(G: FiniteGroup, sub: Subgroup, n: int, name: str | None = None) -> GModule:
    """Z/n-valued functions on left cosets xD, G permuting them by left translation.

    Cosets are ordered by their smallest element, so the trivial subgroup
    gives exactly :func:`regular_module`.
    """
    if sub.parent != G:
        raise ValueError("subgroup belongs to a different group")
    cosets = sorted({tuple(sorted(G.mul(x, d) for d in sub.members)) for x in range(G.size)})
    where = {g: i for i, c in enumerate(cosets) for g in c}
    k = len(cosets)
    act = np.zeros((G.size, k, k), dtype=np.int64)
    for g in range(G.size):
        for i, c in enumerate(cosets):
            act[g, where[G.mul(g, c[0])], i] = 1
    if name is None:
        name = f"Z/{n}[G]" if sub.order == 1 else f"Ind(Z/{n})"
    return GModule(G, n, act, name=name, induced_from=sub, cosets=tuple(cosets))


def regular_module(G: FiniteGroup, n: int) -> GModule:
    """(Z/n)[G] with ``g . e_h = e_{gh}``."""
    return induced_module(G, trivial_subgroup(G), n)


def dual_module(M: GModule) -> tuple[GModule, Pairing]:
    """Hom(M, Z/n) with the contragredient action, plus the evaluation pairing.

    ``action*(g) = action(g^-1)^T``, which is the inverse transpose.
    """
    G = M.group
    act = np.stack([M.action[G.inv(g)].T for g in range(G.size)])
    D = GModule(G, M.n, act, name=f"dual({M.name})")
    return D, Pairing(M, D, np.eye(M.rank, dtype=np.int64), perfect=True)


def restrict_module(M: GModule, sub: Subgroup) -> GModule:
    """M viewed as a module over the subgroup (indexed as ``sub.as_group``)."""
    return GModule(sub.as_group, M.n, M.action[list(sub.members)], name=M.name)


def diagonal_sequence(G: FiniteGroup, n: int) -> ShortExactSequence:
    """``0 -> Z/n -> (Z/n)[G] -> H -> 0`` with the all-ones inclusion."""
    B = regular_module(G, n)
    A = trivial_module(G, n)
    e, others = G.identity, G.non_identity
    k = len(others)
    pos = {g: i for i, g in enumerate(others)}
    # projection: image of e_g is the basis vector for g != 1; e_1 -> -sum
    P = np.zeros((k, G.size), dtype=np.int64)
    for g, i in pos.items():
        P[i, g] = 1
    P[:, e] = -1
    act = np.zeros((G.size, k, k), dtype=np.int64)
    for g in range(G.size):
        for h, i in pos.items():
            act[g, :, i] = P[:, G.mul(g, h)]
    H = GModule(G, n, act, name="H")
    inj = ModuleMap(A, B, np.ones((G.size, 1), dtype=np.int64))
    surj = ModuleMap(B, H, P)
    return ShortExactSequence(inj, surj)


def augmentation_sequence(G: FiniteGroup, n: int) -> ShortExactSequence:
    """``0 -> H' -> (Z/n)[G] -> Z/n -> 0`` with the augmentation ``e_g -> 1``."""
    B = regular_module(G, n)
    C = trivial_module(G, n)
    e, others = G.identity, G.non_identity
    k = len(others)
    pos = {g: i for i, g in enumerate(others)}
    # g . (e_h - e_1) = (e_gh - e_1) - (e_g - e_1)
    act = np.zeros((G.size, k, k), dtype=np.int64)
    for g in range(G.size):
        for h, i in pos.items():
            gh = G.mul(g, h)
            if gh != e:
                act[g, pos[gh], i] += 1
            if g != e:
                act[g, pos[g], i] -= 1
    Hp = GModule(G, n, act, name="H'")
    J = np.zeros((G.size, k), dtype=np.int64)
    for h, i in pos.items():
        J[h, i] = 1
        J[e, i] = -1
    inj = ModuleMap(Hp, B, J)
    surj = ModuleMap(B, C, np.ones((1, G.size), dtype=np.int64))
    return ShortExactSequence(inj, surj)


def cartier_pairing(G: FiniteGroup, n: int) -> Pairing:
    """H x H' -> Z/n descended from the standard pairing on (Z/n)[G].

    ``<image of e_h, e_k - e_1> = [h == k]`` for h, k != 1, so the matrix is
    the identity in the chosen bases.
    """
    H = diagonal_sequence(G, n).C
    Hp = augmentation_sequence(G, n).A
    return Pairing(H, Hp, np.eye(G.size - 1, dtype=np.int64), perfect=True)


# --------------------------------------------------------------------------
# equivariant maps and the duality check


def equivariant_maps(src: GModule, tgt: GModule, constraints=()) -> tuple[np.ndarray, np.ndarray] | None:
    """Solve for an equivariant ``F: src -> tgt`` subject to extra linear conditions.

    ``constraints`` is a sequence of ``(L, R, rhs)`` meaning ``L @ F @ R == rhs``.
    Returns ``(particular solution, kernel generators)`` with the unknowns
    laid out as ``F.ravel()``, or None when the system is inconsistent.
    """
    n, G = src.n, src.group
    s, t = src.rank, tgt.rank
    It, Is = np.eye(t, dtype=np.int64), np.eye(s, dtype=np.int64)
    rows, rhs = [], []
    for g in range(G.size):
        # F S_g - T_g F == 0, vec(F) row-major: vec(A F B) = (A kron B^T) vec(F)
        rows.append(np.kron(It, src.action[g].T) - np.kron(tgt.action[g], Is))
        rhs.append(np.zeros(t * s, dtype=np.int64))
    for L, R, b in constraints:
        L = np.asarray(L, dtype=np.int64)
        R = np.asarray(R, dtype=np.int64)
        rows.append(np.kron(L, R.T))
        rhs.append(np.asarray(b, dtype=np.int64).ravel())
    A = np.concatenate(rows) % n
    b = np.concatenate(rhs) % n
    x = solve_mod(A, b, n)
    if x is None:
        return None
    return x.reshape(t, s), kernel_mod(A, n)


@dataclass
class DualityReport:
    ok: bool
    group_name: str
    n: int
    isomorphisms: dict = field(default_factory=dict)
    failure: str | None = None

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "group": self.group_name,
            "n": self.n,
            "isomorphisms": {k: v.tolist() for k, v in self.isomorphisms.items()},
            "failure": self.failure,
        }


def _is_invertible(F, n) -> bool:
    if F.shape[0] != F.shape[1]:
        return False
    if n == 1 or F.shape[0] == 0:
        return True
    s = snf_mod(F, n, right=False)
    return s.rank == F.shape[0] and all(d == 1 for d in s.diag)


def verify_duality(G: FiniteGroup, n: int) -> DualityReport:
    """Identify the dual of the diagonal sequence with the augmentation sequence.

    Dualising ``0 -> Z/n -> (Z/n)[G] -> H -> 0`` gives
    ``0 -> H* -> (Z/n)[G]* -> (Z/n)* -> 0``.  The check solves for equivariant
    isomorphisms ``phi_A: H* -> H'``, ``phi_B: (Z/n)[G]* -> (Z/n)[G]`` and
    ``phi_C: (Z/n)* -> Z/n`` making both squares commute.  ``phi_C`` is fixed
    to the identity and ``phi_B`` is normalised by sending the dual basis
    vector of ``e_1`` to ``e_1``.
    """
    S = diagonal_sequence(G, n)
    T = augmentation_sequence(G, n)
    HD, _ = dual_module(S.C)
    BD, _ = dual_module(S.B)
    AD, _ = dual_module(S.A)
    inj_d = S.surj.matrix.T  # H* -> B*
    surj_d = S.inj.matrix.T  # B* -> A*
    report = DualityReport(False, G.name, n)

    phi_C = np.eye(1, dtype=np.int64)
    try:
        ModuleMap(AD, T.C, phi_C)
    except ValueError as exc:
        report.failure = f"identity A* -> Z/n is not equivariant: {exc}"
        return report
    # right square: aug o phi_B == phi_C o surj_d
    e1 = np.zeros((G.size, 1), dtype=np.int64)
    e1[G.identity, 0] = 1
    cons = [
        (T.surj.matrix, np.eye(G.size, dtype=np.int64), phi_C @ surj_d),
        (np.eye(G.size, dtype=np.int64), e1, e1),
    ]
    sol = equivariant_maps(BD, T.B, cons)
    if sol is None:
        report.failure = "no equivariant phi_B makes the right square commute"
        return report
    phi_B = sol[0]
    if not _is_invertible(phi_B, n):
        report.failure = "phi_B is not invertible"
        return report
    # left square: inj' o phi_A == phi_B o inj_d, solved column by column
    target = (phi_B @ inj_d) % n
    k = HD.rank
    phi_A = np.zeros((T.A.rank, k), dtype=np.int64)
    for j in range(k):
        x = solve_mod(T.inj.matrix, target[:, j], n) if T.A.rank else np.zeros(0, np.int64)
        if x is None:
            report.failure = f"left square: column {j} of phi_B o inj* is not in the image of inj'"
            return report
        phi_A[:, j] = x
    try:
        ModuleMap(HD, T.A, phi_A)
        ModuleMap(BD, T.B, phi_B)
    except ValueError as exc:
        report.failure = str(exc)
        return report
    if not _is_invertible(phi_A, n):
        report.failure = "phi_A is not invertible"
        return report
    if ((T.inj.matrix @ phi_A - phi_B @ inj_d) % n).any():
        report.failure = "left square does not commute"
        return report
    if ((T.surj.matrix @ phi_B - phi_C @ surj_d) % n).any():
        report.failure = "right square does not commute"
        return report
    report.ok = True
    report.isomorphisms = {"phi_A": phi_A, "phi_B": phi_B, "phi_C": phi_C}
    return report


# --------------------------------------------------------------------------
# JSON and named constructors


def module_to_json(M: GModule) -> dict:
    return {"n": M.n, "rank": M.rank,
            "action": {str(g): M.action[g].tolist() for g in range(M.group.size)}}


def module_from_json(G: FiniteGroup, data, name: str = "M") -> GModule:
    """Read ``{"n": int, "rank": int, "action": {element_index: [[...]]}}``."""
    if isinstance(data, str):
        data = json.loads(data)
    n, r = int(data["n"]), int(data["rank"])
    act = np.zeros((G.size, r, r), dtype=np.int64)
    given = {int(k): v for k, v in data["action"].items()}
    for g in range(G.size):
        if g not in given:
            raise ValueError(f"action of element {g} missing")
        act[g] = np.array(given[g], dtype=np.int64).reshape(r, r)
    return GModule(G, n, act, name=name)


def module_from_name(G: FiniteGroup, text: str, n: int) -> GModule:
    """Named constructors: ``trivial``, ``regular``, ``induced:g1,g2,...``
    (the subgroup generated by those element indices), ``H``, ``Hprime``,
    ``dual:<name>``.
    """
    if text == "trivial":
        return trivial_module(G, n)
    if text == "regular":
        return regular_module(G, n)
    if text in ("H",):
        return diagonal_sequence(G, n).C
    if text in ("Hprime", "H'"):
        return augmentation_sequence(G, n).A
    if text.startswith("induced:"):
        gens = [int(x) for x in text.split(":", 1)[1].split(",") if x.strip()]
        sub = generated_subgroup(G, gens) if gens else trivial_subgroup(G)
        return induced_module(G, sub, n)
    if text.startswith("dual:"):
        return dual_module(module_from_name(G, text.split(":", 1)[1], n))[0]
    raise ValueError(f"unknown module name {text!r}")
