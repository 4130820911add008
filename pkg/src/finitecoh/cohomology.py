"""Cohomology of finite groups with coefficients in free Z/n-modules.

Cochains are inhomogeneous: a degree-r cochain is a table indexed by
r-tuples of group elements, stored as an array of shape
``(|G|**r, rank)`` whose row ``sum(g_i * |G|**(r-1-i))`` holds the value
at ``(g_1, ..., g_r)``.

Sign conventions are fixed::

    (dc)(g_1..g_{r+1}) = g_1 c(g_2..g_{r+1})
                         + sum_{i=1..r} (-1)^i c(.., g_i g_{i+1}, ..)
                         + (-1)^{r+1} c(g_1..g_r)

    (x u y)(g_1..g_{p+q}) = < x(g_1..g_p), (g_1...g_p) . y(g_{p+1}..g_{p+q}) >

Group presentations are computed from normalized cochains (those vanishing
whenever an argument is the identity), which shrinks every differential by
a factor ``(|G| / (|G| - 1))**r``.  Public cochains are always full tables;
cocycles that are not normalized are corrected by a coboundary before their
coordinates are read off.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .exactlinalg import (
    FinAbGroup,
    Subquotient,
    element_order,
    hom_kernel,
    kernel_mod,
    solve_mod,
    subgroup_of,
    subquotient,
)
from .gmodules import GModule, ModuleMap, ShortExactSequence, Pairing, restrict_module, trivial_module
from .groups import FiniteGroup, QuotientMap, Subgroup

__all__ = [
    "DEFAULT_RESOURCE_BOUND",
    "RESOURCE_BOUND_ENV",
    "ResourceBoundError",
    "NotACocycleError",
    "Cochain",
    "CohomologyGroup",
    "CohomologyClass",
    "coboundary",
    "coboundary_matrix",
    "cohomology_group",
    "normalize_cocycle",
    "restrict",
    "inflate",
    "quotient_module",
    "pushforward",
    "connecting",
    "connecting_cocycle",
    "cup",
    "shapiro",
    "shapiro_map",
    "shapiro_restriction_check",
    "map_matrix",
    "long_exact_sequence",
    "LongExactSequence",
    "ExactnessCheck",
    "InflationRestrictionCheck",
    "inflation_restriction_check",
    "CupConnectingCheck",
    "cup_connecting_signs",
]

DEFAULT_RESOURCE_BOUND = 2_000_000
RESOURCE_BOUND_ENV = "FINITECOH_RESOURCE_BOUND"


class ResourceBoundError(RuntimeError):
    """A cochain space is larger than the configured bound."""


class NotACocycleError(ValueError):
    pass


def resource_bound(override: int | None = None) -> int:
    if override is not None:
        return int(override)
    return int(os.environ.get(RESOURCE_BOUND_ENV, DEFAULT_RESOURCE_BOUND))


def _guard(G: FiniteGroup, M: GModule, r: int, bound: int | None):
    size = G.size ** (r + 1) * M.rank
    limit = resource_bound(bound)
    if size > limit:
        raise ResourceBoundError(
            f"|G|^{r + 1} * rank = {G.size}^{r + 1} * {M.rank} = {size} exceeds the "
            f"resource bound {limit} (group {G.name}, module {M.name}, degree {r})")


# --------------------------------------------------------------------------
# cochains


def _tuples(k: int, r: int) -> np.ndarray:
    """All r-tuples over range(k) in lexicographic order, shape (k**r, r)."""
    if r == 0:
        return np.zeros((1, 0), dtype=np.int64)
    return np.indices((k,) * r, dtype=np.int64).reshape(r, -1).T


def _flat(T: np.ndarray, k: int) -> np.ndarray:
    idx = np.zeros(T.shape[0], dtype=np.int64)
    for i in range(T.shape[1]):
        idx = idx * k + T[:, i]
    return idx


@lru_cache(maxsize=64)
def _tuple_products(G: FiniteGroup, r: int) -> np.ndarray:
    T = _tuples(G.size, r)
    out = np.full(T.shape[0], G.identity, dtype=np.int64)
    for i in range(r):
        out = G.cayley[out, T[:, i]]
    return out


@lru_cache(maxsize=64)
def _normalized_index(G: FiniteGroup, r: int) -> np.ndarray:
    """Full-table rows of the tuples avoiding the identity, in normalized order."""
    elems = np.array(G.non_identity, dtype=np.int64)
    return _flat(elems[_tuples(len(elems), r)], G.size)


class Cochain:
    """An inhomogeneous cochain of degree ``degree`` with values in ``module``."""

    def __init__(self, module: GModule, degree: int, table):
        G = module.group
        t = np.array(table, dtype=np.int64) % module.n
        expected = (G.size ** degree, module.rank)
        if t.size != expected[0] * expected[1]:
            raise ValueError(f"cochain table has {t.size} entries, expected {expected}")
        self.module = module
        self.degree = degree
        self.table = t.reshape(expected)

    @property
    def group(self) -> FiniteGroup:
        return self.module.group

    @classmethod
    def zero(cls, module: GModule, degree: int) -> "Cochain":
        return cls(module, degree, np.zeros((module.group.size ** degree, module.rank), np.int64))

    @classmethod
    def from_function(cls, module: GModule, degree: int, f) -> "Cochain":
        T = _tuples(module.group.size, degree)
        return cls(module, degree, [np.asarray(f(*map(int, t))) for t in T])

    def __call__(self, *elements) -> np.ndarray:
        if len(elements) != self.degree:
            raise TypeError(f"expected {self.degree} arguments")
        k, i = self.group.size, 0
        for g in elements:
            i = i * k + int(g)
        return self.table[i]

    def _like(self, table) -> "Cochain":
        return Cochain(self.module, self.degree, table)

    def _check(self, other):
        if not isinstance(other, Cochain) or other.module != self.module or other.degree != self.degree:
            raise ValueError("cochains live in different groups")

    def __add__(self, other):
        self._check(other)
        return self._like(self.table + other.table)

    def __sub__(self, other):
        self._check(other)
        return self._like(self.table - other.table)

    def __neg__(self):
        return self._like(-self.table)

    def __mul__(self, k: int):
        return self._like(self.table * int(k))

    __rmul__ = __mul__

    def __eq__(self, other):
        return (isinstance(other, Cochain) and other.module == self.module
                and other.degree == self.degree and (other.table == self.table).all())

    __hash__ = None

    def is_zero(self) -> bool:
        return not self.table.any()

    def is_cocycle(self) -> bool:
        return coboundary(self).is_zero()

    def is_normalized(self) -> bool:
        if self.degree == 0:
            return True
        T = _tuples(self.group.size, self.degree)
        degenerate = (T == self.group.identity).any(axis=1)
        return not self.table[degenerate].any()

    def __repr__(self):
        return f"Cochain(degree={self.degree}, module={self.module.name}, group={self.group.name})"


def coboundary(c: Cochain) -> Cochain:
    """The inhomogeneous coboundary of ``c`` (degree + 1)."""
    M, G, r = c.module, c.group, c.degree
    k = G.size
    T = _tuples(k, r + 1)
    tab = c.table
    out = np.einsum("tij,tj->ti", M.action[T[:, 0]], tab[_flat(T[:, 1:], k)])
    for i in range(1, r + 1):
        merged = G.cayley[T[:, i - 1], T[:, i]][:, None]
        cols = np.concatenate([T[:, :i - 1], merged, T[:, i + 1:]], axis=1)
        out += (-1) ** i * tab[_flat(cols, k)]
    out += (-1) ** (r + 1) * tab[_flat(T[:, :r], k)]
    return Cochain(M, r + 1, out)


def coboundary_matrix(G: FiniteGroup, M: GModule, r: int, normalized: bool = True) -> np.ndarray:
    """Matrix of ``d: C^r -> C^{r+1}`` on (normalized) cochain vectors.

    Vectors are the row-major flattening of cochain tables restricted to the
    normalized tuples (or all tuples when ``normalized`` is False).
    """
    elems = np.array(G.non_identity if normalized else range(G.size), dtype=np.int64)
    ke, rank = len(elems), M.rank
    pos = np.full(G.size, -1, dtype=np.int64)
    pos[elems] = np.arange(ke)
    T = elems[_tuples(ke, r + 1)]
    R, C = T.shape[0], ke ** r
    D = np.zeros((R * rank, C * rank), dtype=np.int64)
    if R == 0 or rank == 0:
        return D
    ar = np.arange(rank)
    rows = np.arange(R)

    def index(cols):
        return _flat(pos[cols], ke) if cols.shape[1] else np.zeros(cols.shape[0], np.int64)

    # g_1 . c(g_2, ..)
    ci = index(T[:, 1:])
    D[(rows * rank)[:, None, None] + ar[None, :, None],
      (ci * rank)[:, None, None] + ar[None, None, :]] += M.action[T[:, 0]]

    def add_identity(row_sel, col_idx, sign):
        rr = (row_sel * rank)[:, None] + ar[None, :]
        cc = (col_idx * rank)[:, None] + ar[None, :]
        D[rr, cc] += sign

    for i in range(1, r + 1):
        merged = G.cayley[T[:, i - 1], T[:, i]]
        ok = pos[merged] >= 0
        cols = np.concatenate([T[:, :i - 1], merged[:, None], T[:, i + 1:]], axis=1)[ok]
        add_identity(rows[ok], index(cols), (-1) ** i)
    add_identity(rows, index(T[:, :r]), (-1) ** (r + 1))
    return D % M.n


def normalize_cocycle(z: Cochain, bound: int | None = None) -> Cochain:
    """A normalized cocycle cohomologous to ``z``."""
    if z.degree == 0 or z.is_normalized():
        return z
    G, M, r = z.group, z.module, z.degree
    _guard(G, M, r, bound)
    D = coboundary_matrix(G, M, r - 1, normalized=False)
    T = _tuples(G.size, r)
    degenerate = np.repeat((T == G.identity).any(axis=1), M.rank)
    c = solve_mod(D[degenerate], z.table.ravel()[degenerate], M.n)
    if c is None:  # pragma: no cover - the normalized complex is a deformation retract
        raise ArithmeticError("no normalizing coboundary found")
    return z - coboundary(Cochain(M, r - 1, c))


# --------------------------------------------------------------------------
# cohomology groups and classes


class CohomologyGroup:
    """H^r(G, M) as an explicit finite abelian group.

    ``presentation`` gives the invariant factors, ``generators[i]`` is a
    (normalized) cocycle representing the i-th basis element, and
    :meth:`coordinates` reads off the class of any cocycle.
    """

    def __init__(self, group: FiniteGroup, module: GModule, degree: int, sq: Subquotient):
        self.group = group
        self.module = module
        self.degree = degree
        self._sq = sq
        self._norm = _normalized_index(group, degree)
        self.presentation: FinAbGroup = sq.group
        self.generators = [self._cochain(sq.basis[:, i]) for i in range(sq.basis.shape[1])]

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        return self.presentation.invariant_factors

    @property
    def order(self) -> int:
        return self.presentation.order

    def _cochain(self, vec) -> Cochain:
        M = self.module
        tab = np.zeros((self.group.size ** self.degree, M.rank), dtype=np.int64)
        tab[self._norm] = np.asarray(vec, dtype=np.int64).reshape(len(self._norm), M.rank)
        return Cochain(M, self.degree, tab)

    def normalized_vector(self, z: Cochain) -> np.ndarray:
        if z.module != self.module or z.degree != self.degree:
            raise ValueError(f"cochain does not belong to H^{self.degree}({self.group.name}, {self.module.name})")
        if not z.is_cocycle():
            raise NotACocycleError("cochain is not a cocycle")
        z = normalize_cocycle(z)
        return z.table[self._norm].ravel()

    def coordinates(self, z: Cochain) -> tuple[int, ...]:
        return self._sq.coords(self.normalized_vector(z))

    def class_of(self, z: Cochain) -> "CohomologyClass":
        return CohomologyClass(self, self.coordinates(z))

    def is_coboundary(self, z: Cochain) -> bool:
        return not any(self.coordinates(z))

    def element(self, coords) -> "CohomologyClass":
        return CohomologyClass(self, coords)

    def zero(self) -> "CohomologyClass":
        return CohomologyClass(self, (0,) * len(self.invariant_factors))

    def gens(self) -> list["CohomologyClass"]:
        k = len(self.invariant_factors)
        return [CohomologyClass(self, tuple(int(i == j) for j in range(k))) for i in range(k)]

    def elements(self):
        import itertools

        for c in itertools.product(*(range(f) for f in self.invariant_factors)):
            yield CohomologyClass(self, c)

    def representative(self, coords) -> Cochain:
        return self._cochain(self._sq.combine(coords))

    def __eq__(self, other):
        return (isinstance(other, CohomologyGroup) and self.group == other.group
                and self.module == other.module and self.degree == other.degree)

    def __hash__(self):
        return hash((self.group, self.module, self.degree))

    def __repr__(self):
        return f"H^{self.degree}({self.group.name}, {self.module.name}) = {self.presentation}"

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "invariant_factors": list(self.invariant_factors),
            "generators": [g.table.tolist() for g in self.generators],
        }


@dataclass(frozen=True, eq=False)
class CohomologyClass:
    parent: CohomologyGroup
    coords: tuple[int, ...]

    def __post_init__(self):
        f = self.parent.invariant_factors
        c = tuple(int(x) for x in self.coords)
        if len(c) != len(f):
            raise ValueError(f"expected {len(f)} coordinates, got {len(c)}")
        object.__setattr__(self, "coords", tuple(x % d for x, d in zip(c, f)))

    def _check(self, other):
        if not isinstance(other, CohomologyClass) or other.parent != self.parent:
            raise ValueError("classes live in different cohomology groups")

    def __add__(self, other):
        self._check(other)
        return CohomologyClass(self.parent, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return CohomologyClass(self.parent, tuple(-a for a in self.coords))

    def __mul__(self, k: int):
        return CohomologyClass(self.parent, tuple(int(k) * a for a in self.coords))

    __rmul__ = __mul__

    def __eq__(self, other):
        return (isinstance(other, CohomologyClass) and other.parent == self.parent
                and other.coords == self.coords)

    def __hash__(self):
        return hash((self.parent, self.coords))

    @property
    def degree(self) -> int:
        return self.parent.degree

    @property
    def module(self) -> GModule:
        return self.parent.module

    @property
    def group(self) -> FiniteGroup:
        return self.parent.group

    def is_zero(self) -> bool:
        return not any(self.coords)

    @property
    def order(self) -> int:
        return element_order(self.coords, self.parent.invariant_factors)

    def representative(self) -> Cochain:
        return self.parent.representative(self.coords)

    def __repr__(self):
        return f"CohomologyClass({self.coords} in {self.parent!r})"


@lru_cache(maxsize=512)
def _cohomology_group(G: FiniteGroup, M: GModule, r: int) -> CohomologyGroup:
    n = M.n
    if r == 0:
        Z = kernel_mod(coboundary_matrix(G, M, 0), n)
        B = np.zeros((M.rank, 0), dtype=np.int64)
    else:
        Z = kernel_mod(coboundary_matrix(G, M, r), n)
        B = coboundary_matrix(G, M, r - 1)
    return CohomologyGroup(G, M, r, subquotient(Z, B, n))


def cohomology_group(G: FiniteGroup, M: GModule, r: int, bound: int | None = None) -> CohomologyGroup:
    """H^r(G, M); raises :class:`ResourceBoundError` when the cochains are too big."""
    if r < 0:
        raise ValueError("degree must be >= 0")
    if M.group != G:
        raise ValueError("module is over a different group")
    _guard(G, M, r, bound)
    return _cohomology_group(G, M, r)


def _cohomology_of(M: GModule, r: int) -> CohomologyGroup:
    return cohomology_group(M.group, M, r)


# --------------------------------------------------------------------------
# structural maps


def map_matrix(source: CohomologyGroup, fn, target: CohomologyGroup | None = None):
    """Coordinate matrix of a homomorphism given on classes.

    Column i holds the coordinates of ``fn(generator_i)``; returns
    ``(matrix, target_group)``.
    """
    cols = [fn(x) for x in source.gens()]
    if target is None:
        target = cols[0].parent if cols else fn(source.zero()).parent
    M = np.zeros((len(target.invariant_factors), len(cols)), dtype=np.int64)
    for i, y in enumerate(cols):
        M[:, i] = y.coords
    return M, target


def restrict(x: CohomologyClass, sub: Subgroup) -> CohomologyClass:
    """Restriction to a subgroup, landing in H^r(sub, M|sub) (``sub.as_group``)."""
    G = x.group
    if sub.parent != G:
        raise ValueError("subgroup belongs to a different group")
    r = x.degree
    mem = np.array(sub.members, dtype=np.int64)
    rows = _flat(mem[_tuples(len(mem), r)], G.size)
    Mres = restrict_module(x.module, sub)
    z = Cochain(Mres, r, x.representative().table[rows])
    return _cohomology_of(Mres, r).class_of(z)


def quotient_module(M: GModule, q: QuotientMap) -> GModule:
    """M as a module over G/N; requires N to act trivially."""
    if q.source != M.group:
        raise ValueError("quotient map is for a different group")
    if not M.is_trivial_on(q.normal_subgroup.members):
        raise ValueError("the normal subgroup acts non-trivially on the module")
    act = M.action[[c[0] for c in q.cosets]]
    return GModule(q.target, M.n, act, name=M.name)


def inflate(x: CohomologyClass, q: QuotientMap, M: GModule) -> CohomologyClass:
    """Inflation H^r(G/N, M) -> H^r(G, M) for a module on which N acts trivially."""
    Mbar = quotient_module(M, q)
    if x.module != Mbar:
        raise ValueError("class does not live in H^r(G/N, M)")
    G, r = q.source, x.degree
    proj = np.array(q.projection, dtype=np.int64)
    rows = _flat(proj[_tuples(G.size, r)], q.target.size)
    z = Cochain(M, r, x.representative().table[rows])
    return _cohomology_of(M, r).class_of(z)


def pushforward(f: ModuleMap, x: CohomologyClass) -> CohomologyClass:
    if x.module != f.source:
        raise ValueError("map source differs from the class's module")
    tab = x.representative().table @ f.matrix.T
    return _cohomology_of(f.target, x.degree).class_of(Cochain(f.target, x.degree, tab))


def default_section(S: ShortExactSequence) -> np.ndarray:
    """A Z/n-linear (not equivariant) right inverse of ``S.surj``."""
    n, C = S.A.n, S.C
    cols = []
    for j in range(C.rank):
        e = np.zeros(C.rank, dtype=np.int64)
        e[j] = 1
        x = solve_mod(S.surj.matrix, e, n)
        if x is None:
            raise ArithmeticError("surjection has no linear section")
        cols.append(x)
    return np.stack(cols, axis=1) if cols else np.zeros((S.B.rank, 0), dtype=np.int64)


def _left_inverse(S: ShortExactSequence) -> np.ndarray:
    n, A = S.A.n, S.A
    rows = []
    for j in range(A.rank):
        e = np.zeros(A.rank, dtype=np.int64)
        e[j] = 1
        x = solve_mod(S.inj.matrix.T, e, n)
        if x is None:
            raise ArithmeticError("injection has no linear retraction")
        rows.append(x)
    return np.stack(rows) if rows else np.zeros((0, S.B.rank), dtype=np.int64)


def connecting_cocycle(S: ShortExactSequence, z: Cochain, section=None) -> Cochain:
    """``inj^-1(d(s o z))`` for a C-valued cocycle ``z`` and a linear section ``s``."""
    if z.module != S.C:
        raise ValueError("cochain does not take values in the quotient module")
    n = S.A.n
    s = default_section(S) if section is None else np.asarray(section, dtype=np.int64)
    if ((S.surj.matrix @ s - np.eye(S.C.rank, dtype=np.int64)) % n).any():
        raise ValueError("section is not a right inverse of the surjection")
    lifted = coboundary(Cochain(S.B, z.degree, z.table @ s.T))
    w = lifted.table @ _left_inverse(S).T
    if ((w @ S.inj.matrix.T - lifted.table) % n).any():
        raise ArithmeticError("coboundary of the lift does not land in the submodule")
    return Cochain(S.A, z.degree + 1, w)


def connecting(S: ShortExactSequence, x: CohomologyClass, section=None) -> CohomologyClass:
    """The connecting map H^r(G, C) -> H^{r+1}(G, A)."""
    w = connecting_cocycle(S, x.representative(), section)
    return _cohomology_of(S.A, x.degree + 1).class_of(w)


def cup(x: CohomologyClass, y: CohomologyClass, pairing: Pairing) -> CohomologyClass:
    """Cup product into H^{p+q}(G, Z/n) through ``pairing``."""
    if pairing.left != x.module or pairing.right != y.module:
        raise ValueError("pairing does not match the classes' modules")
    G, n = x.group, x.module.n
    p, q = x.degree, y.degree
    X = x.representative().table
    Y = y.representative().table
    act = y.module.action[_tuple_products(G, p)]
    Yg = np.einsum("aij,bj->abi", act, Y) % n
    val = np.einsum("ai,ij,abj->ab", X, pairing.matrix, Yg) % n
    triv = trivial_module(G, n)
    return _cohomology_of(triv, p + q).class_of(Cochain(triv, p + q, val.reshape(-1, 1)))


def shapiro(x: CohomologyClass) -> CohomologyClass:
    """H^r(G, Ind_D^G Z/n) -> H^r(D, Z/n): restrict, then read the identity coset."""
    M = x.module
    sub = M.induced_from
    if sub is None:
        raise ValueError("module was not built by induced_module")
    G, r = x.group, x.degree
    i0 = next(i for i, c in enumerate(M.cosets) if G.identity in c)
    mem = np.array(sub.members, dtype=np.int64)
    rows = _flat(mem[_tuples(len(mem), r)], G.size)
    H = sub.as_group
    triv = trivial_module(H, M.n)
    z = Cochain(triv, r, x.representative().table[rows][:, i0:i0 + 1])
    return _cohomology_of(triv, r).class_of(z)


def _is_isomorphism(F, src: tuple, tgt: tuple, n: int) -> bool:
    if src != tgt:
        return False
    if hom_kernel(F, src, tgt, n).group.order != 1:
        return False
    return subgroup_of(F, tgt, n).group.order == FinAbGroup(tgt).order


def shapiro_map(G: FiniteGroup, sub: Subgroup, n: int, r: int):
    """Coordinate matrix of the Shapiro map and whether it is bijective.

    Returns ``(source, target, matrix, bijective)``.
    """
    from .gmodules import induced_module

    M = induced_module(G, sub, n)
    src = cohomology_group(G, M, r)
    tgt = cohomology_group(sub.as_group, trivial_module(sub.as_group, n), r)
    F, _ = map_matrix(src, shapiro, tgt)
    return src, tgt, F, _is_isomorphism(F, src.invariant_factors, tgt.invariant_factors, n)


def shapiro_restriction_check(G: FiniteGroup, sub: Subgroup, n: int, r: int,
                              bound: int | None = None) -> bool:
    """Whether Shapiro o j_* equals restriction to ``sub`` on H^r(G, Z/n).

    ``j`` is the diagonal inclusion of Z/n into the induced module.
    """
    from .gmodules import induced_module

    M = induced_module(G, sub, n)
    T = trivial_module(G, n)
    j = ModuleMap(T, M, np.ones((M.rank, 1), dtype=np.int64))
    H = cohomology_group(G, T, r, bound)
    cohomology_group(G, M, r, bound)
    return all(shapiro(pushforward(j, x)) == restrict(x, sub) for x in H.gens())


# --------------------------------------------------------------------------
# long exact sequences


@dataclass
class ExactnessCheck:
    node: str
    ok: bool
    image_order: int
    kernel_order: int
    composite_zero: bool

    def to_json(self) -> dict:
        return dict(self.__dict__)


@dataclass
class LongExactSequence:
    sequence: ShortExactSequence
    r_max: int
    groups: dict = field(default_factory=dict)
    maps: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)

    @property
    def exact(self) -> bool:
        return all(c.ok for c in self.checks)

    def to_json(self) -> dict:
        return {
            "r_max": self.r_max,
            "groups": {f"H^{r}({lab})": list(H.invariant_factors) for (lab, r), H in self.groups.items()},
            "checks": [c.to_json() for c in self.checks],
            "exact": self.exact,
        }


def _node_check(name, incoming, node: CohomologyGroup, outgoing, out_factors, n) -> ExactnessCheck:
    f = node.invariant_factors
    inc = np.zeros((len(f), 0), dtype=np.int64) if incoming is None else incoming
    comp = (outgoing @ inc) if inc.size and outgoing.size else np.zeros((len(out_factors), inc.shape[1]), np.int64)
    zero = all(not (comp[i] % d).any() for i, d in enumerate(out_factors))
    im = subgroup_of(inc, f, n).group.order
    ker = hom_kernel(outgoing, f, out_factors, n).group.order
    return ExactnessCheck(name, zero and im == ker, im, ker, zero)


def _connecting_kernel(S: ShortExactSequence, HC: CohomologyGroup, bound: int | None = None) -> Subquotient:
    """Kernel of the connecting map on HC without building H^{r+1}(G, A).

    A combination ``sum t_i x_i`` dies iff ``sum t_i w_i`` is a coboundary,
    where ``w_i`` are the connecting cocycles of the generators; that is the
    kernel of ``[W | d]`` projected onto the ``t`` coordinates.
    """
    G, A, r, n = HC.group, S.A, HC.degree, S.A.n
    _guard(G, A, r, bound)
    norm = _normalized_index(G, r + 1)
    W = []
    for z in HC.generators:
        w = normalize_cocycle(connecting_cocycle(S, z))
        W.append(w.table[norm].ravel())
    s = len(W)
    D = coboundary_matrix(G, A, r)
    Wm = np.stack(W, axis=1) if W else np.zeros((D.shape[0], 0), dtype=np.int64)
    K = kernel_mod(np.concatenate([Wm, D], axis=1), n)
    return subgroup_of(K[:s], HC.invariant_factors, n)


def long_exact_sequence(S: ShortExactSequence, r_max: int, bound: int | None = None) -> LongExactSequence:
    """Assemble the long exact sequence up to H^{r_max}(G, C) and check exactness.

    Exactness is checked at every H^r(A), H^r(B), H^r(C) with r <= r_max.  At
    the last node the kernel of the connecting map is computed directly, so
    H^{r_max+1}(G, A) is never built.
    """
    G, n = S.A.group, S.A.n
    les = LongExactSequence(S, r_max)
    for r in range(r_max + 1):
        for lab, M in (("A", S.A), ("B", S.B), ("C", S.C)):
            les.groups[(lab, r)] = cohomology_group(G, M, r, bound)
    for r in range(r_max + 1):
        HA, HB, HC = (les.groups[(lab, r)] for lab in "ABC")
        les.maps[("inj", r)] = map_matrix(HA, lambda x: pushforward(S.inj, x), HB)[0]
        les.maps[("surj", r)] = map_matrix(HB, lambda x: pushforward(S.surj, x), HC)[0]
        if r < r_max:
            les.maps[("delta", r)] = map_matrix(HC, lambda x: connecting(S, x), les.groups[("A", r + 1)])[0]

    for r in range(r_max + 1):
        HA, HB, HC = (les.groups[(lab, r)] for lab in "ABC")
        les.checks.append(_node_check(
            f"H^{r}(A)", les.maps.get(("delta", r - 1)), HA,
            les.maps[("inj", r)], HB.invariant_factors, n))
        les.checks.append(_node_check(
            f"H^{r}(B)", les.maps[("inj", r)], HB,
            les.maps[("surj", r)], HC.invariant_factors, n))
        if r < r_max:
            les.checks.append(_node_check(
                f"H^{r}(C)", les.maps[("surj", r)], HC,
                les.maps[("delta", r)], les.groups[("A", r + 1)].invariant_factors, n))
        else:
            ker = _connecting_kernel(S, HC, bound)
            P = les.maps[("surj", r)]
            inside = all(ker.contains(P[:, j]) for j in range(P.shape[1]))
            im = subgroup_of(P, HC.invariant_factors, n).group.order
            les.checks.append(ExactnessCheck(f"H^{r}(C)", inside and im == ker.group.order,
                                             im, ker.group.order, inside))
    return les


# --------------------------------------------------------------------------
# inflation-restriction and the cup/connecting relation


@dataclass
class InflationRestrictionCheck:
    normal_subgroup: tuple
    injective: bool
    image_order: int
    kernel_order: int
    composite_zero: bool

    @property
    def ok(self) -> bool:
        return self.injective and self.composite_zero and self.image_order == self.kernel_order

    def to_json(self) -> dict:
        return {**self.__dict__, "normal_subgroup": list(self.normal_subgroup), "ok": self.ok}


def inflation_restriction_check(q: QuotientMap, M: GModule, bound: int | None = None) -> InflationRestrictionCheck:
    """Exactness of ``0 -> H^1(G/N, M) -> H^1(G, M) -> H^1(N, M)``.

    ``M`` must be a G-module on which N acts trivially.
    """
    G, N, n = q.source, q.normal_subgroup, M.n
    Hq = cohomology_group(q.target, quotient_module(M, q), 1, bound)
    HG = cohomology_group(G, M, 1, bound)
    HN = cohomology_group(N.as_group, restrict_module(M, N), 1, bound)
    inf = map_matrix(Hq, lambda x: inflate(x, q, M), HG)[0]
    res = map_matrix(HG, lambda x: restrict(x, N), HN)[0]
    injective = hom_kernel(inf, Hq.invariant_factors, HG.invariant_factors, n).group.order == 1
    node = _node_check("H^1(G)", inf, HG, res, HN.invariant_factors, n)
    return InflationRestrictionCheck(N.members, injective, node.image_order,
                                     node.kernel_order, node.composite_zero)


@dataclass
class CupConnectingCheck:
    group_name: str
    n: int
    degree: int
    signs: tuple[int, ...]
    generators: int
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return bool(self.signs)

    def to_json(self) -> dict:
        return {"group_name": self.group_name, "n": self.n, "degree": self.degree,
                "signs": list(self.signs), "generators": self.generators,
                "failures": self.failures, "ok": self.ok}


def cup_connecting_signs(G: FiniteGroup, n: int, r: int, bound: int | None = None) -> CupConnectingCheck:
    """Signs e in {1, -1} with ``x cup d'(m) = e * m * d(x)`` for all x, m.

    x runs over the generators of H^r(G, H) and m over Z/n.  d is the
    connecting map of ``Z/n -> (Z/n)[G] -> H`` and d' the one of
    ``H' -> (Z/n)[G] -> Z/n``; the cup product uses the pairing of H with H'.
    Both sides live in H^{r+1}(G, Z/n).  When every class there has order
    at most 2 both signs fit and both are reported.
    """
    from .gmodules import augmentation_sequence, cartier_pairing, diagonal_sequence

    D = diagonal_sequence(G, n)
    Aug = augmentation_sequence(G, n)
    pairing = cartier_pairing(G, n)
    cohomology_group(G, D.A, r + 1, bound)
    HC = cohomology_group(G, D.C, r, bound)
    H0 = cohomology_group(G, Aug.C, 0, bound)
    dprime = [connecting(Aug, H0.class_of(Cochain(Aug.C, 0, [[m]]))) for m in range(n)]
    signs = {1, -1}
    failures = []
    for x in HC.gens():
        dx = connecting(D, x)
        for m in range(n):
            lhs = cup(x, dprime[m], pairing)
            fit = {e for e in (1, -1) if lhs == dx * (e * m)}
            if not fit:
                failures.append({"x": list(x.coords), "m": m, "cup": list(lhs.coords),
                                 "delta_x": list(dx.coords)})
            signs &= fit
    return CupConnectingCheck(G.name, n, r, tuple(sorted(signs, reverse=True)),
                              len(HC.invariant_factors), failures)
