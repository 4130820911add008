"""Finite groups as validated Cayley tables.

Elements are the indices ``0..size-1``; ``cayley[a, b]`` is the index of
``a*b``.  Nothing here assumes the identity is index 0.
"""
from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass
from functools import cached_property, reduce
from math import gcd, lcm

import numpy as np

__all__ = [
    "GroupAxiomError",
    "FiniteGroup",
    "Subgroup",
    "QuotientMap",
    "build_group",
    "group_from_json",
    "group_to_json",
    "cyclic_subgroups",
    "normal_subgroups",
    "trivial_subgroup",
    "whole_group",
    "ALIASES",
    "generated_subgroup",
    "quotient",
    "catalog",
    "get_group",
    "cyclic_product",
    "dihedral",
    "dicyclic",
    "permutation_group",
]


class GroupAxiomError(ValueError):
    """A Cayley table violates a group axiom.

    ``axiom`` names the violated axiom and ``witness`` holds the offending
    elements.
    """

    def __init__(self, axiom: str, witness: tuple, message: str):
        super().__init__(f"{axiom}: {message} (witness {witness})")
        self.axiom = axiom
        self.witness = witness


class FiniteGroup:
    """A finite group given by its multiplication table.

    Construct through :func:`build_group`, which validates the axioms.
    Instances are immutable, hashable, and compare by table.
    """

    def __init__(self, cayley: np.ndarray, identity: int, inverses: np.ndarray,
                 name: str = "G", labels: list[str] | None = None):
        self.cayley = cayley
        self.identity = identity
        self.inverses = inverses
        self.name = name
        self.labels = labels or [str(i) for i in range(len(cayley))]
        cayley.setflags(write=False)
        inverses.setflags(write=False)
        self._key = cayley.tobytes() + bytes(str(cayley.shape), "ascii")

    @property
    def size(self) -> int:
        return len(self.cayley)

    def __len__(self) -> int:
        return self.size

    def __hash__(self):
        return hash(self._key)

    def __eq__(self, other):
        return isinstance(other, FiniteGroup) and self._key == other._key

    def __repr__(self):
        return f"FiniteGroup({self.name!r}, size={self.size})"

    def mul(self, a: int, b: int) -> int:
        return int(self.cayley[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverses[a])

    def power(self, a: int, k: int) -> int:
        out = self.identity
        for _ in range(k % self.element_orders[a]):
            out = self.mul(out, a)
        return out

    def product(self, elements) -> int:
        return reduce(self.mul, elements, self.identity)

    @cached_property
    def element_orders(self) -> list[int]:
        orders = []
        for g in range(self.size):
            k, x = 1, g
            while x != self.identity:
                x = self.mul(x, g)
                k += 1
            orders.append(k)
        return orders

    @cached_property
    def exponent(self) -> int:
        return reduce(lcm, self.element_orders, 1)

    @cached_property
    def is_abelian(self) -> bool:
        return bool((self.cayley == self.cayley.T).all())

    @property
    def non_identity(self) -> list[int]:
        return [g for g in range(self.size) if g != self.identity]


def build_group(cayley, name: str = "G", labels: list[str] | None = None) -> FiniteGroup:
    """Validate a Cayley table and return the group it defines.

    Raises :class:`GroupAxiomError` naming the axiom (``closure``,
    ``identity``, ``inverse``, ``associativity``) and a witness.
    """
    T = np.array(cayley, dtype=np.int64)
    if T.ndim != 2 or T.shape[0] != T.shape[1] or T.shape[0] == 0:
        raise GroupAxiomError("closure", (), f"table must be square and nonempty, got shape {T.shape}")
    k = T.shape[0]
    bad = np.argwhere((T < 0) | (T >= k))
    if bad.size:
        a, b = (int(x) for x in bad[0])
        raise GroupAxiomError("closure", (a, b), f"product {a}*{b} = {T[a, b]} is not an element")

    ar = np.arange(k)
    ids = [e for e in range(k) if (T[e] == ar).all() and (T[:, e] == ar).all()]
    if not ids:
        raise GroupAxiomError("identity", (), "no two-sided identity element")
    e = ids[0]

    inverses = np.empty(k, dtype=np.int64)
    for a in range(k):
        cands = np.flatnonzero((T[a] == e) & (T[:, a] == e))
        if cands.size == 0:
            raise GroupAxiomError("inverse", (a,), f"element {a} has no two-sided inverse")
        inverses[a] = cands[0]

    # (ab)c == a(bc) over all triples
    lhs = T[T[:, :, None], ar[None, None, :]]
    rhs = T[ar[:, None, None], T[None, :, :]]
    bad = np.argwhere(lhs != rhs)
    if bad.size:
        a, b, c = (int(x) for x in bad[0])
        raise GroupAxiomError("associativity", (a, b, c), f"({a}*{b})*{c} != {a}*({b}*{c})")
    return FiniteGroup(T, e, inverses, name, labels)


def group_from_json(data) -> FiniteGroup:
    """Read ``{"name": ..., "size": k, "cayley": [[...]]}`` (dict or JSON text)."""
    if isinstance(data, str):
        data = json.loads(data)
    G = build_group(data["cayley"], name=data.get("name", "G"), labels=data.get("labels"))
    if "size" in data and int(data["size"]) != G.size:
        raise ValueError(f"declared size {data['size']} does not match table size {G.size}")
    return G


def group_to_json(G: FiniteGroup) -> dict:
    return {"name": G.name, "size": G.size, "cayley": G.cayley.tolist()}


# --------------------------------------------------------------------------
# subgroups and quotients


@dataclass(frozen=True)
class Subgroup:
    parent: FiniteGroup
    members: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(sorted(set(int(m) for m in self.members))))
        G, mem = self.parent, set(self.members)
        if G.identity not in mem:
            raise ValueError("subgroup must contain the identity")
        for a in self.members:
            if G.inv(a) not in mem:
                raise ValueError(f"subgroup not closed under inverse at {a}")
            for b in self.members:
                if G.mul(a, b) not in mem:
                    raise ValueError(f"subgroup not closed under product at ({a}, {b})")

    @property
    def order(self) -> int:
        return len(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, g) -> bool:
        return g in self.members

    @cached_property
    def as_group(self) -> FiniteGroup:
        """The subgroup as a group in its own right; index i is ``members[i]``."""
        pos = {m: i for i, m in enumerate(self.members)}
        table = [[pos[self.parent.mul(a, b)] for b in self.members] for a in self.members]
        labels = [self.parent.labels[m] for m in self.members]
        return build_group(table, name=f"{self.parent.name}<{','.join(map(str, self.members))}>",
                           labels=labels)

    def is_normal(self) -> bool:
        return self.conjugation_witness() is None

    def conjugation_witness(self) -> tuple[int, int] | None:
        """``(g, h)`` with ``g h g^-1`` outside the subgroup, or None."""
        G = self.parent
        for g in range(G.size):
            for h in self.members:
                if G.mul(G.mul(g, h), G.inv(g)) not in self.members:
                    return g, h
        return None


def generated_subgroup(G: FiniteGroup, gens) -> Subgroup:
    members = {G.identity}
    frontier = list(members)
    gens = [int(g) for g in gens]
    while frontier:
        new = []
        for a in frontier:
            for g in gens:
                b = G.mul(a, g)
                if b not in members:
                    members.add(b)
                    new.append(b)
        frontier = new
    return Subgroup(G, tuple(members))


def trivial_subgroup(G: FiniteGroup) -> Subgroup:
    return Subgroup(G, (G.identity,))


def whole_group(G: FiniteGroup) -> Subgroup:
    return Subgroup(G, tuple(range(G.size)))


def cyclic_subgroups(G: FiniteGroup) -> list[Subgroup]:
    """The distinct subgroups <g>, g in G, sorted by order then members."""
    seen = {}
    for g in range(G.size):
        mem = [G.identity]
        x = g
        while x != G.identity:
            mem.append(x)
            x = G.mul(x, g)
        key = tuple(sorted(mem))
        seen.setdefault(key, None)
    return [Subgroup(G, m) for m in sorted(seen, key=lambda m: (len(m), m))]


def _all_subgroups(G: FiniteGroup) -> list[Subgroup]:
    """Every subgroup, as joins of cyclic ones, sorted by order then members."""
    found = {H.members for H in cyclic_subgroups(G)}
    frontier = set(found)
    cyclic = list(found)
    while frontier:
        new = set()
        for a in frontier:
            for c in cyclic:
                if set(c) <= set(a):
                    continue
                j = generated_subgroup(G, a + c).members
                if j not in found:
                    new.add(j)
        found |= new
        frontier = new
    return [Subgroup(G, m) for m in sorted(found, key=lambda m: (len(m), m))]


def normal_subgroups(G: FiniteGroup) -> list[Subgroup]:
    return [H for H in _all_subgroups(G) if H.is_normal()]


@dataclass(frozen=True)
class QuotientMap:
    source: FiniteGroup
    normal_subgroup: Subgroup
    target: FiniteGroup
    projection: tuple[int, ...]
    cosets: tuple[tuple[int, ...], ...]


def quotient(G: FiniteGroup, N: Subgroup) -> QuotientMap:
    """The projection G -> G/N.  Cosets are ordered by smallest member."""
    if N.parent != G:
        raise ValueError("subgroup belongs to a different group")
    w = N.conjugation_witness()
    if w is not None:
        g, h = w
        raise ValueError(f"subgroup is not normal: {g}*{h}*{g}^-1 = "
                         f"{G.mul(G.mul(g, h), G.inv(g))} is outside it")
    cosets = sorted({tuple(sorted(G.mul(g, h) for h in N.members)) for g in range(G.size)})
    proj = [0] * G.size
    for i, c in enumerate(cosets):
        for g in c:
            proj[g] = i
    table = [[proj[G.mul(a[0], b[0])] for b in cosets] for a in cosets]
    labels = ["{" + ",".join(G.labels[g] for g in c) + "}" for c in cosets]
    target = build_group(table, name=f"{G.name}/N", labels=labels)
    return QuotientMap(G, N, target, tuple(proj), tuple(cosets))


# --------------------------------------------------------------------------
# catalog


def cyclic_product(orders, name: str | None = None) -> FiniteGroup:
    """Z/o_1 x ... x Z/o_k with componentwise addition, lexicographic indexing."""
    orders = [int(o) for o in orders] or [1]
    elems = list(itertools.product(*(range(o) for o in orders)))
    pos = {e: i for i, e in enumerate(elems)}
    table = [[pos[tuple((x + y) % o for x, y, o in zip(a, b, orders))] for b in elems] for a in elems]
    name = name or "x".join(f"C{o}" for o in orders)
    return build_group(table, name=name, labels=["(" + ",".join(map(str, e)) + ")" for e in elems])


def dihedral(k: int, name: str | None = None) -> FiniteGroup:
    """Symmetries of the k-gon, order 2k; index ``i + k*j`` is r^i s^j."""
    elems = [(i, j) for j in range(2) for i in range(k)]
    pos = {e: t for t, e in enumerate(elems)}

    def mul(x, y):
        (a, b), (c, d) = x, y
        return ((a + (-1) ** b * c) % k, (b + d) % 2)

    table = [[pos[mul(x, y)] for y in elems] for x in elems]
    labels = [("r^%d" % i if i else "1") + ("s" if j else "") for i, j in elems]
    return build_group(table, name=name or f"D{k}", labels=labels)


def dicyclic(m: int, name: str | None = None) -> FiniteGroup:
    """<a, x | a^2m = 1, x^2 = a^m, x a x^-1 = a^-1>, order 4m (Q8 is m = 2)."""
    k = 2 * m
    elems = [(i, j) for j in range(2) for i in range(k)]
    pos = {e: t for t, e in enumerate(elems)}

    def mul(x, y):
        (a, b), (c, d) = x, y
        e = a + (-1) ** b * c + (m if b and d else 0)
        return (e % k, (b + d) % 2)

    table = [[pos[mul(x, y)] for y in elems] for x in elems]
    labels = [("a^%d" % i if i else "1") + ("x" if j else "") for i, j in elems]
    return build_group(table, name=name or f"Dic{m}", labels=labels)


def permutation_group(perms, name: str) -> FiniteGroup:
    """Group of permutations (tuples) under composition ``(p*q)(i) = p(q(i))``."""
    perms = sorted(tuple(p) for p in perms)
    pos = {p: i for i, p in enumerate(perms)}
    table = [[pos[tuple(p[q[i]] for i in range(len(q)))] for q in perms] for p in perms]
    return build_group(table, name=name, labels=["".join(map(str, p)) for p in perms])


def _abelian_types(max_order: int):
    """Invariant-factor chains d_1 | ... | d_k with product <= max_order."""
    out = []

    # build chains in decreasing divisibility: d_k, d_{k-1} | d_k, ...
    def rec_desc(chain, prod_):
        out.append(tuple(reversed(chain)))
        for d in range(2, max_order // prod_ + 1):
            if chain and chain[-1] % d:
                continue
            rec_desc(chain + [d], prod_ * d)

    rec_desc([], 1)
    return sorted(set(out), key=lambda c: (int(np.prod(c)) if c else 1, len(c), c))


def _sign(p) -> int:
    s, seen = 1, set()
    for i in range(len(p)):
        if i in seen:
            continue
        j, L = i, 0
        while j not in seen:
            seen.add(j)
            j = p[j]
            L += 1
        s *= (-1) ** (L - 1)
    return s


def catalog(max_order: int) -> dict[str, FiniteGroup]:
    """Named groups of order <= max_order for verification sweeps.

    Every abelian group (as a product of cyclic groups named by invariant
    factors, e.g. ``C2xC4``), the dihedral groups D3 (named ``S3``) to D6,
    Q8, Dic3, A4, and S4 when ``max_order >= 24``.
    """
    if max_order < 1:
        raise ValueError("max_order must be >= 1")
    out: dict[str, FiniteGroup] = {}
    for chain in _abelian_types(max_order):
        if not chain:
            out["C1"] = cyclic_product([1], name="C1")
        else:
            name = "x".join(f"C{d}" for d in chain)
            out[name] = cyclic_product(chain, name=name)
    nonabelian = [
        (6, "S3", lambda: dihedral(3, "S3")),
        (8, "D4", lambda: dihedral(4, "D4")),
        (8, "Q8", lambda: dicyclic(2, "Q8")),
        (10, "D5", lambda: dihedral(5, "D5")),
        (12, "D6", lambda: dihedral(6, "D6")),
        (12, "Dic3", lambda: dicyclic(3, "Dic3")),
        (12, "A4", lambda: permutation_group(
            [p for p in itertools.permutations(range(4)) if _sign(p) == 1], "A4")),
        (24, "S4", lambda: permutation_group(itertools.permutations(range(4)), "S4")),
    ]
    for order, name, make in nonabelian:
        if order <= max_order:
            out[name] = make()
    return dict(sorted(out.items(), key=lambda kv: (kv[1].size, not kv[1].is_abelian, kv[0])))


ALIASES = {"V4": "C2xC2", "D3": "S3", "Q4": "Q8", "1": "C1", "trivial": "C1"}


def get_group(name: str) -> FiniteGroup:
    """Look up a catalog group by name (aliases such as ``V4`` accepted)."""
    key = ALIASES.get(name, name)
    if re.fullmatch(r"C\d+(?:xC\d+)*", key):
        return cyclic_product([int(x) for x in re.findall(r"\d+", key)], name=key)
    m = re.fullmatch(r"D(\d+)", key)
    if m:
        return dihedral(int(m.group(1)), name=key)
    m = re.fullmatch(r"Dic(\d+)", key)
    if m:
        return dicyclic(int(m.group(1)), name=key)
    cat = catalog(24)
    if key not in cat:
        raise KeyError(f"unknown group {name!r}; known: {', '.join(cat)}")
    return cat[key]
