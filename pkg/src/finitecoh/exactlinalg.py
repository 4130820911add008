"""Exact integer and Z/n linear algebra.

All decompositions follow the convention ``U @ A @ V == D`` (row operations
on the left, column operations on the right).

Two flavours live here:

* :func:`smith_normal_form` works over the integers with Python ints, so
  intermediate entries may grow without bound and never overflow.
* The ``*_mod`` routines work over Z/n on ``int64`` arrays that are reduced
  mod n after every step.  Entries stay below n, which keeps the large
  cochain differentials cheap.  ``n`` must be below 2**31.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd, prod
from typing import Sequence

import numpy as np

__all__ = [
    "SmithDecomposition",
    "ModSmith",
    "FinAbGroup",
    "Subquotient",
    "NotAMemberError",
    "smith_normal_form",
    "determinant",
    "snf_mod",
    "kernel_mod",
    "solve_mod",
    "subquotient",
    "hom_kernel",
    "subgroup_of",
    "element_order",
]

MAX_MODULUS = 2**31


class NotAMemberError(ValueError):
    """A vector does not lie in the submodule it was tested against."""


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, s, t)`` with ``s*a + t*b == g == gcd(a, b) >= 0``."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


# --------------------------------------------------------------------------
# integer Smith normal form


@dataclass(frozen=True)
class SmithDecomposition:
    """``U @ A @ V == D`` over the integers, ``U`` and ``V`` unimodular."""

    U: np.ndarray
    D: np.ndarray
    V: np.ndarray
    rank: int

    @property
    def diagonal(self) -> list[int]:
        return [int(self.D[i, i]) for i in range(self.rank)]


def _as_int_rows(A) -> tuple[list[list[int]], int]:
    arr = np.asarray(A, dtype=object)
    if arr.size == 0:
        shape = arr.shape if arr.ndim == 2 else (0, 0)
        return [[] for _ in range(shape[0])], shape[1]
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {arr.shape}")
    return [[int(x) for x in row] for row in arr], arr.shape[1]


def _eye(k: int) -> list[list[int]]:
    return [[int(i == j) for j in range(k)] for i in range(k)]


def smith_normal_form(A) -> SmithDecomposition:
    """Smith normal form of an integer matrix.

    Pivoting is deterministic: at every stage the nonzero entry of smallest
    absolute value is chosen, ties broken in row-major order.  The result
    satisfies ``U @ A @ V == D`` with ``d_1 | d_2 | ... | d_rank``, all
    positive.  Arrays in the result have ``dtype=object``.
    """
    D, k = _as_int_rows(A)
    m = len(D)
    U = _eye(m)
    V = _eye(k)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        # row[dst] += q * row[src]
        D[dst] = [a + q * b for a, b in zip(D[dst], D[src])]
        U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):
        for row in D:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]

    t = 0
    while t < min(m, k):
        best = None
        for i in range(t, m):
            for j in range(t, k):
                a = D[i][j]
                if a and (best is None or abs(a) < best[0]):
                    best = (abs(a), i, j)
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = D[t][t]
            dirty = False
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(i, t, -(D[i][t] // p))
                    dirty |= D[i][t] != 0
            for j in range(t + 1, k):
                if D[t][j]:
                    add_col(j, t, -(D[t][j] // p))
                    dirty |= D[t][j] != 0
            if dirty:
                # move the smallest remainder in row t / column t to the pivot
                cands = [(abs(D[i][t]), 0, i) for i in range(t + 1, m) if D[i][t]]
                cands += [(abs(D[t][j]), 1, j) for j in range(t + 1, k) if D[t][j]]
                _, kind, idx = min(cands)
                if kind == 0:
                    swap_rows(t, idx)
                else:
                    swap_cols(t, idx)
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, k) if D[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if D[t][t] < 0:
            D[t] = [-a for a in D[t]]
            U[t] = [-a for a in U[t]]
        t += 1

    def obj(rows, shape):
        out = np.empty(shape, dtype=object)
        for i, row in enumerate(rows):
            out[i, :] = row
        return out

    return SmithDecomposition(obj(U, (m, m)), obj(D, (m, k)), obj(V, (k, k)), t)


def determinant(A) -> int:
    """Exact determinant of a square integer matrix (fraction-free Bareiss)."""
    M, k = _as_int_rows(A)
    if len(M) != k:
        raise ValueError(f"expected a square matrix, got {len(M)}x{k}")
    sign, prev = 1, 1
    for t in range(k - 1):
        if M[t][t] == 0:
            swap = next((i for i in range(t + 1, k) if M[i][t]), None)
            if swap is None:
                return 0
            M[t], M[swap] = M[swap], M[t]
            sign = -sign
        for i in range(t + 1, k):
            for j in range(t + 1, k):
                M[i][j] = (M[i][j] * M[t][t] - M[i][t] * M[t][j]) // prev
        prev = M[t][t]
    return sign * M[k - 1][k - 1] if k else 1


# --------------------------------------------------------------------------
# Smith normal form over Z/n


@dataclass
class ModSmith:
    """``U @ A @ V == D (mod n)`` with ``U``, ``V`` invertible mod n.

    ``diag`` holds the nonzero diagonal entries; each is a proper divisor
    of n and they form a divisibility chain.  ``U``/``Uinv`` are only
    populated when left transforms were requested, ``V`` when right ones
    were.
    """

    n: int
    shape: tuple[int, int]
    diag: list[int]
    U: np.ndarray | None = None
    Uinv: np.ndarray | None = None
    V: np.ndarray | None = None

    @property
    def rank(self) -> int:
        return len(self.diag)


def _unit_to_divisor(p: int, n: int) -> int:
    """A unit ``u`` mod n with ``u * p == gcd(p, n) (mod n)``."""
    g = gcd(p, n)
    m = n // g
    u0 = pow(p // g, -1, m) if m > 1 else 1
    for k in range(g + 1):
        u = u0 + k * m
        if gcd(u, n) == 1:
            return u % n
    raise ArithmeticError(f"no unit found for p={p}, n={n}")  # pragma: no cover


def _echelon_rows(A: np.ndarray, n: int) -> np.ndarray:
    """At most one row per column spanning the same Z/n-module as ``A``'s rows.

    Only unimodular row operations are used, so the kernel and the invariant
    factors are those of ``A``.  Column operations on the tall matrix are
    avoided entirely.
    """
    A = A[A.any(axis=1)]
    # repeated rows are common in coboundary matrices; hashing beats sorting
    first = {}
    for i, row in enumerate(A):
        first.setdefault(row.tobytes(), i)
    A = A[sorted(first.values())]
    # sparse rows first: pivot ties then go to the row causing least fill-in
    A = A[np.argsort(np.count_nonzero(A, axis=1), kind="stable")]
    k = A.shape[1]
    r = 0
    for c in range(k):
        if r >= A.shape[0]:
            break
        col = A[r:, c]
        nz = np.flatnonzero(col)
        if nz.size == 0:
            continue
        gs = np.gcd(col[nz], n)
        cand = nz[gs == gs.min()]
        # Markowitz-style tie break: the sparsest candidate row
        i = r + int(cand[np.argmin(np.count_nonzero(A[r + cand, c:], axis=1))])
        if i != r:
            A[[r, i]] = A[[i, r]]
        p = int(A[r, c])
        if p != gcd(p, n):
            A[r, c:] = (A[r, c:] * _unit_to_divisor(p, n)) % n
        for j in (r + 1 + np.flatnonzero(A[r + 1:, c] % A[r, c])).tolist():
            a, b = int(A[r, c]), int(A[j, c])
            h, s, t = xgcd(a, b)
            top = (s * A[r, c:] + t * A[j, c:]) % n
            A[j, c:] = ((-(b // h) % n) * A[r, c:] + (a // h) * A[j, c:]) % n
            A[r, c:] = top
        g = int(A[r, c])
        rows = r + 1 + np.flatnonzero(A[r + 1:, c])
        if rows.size:
            q = A[rows, c] // g
            A[rows, c:] = (A[rows, c:] - np.outer(q, A[r, c:])) % n
        r += 1
    return A[:r]


def snf_mod(A, n: int, left: bool = False, right: bool = True) -> ModSmith:
    """Smith normal form of ``A`` over Z/n.

    Row transforms (``U`` and its inverse) are tracked only when ``left`` is
    set, column transforms only when ``right`` is set; skipping ``U`` for tall
    cochain differentials saves most of the work.
    """
    if not 1 <= n < MAX_MODULUS:
        raise ValueError(f"modulus must be in [1, 2**31), got {n}")
    A = np.array(A, dtype=np.int64, copy=True)
    if A.ndim != 2:
        A = A.reshape(0, 0) if A.size == 0 else A
    A %= n
    return _snf_mod_core(A, n, left, right)


def _snf_mod_core(A: np.ndarray, n: int, left: bool, right: bool) -> ModSmith:
    m, k = A.shape
    U = np.eye(m, dtype=np.int64) if left else None
    Uinv = np.eye(m, dtype=np.int64) if left else None
    V = np.eye(k, dtype=np.int64) if right else None
    if n == 1:
        return ModSmith(n, (m, k), [], U, Uinv, V)

    def row_pair(i, j, R):
        # rows (i, j) <- R @ rows (i, j)
        a, b, c, d = (int(x) % n for x in R)
        A[[i, j]] = np.array([a * A[i] + b * A[j], c * A[i] + d * A[j]]) % n
        if left:
            U[[i, j]] = np.array([a * U[i] + b * U[j], c * U[i] + d * U[j]]) % n
            # Uinv <- Uinv @ R^{-1}, det R == 1
            ci, cj = Uinv[:, i].copy(), Uinv[:, j].copy()
            Uinv[:, i] = (d * ci - c * cj) % n
            Uinv[:, j] = (-b * ci + a * cj) % n

    def col_pair(i, j, C):
        # cols (i, j) <- cols (i, j) @ C
        a, b, c, d = (int(x) % n for x in C)
        ci, cj = A[:, i].copy(), A[:, j].copy()
        A[:, i] = (a * ci + c * cj) % n
        A[:, j] = (b * ci + d * cj) % n
        if right:
            vi, vj = V[:, i].copy(), V[:, j].copy()
            V[:, i] = (a * vi + c * vj) % n
            V[:, j] = (b * vi + d * vj) % n

    def swap_rows(i, j):
        if i != j:
            A[[i, j]] = A[[j, i]]
            if left:
                U[[i, j]] = U[[j, i]]
                Uinv[:, [i, j]] = Uinv[:, [j, i]]

    def swap_cols(i, j):
        if i != j:
            A[:, [i, j]] = A[:, [j, i]]
            if right:
                V[:, [i, j]] = V[:, [j, i]]

    # without U the row order is free: replace A by echelon rows with the
    # same span, so the full elimination below runs on a small matrix
    if not left:
        A = _echelon_rows(A, n)
    t = 0
    while t < min(A.shape[0], k):
        if A[t:, t].any():
            j = t
        else:
            live = np.flatnonzero(A[t:, t + 1:].any(axis=0))
            if live.size == 0:
                break
            j = t + 1 + int(live[0])
        col = A[t:, j]
        rows = np.flatnonzero(col)
        gs = np.gcd(col[rows], n)
        i = t + int(rows[np.argmin(gs)])
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = int(A[t, t])
            g = gcd(p, n)
            if p != g:
                u = _unit_to_divisor(p, n)
                A[t] = (A[t] * u) % n
                if left:
                    U[t] = (U[t] * u) % n
                    Uinv[:, t] = (Uinv[:, t] * pow(u, -1, n)) % n
            # column t: Euclid steps for entries the pivot does not divide
            for r in (t + 1 + np.flatnonzero(A[t + 1:, t] % A[t, t])).tolist():
                a, b = int(A[t, t]), int(A[r, t])
                h, s, tt = xgcd(a, b)
                row_pair(t, r, (s, tt, -(b // h), a // h))
            g = int(A[t, t])
            rows = t + 1 + np.flatnonzero(A[t + 1:, t])
            if rows.size:
                # columns left of t are already zero below the diagonal
                q = A[rows, t] // g
                A[rows, t:] = (A[rows, t:] - np.outer(q, A[t, t:])) % n
                if left:
                    U[rows] = (U[rows] - np.outer(q, U[t])) % n
                    Uinv[:, t] = (Uinv[:, t] + Uinv[:, rows] @ q) % n
            # row t: column operations
            euclid = False
            for c in (t + 1 + np.flatnonzero(A[t, t + 1:] % A[t, t])).tolist():
                a, b = int(A[t, t]), int(A[t, c])
                h, s, tt = xgcd(a, b)
                col_pair(t, c, (s, -(b // h), tt, a // h))
                euclid = True
            g = int(A[t, t])
            cols = t + 1 + np.flatnonzero(A[t, t + 1:])
            if cols.size:
                # rows above t are zero in column t
                q = A[t, cols] // g
                A[t:, cols] = (A[t:, cols] - np.outer(A[t:, t], q)) % n
                if right:
                    V[:, cols] = (V[:, cols] - np.outer(V[:, t], q)) % n
            if not euclid:
                break
            if not A[t + 1:, t].any():
                break
        t += 1

    diag = [int(A[i, i]) for i in range(t)]
    # normalise to a divisibility chain: (a, b) -> (gcd, lcm)
    for i in range(t):
        for j in range(i + 1, t):
            a, b = diag[i], diag[j]
            b_eff = b if b else n
            if b_eff % a == 0:
                continue
            h, s, tt = xgcd(a, b_eff)
            row_pair(i, j, (s, tt, -(b_eff // h), a // h))
            col_pair(i, j, (1, -(tt * b_eff // h), 1, s * a // h))
            diag[i], diag[j] = h, (a * b_eff // h) % n
    # a lcm equal to n vanishes; the chain puts those last
    rank = sum(1 for d in diag if d)
    assert all(diag[:rank]) and not any(diag[rank:])
    return ModSmith(n, (m, k), diag[:rank], U, Uinv, V)


def kernel_mod(A, n: int) -> np.ndarray:
    """Columns generating ``{x : A x == 0 (mod n)}``."""
    return _kernel_columns(snf_mod(A, n, right=True), n)


def _kernel_columns(s: ModSmith, n: int) -> np.ndarray:
    k = s.shape[1]
    cols = []
    for i in range(k):
        if i < s.rank:
            mult = n // s.diag[i]
            if mult % n == 0:
                continue
            cols.append((s.V[:, i] * mult) % n)
        elif n > 1:
            cols.append(s.V[:, i])
    if not cols:
        return np.zeros((k, 0), dtype=np.int64)
    return np.stack(cols, axis=1)


def solve_mod(A, b, n: int) -> np.ndarray | None:
    """A solution of ``A x == b (mod n)``, or ``None`` when there is none.

    The returned solution is deterministic for fixed inputs.
    """
    A = np.asarray(A, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64).reshape(-1) % n
    m, k = A.shape
    if b.shape[0] != m:
        raise ValueError(f"rhs has length {b.shape[0]}, expected {m}")
    if n == 1:
        return np.zeros(k, dtype=np.int64)
    s = snf_mod(A, n, left=True, right=True)
    c = (s.U @ b) % n
    y = np.zeros(k, dtype=np.int64)
    for i, d in enumerate(s.diag):
        if c[i] % d:
            return None
        y[i] = c[i] // d
    if c[s.rank:].any():
        return None
    return (s.V @ y) % n


# --------------------------------------------------------------------------
# finite abelian groups and subquotients


@dataclass(frozen=True)
class FinAbGroup:
    """A finite abelian group Z/d_1 x ... x Z/d_k with d_1 | ... | d_k."""

    invariant_factors: tuple[int, ...] = ()

    def __post_init__(self):
        f = tuple(int(d) for d in self.invariant_factors)
        object.__setattr__(self, "invariant_factors", f)
        if any(d < 2 for d in f):
            raise ValueError(f"invariant factors must be >= 2: {f}")
        if any(b % a for a, b in zip(f, f[1:])):
            raise ValueError(f"invariant factors must form a divisibility chain: {f}")

    @classmethod
    def from_cyclic_orders(cls, orders: Sequence[int]) -> "FinAbGroup":
        """Canonical form of a direct sum of cyclic groups of the given orders."""
        orders = [int(d) for d in orders if int(d) != 1]
        if not orders:
            return cls(())
        diag = smith_normal_form(np.diag(np.array(orders, dtype=object))).diagonal
        return cls(tuple(d for d in diag if d != 1))

    @property
    def order(self) -> int:
        return prod(self.invariant_factors)

    @property
    def is_trivial(self) -> bool:
        return not self.invariant_factors

    @property
    def is_cyclic(self) -> bool:
        return len(self.invariant_factors) <= 1

    def __len__(self) -> int:
        return len(self.invariant_factors)

    def __str__(self) -> str:
        if not self.invariant_factors:
            return "0"
        return " x ".join(f"Z/{d}" for d in self.invariant_factors)


def element_order(coords, factors: Sequence[int]) -> int:
    """Order of an element of Z/f_1 x ... x Z/f_k given by coordinates."""
    out = 1
    for c, f in zip(coords, factors):
        o = f // gcd(int(c) % f, f)
        out = out * o // gcd(out, o)
    return out


@dataclass
class Subquotient:
    """A presentation of Z/B for submodules B <= Z <= (Z/n)^k.

    ``group`` holds the invariant factors, column ``i`` of ``basis`` is a
    representative in Z of the i-th generator, and :meth:`coords` maps a
    vector of Z to its coordinates.
    """

    n: int
    group: FinAbGroup
    basis: np.ndarray
    _U: np.ndarray = field(repr=False)
    _d: np.ndarray = field(repr=False)
    _U2: np.ndarray = field(repr=False)
    _keep: np.ndarray = field(repr=False)

    @property
    def ambient_dim(self) -> int:
        return self.basis.shape[0]

    def _lift(self, v) -> np.ndarray:
        v = np.asarray(v, dtype=np.int64).reshape(-1) % self.n
        y = (self._U @ v) % self.n
        r = len(self._d)
        if y[r:].any() or (y[:r] % self._d).any():
            raise NotAMemberError("vector is not in the cycle submodule")
        return y[:r] // self._d

    def contains(self, v) -> bool:
        try:
            self._lift(v)
        except NotAMemberError:
            return False
        return True

    def coords(self, v) -> tuple[int, ...]:
        t = self._lift(v)
        w = (self._U2 @ t) % self.n
        w = w[self._keep]
        return tuple(int(x) % f for x, f in zip(w, self.group.invariant_factors))

    def combine(self, coords) -> np.ndarray:
        """A representative vector for the given coordinates."""
        c = np.asarray(coords, dtype=np.int64).reshape(-1)
        if self.basis.shape[1] == 0:
            return np.zeros(self.ambient_dim, dtype=np.int64)
        return (self.basis @ c) % self.n


def _as_columns(M, k: int) -> np.ndarray:
    M = np.asarray(M, dtype=np.int64)
    if M.size == 0:
        return np.zeros((k, 0), dtype=np.int64)
    return M.reshape(k, -1)


def subquotient(Z, B, n: int) -> Subquotient:
    """Present ``span(Z) / span(B)`` inside (Z/n)^k.

    Raises :class:`NotAMemberError` when some column of ``B`` is not in the
    span of ``Z``.
    """
    Z = np.asarray(Z, dtype=np.int64)
    k = Z.shape[0]
    Z = _as_columns(Z, k) % n
    B = _as_columns(B, k) % n
    zs = snf_mod(Z, n, left=True, right=False)
    d = np.array(zs.diag, dtype=np.int64)
    r = len(d)
    h = n // d if r else np.zeros(0, dtype=np.int64)

    T = np.zeros((r, B.shape[1]), dtype=np.int64)
    for j in range(B.shape[1]):
        y = (zs.U @ B[:, j]) % n
        if y[r:].any() or (y[:r] % d).any():
            raise NotAMemberError(f"boundary column {j} is not contained in the cycles")
        T[:, j] = (y[:r] // d) % h
    M = np.concatenate([T, np.diag(h)], axis=1) if r else np.zeros((0, 0), np.int64)
    qs = snf_mod(M, n, left=True, right=False)
    factors = list(qs.diag) + [n] * (r - qs.rank)
    keep = np.array([i for i, f in enumerate(factors) if f > 1], dtype=np.int64)
    group = FinAbGroup(tuple(factors[i] for i in keep))
    if keep.size:
        tvecs = qs.Uinv[:, keep]
        basis = (zs.Uinv[:, :r] @ (d[:, None] * tvecs)) % n
    else:
        basis = np.zeros((k, 0), dtype=np.int64)
    return Subquotient(n, group, basis, zs.U, d, qs.U if qs.U is not None else np.zeros((0, 0), np.int64), keep)


def _quotient_relations(factors: Sequence[int], n: int) -> np.ndarray:
    return np.diag(np.array(factors, dtype=np.int64)) % n if len(factors) else np.zeros((0, 0), np.int64)


def subgroup_of(gens, factors: Sequence[int], n: int) -> Subquotient:
    """The subgroup of Z/f_1 x ... x Z/f_s generated by the columns of ``gens``.

    ``n`` must be a multiple of every ``f_i``.  Coordinates of the result are
    relative to the generators it finds; ``group.order`` is the subgroup order.
    """
    s = len(factors)
    gens = _as_columns(gens, s)
    rel = _quotient_relations(factors, n)
    return subquotient(np.concatenate([gens % n, rel], axis=1), rel, n)


def hom_kernel(Phi, src: Sequence[int], tgt: Sequence[int], n: int) -> Subquotient:
    """Kernel of the homomorphism ``x -> Phi x`` from Z/src to Z/tgt.

    ``Phi`` is ``len(tgt) x len(src)``; ``n`` must be a common multiple of all
    factors.  Basis vectors of the result are coordinate vectors in ``src``.
    """
    s, t = len(src), len(tgt)
    Phi = np.asarray(Phi, dtype=np.int64).reshape(t, s)
    scale = np.array([n // c for c in tgt], dtype=np.int64).reshape(t, 1)
    K = kernel_mod((scale * Phi) % n, n) if t else np.eye(s, dtype=np.int64)
    rel = _quotient_relations(src, n)
    return subquotient(np.concatenate([K, rel], axis=1), rel, n)
