"""Finite-dimensional algebras over GF(p) given by structure constants.

Vectors are int64 numpy arrays of residues.  Linear maps are square
matrices acting on row vectors from the right (``x -> x @ M``), which
matches the right-multiplication convention ``x -> x*v`` of adjoint maps.
All products are left normed: ``xyz = (xy)z``.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import Mapping, NamedTuple, Sequence

import numpy as np
from scipy import sparse

from .exactmath import Subspace, rref

KINDS = ("lie", "commutative-associative")

Table = Mapping[tuple[int, int], tuple[tuple[int, int], ...]]


@dataclass(frozen=True, eq=False)
class Algebra:
    """Algebra with basis e_0..e_{dim-1} and e_i*e_j = sum_k c e_k.

    ``table`` maps (i, j) to a tuple of (k, c) pairs with c in 1..p-1; pairs
    absent from the table multiply to zero.  Both orders (i, j) and (j, i)
    are stored explicitly.
    """

    p: int
    dim: int
    table: Table
    kind: str = "lie"
    labels: tuple[str, ...] = ()
    grading: tuple[tuple[int, ...], ...] | None = dc_field(default=None, repr=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown algebra kind {self.kind!r}")
        if self.labels and len(self.labels) != self.dim:
            raise ValueError("label count does not match dimension")
        if self.grading is not None and len(self.grading) != self.dim:
            raise ValueError("grading length does not match dimension")
        for (i, j), entries in self.table.items():
            if not (0 <= i < self.dim and 0 <= j < self.dim):
                raise ValueError(f"table index ({i}, {j}) out of range")
            for k, c in entries:
                if not 0 <= k < self.dim:
                    raise ValueError(f"table target {k} out of range")
                if not 0 < c < self.p:
                    raise ValueError(f"coefficient {c} is not a nonzero residue mod {self.p}")

    @classmethod
    def from_products(cls, p: int, dim: int, products: Mapping, **kw) -> "Algebra":
        """Build from a {(i, j): {k: c}} map, reducing mod p and dropping zeros."""
        table = {}
        for (i, j), row in products.items():
            entries = tuple(sorted((k, c % p) for k, c in row.items() if c % p))
            if entries:
                table[(i, j)] = entries
        return cls(p, dim, dict(sorted(table.items())), **kw)

    def label(self, i: int) -> str:
        return self.labels[i] if self.labels else f"e{i}"

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def basis_vector(self, i: int) -> np.ndarray:
        v = np.zeros(self.dim, dtype=np.int64)
        v[i] = 1
        return v

    def zero(self) -> np.ndarray:
        return np.zeros(self.dim, dtype=np.int64)

    @cached_property
    def left_entries(self) -> list[tuple[np.ndarray, np.ndarray, np.ndarray]]:
        """Per left index i: arrays (j, k, c) of the nonzero products e_i*e_j."""
        rows = [([], [], []) for _ in range(self.dim)]
        for (i, j), entries in self.table.items():
            for k, c in entries:
                rows[i][0].append(j)
                rows[i][1].append(k)
                rows[i][2].append(c)
        return [tuple(np.array(x, dtype=np.int64) for x in r) for r in rows]

    @cached_property
    def triples(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """All nonzero structure constants as parallel arrays (i, j, k, c)."""
        out = [[], [], [], []]
        for (i, j), entries in self.table.items():
            for k, c in entries:
                out[0].append(i)
                out[1].append(j)
                out[2].append(k)
                out[3].append(c)
        return tuple(np.array(x, dtype=np.int64) for x in out)

    @cached_property
    def product_matrix(self) -> sparse.csr_matrix:
        """Sparse (dim*dim, dim) matrix sending vec(u (x) v) to u*v."""
        i, j, k, c = self.triples
        return sparse.csr_matrix((c, (i * self.dim + j, k)), shape=(self.dim * self.dim, self.dim), dtype=np.int64)

    def right_matrix(self, j: int) -> sparse.csr_matrix:
        """Sparse matrix of x -> x*e_j."""
        return self._right_matrices[j]

    @cached_property
    def _right_matrices(self) -> list[sparse.csr_matrix]:
        i, j, k, c = self.triples
        mats = []
        for jj in range(self.dim):
            sel = j == jj
            mats.append(sparse.csr_matrix((c[sel], (i[sel], k[sel])), shape=(self.dim, self.dim), dtype=np.int64))
        return mats

    def products(self, U: np.ndarray, V: np.ndarray) -> np.ndarray:
        """All products U[a]*V[b] as a (len(U)*len(V), dim) array."""
        U = np.atleast_2d(U)
        V = np.atleast_2d(V)
        out = np.zeros((U.shape[0], V.shape[0], self.dim), dtype=np.int64)
        for j in range(self.dim):
            col = V[:, j]
            if not col.any():
                continue
            R = self.right_matrix(j)
            if R.nnz == 0:
                continue
            UR = np.asarray((R.T @ U.T).T) % self.p
            nz = np.flatnonzero(col)
            out[:, nz, :] += UR[:, None, :] * col[nz][None, :, None]
        return out.reshape(-1, self.dim) % self.p


def _vec(A: Algebra, v) -> np.ndarray:
    v = np.asarray(v, dtype=np.int64)
    if v.shape != (A.dim,):
        raise ValueError(f"vector of shape {v.shape} does not match algebra dimension {A.dim}")
    return v % A.p


def mul(A: Algebra, u, v) -> np.ndarray:
    u = _vec(A, u)
    v = _vec(A, v)
    out = np.zeros(A.dim, dtype=np.int64)
    for i in np.flatnonzero(u):
        js, ks, cs = A.left_entries[i]
        if js.size:
            w = v[js] * cs
            if w.any():
                np.add.at(out, ks, u[i] * w)
    return out % A.p


def left_normed(A: Algebra, vs: Sequence) -> np.ndarray:
    if len(vs) == 0:
        raise ValueError("left_normed needs at least one element")
    acc = _vec(A, vs[0])
    for v in vs[1:]:
        acc = mul(A, acc, v)
    return acc


class AxiomReport(NamedTuple):
    ok: bool
    kind: str
    axiom: str | None
    counterexample: tuple[int, ...] | None
    triples_checked: int

    def __bool__(self):
        return self.ok


def _sparse_rows(entries) -> dict[int, int]:
    return {k: c for k, c in entries}


def check_axioms(A: Algebra) -> AxiomReport:
    """Exhaustive check of the defining identities of ``A.kind``.

    Only nonzero chains of structure constants are visited; every triple
    absent from the computed maps has all its terms equal to zero, so the
    check covers all dim**3 basis triples.
    """
    p, d = A.p, A.dim
    T = A.table
    n3 = d**3
    if A.kind == "lie":
        for i in range(d):
            if (i, i) in T:
                return AxiomReport(False, A.kind, "alternating", (i, i), n3)
        sign = -1
        name = "antisymmetry"
    else:
        sign = 1
        name = "commutativity"
    bad = []
    for (i, j), entries in T.items():
        other = _sparse_rows(T.get((j, i), ()))
        mine = _sparse_rows(entries)
        for k in set(mine) | set(other):
            if (mine.get(k, 0) - sign * other.get(k, 0)) % p:
                bad.append((i, j))
                break
    if bad:
        return AxiomReport(False, A.kind, name, min(bad), n3)

    left = A.left_entries
    # (e_i e_j) e_k as sparse rows keyed by (i, j, k)
    P: dict[tuple[int, int, int], dict[int, int]] = {}
    for (i, j), entries in T.items():
        for m, c1 in entries:
            js, ks, cs = left[m]
            for k, l, c2 in zip(js.tolist(), ks.tolist(), cs.tolist()):
                row = P.setdefault((i, j, k), {})
                row[l] = (row.get(l, 0) + c1 * c2) % p

    def get(key):
        return P.get(key, {})

    bad = []
    if A.kind == "lie":
        seen = set()
        for i, j, k in P:
            for key in ((i, j, k), (j, k, i), (k, i, j)):
                if key in seen:
                    continue
                seen.add(key)
                a, b, c = key
                acc: dict[int, int] = {}
                for part in (get((a, b, c)), get((b, c, a)), get((c, a, b))):
                    for l, x in part.items():
                        acc[l] = acc.get(l, 0) + x
                if any(x % p for x in acc.values()):
                    bad.append(key)
        axiom = "jacobi"
    else:
        # e_i (e_j e_k)
        by_right: dict[int, list[tuple[int, int, int]]] = {}
        for (i, m), entries in T.items():
            for l, c in entries:
                by_right.setdefault(m, []).append((i, l, c))
        Q: dict[tuple[int, int, int], dict[int, int]] = {}
        for (j, k), entries in T.items():
            for m, c1 in entries:
                for i, l, c2 in by_right.get(m, ()):
                    row = Q.setdefault((i, j, k), {})
                    row[l] = (row.get(l, 0) + c1 * c2) % p
        for key in set(P) | set(Q):
            lhs, rhs = P.get(key, {}), Q.get(key, {})
            if any((lhs.get(l, 0) - rhs.get(l, 0)) % p for l in set(lhs) | set(rhs)):
                bad.append(key)
        axiom = "associativity"
    if bad:
        return AxiomReport(False, A.kind, axiom, min(bad), n3)
    return AxiomReport(True, A.kind, None, None, n3)


def adjoint(A: Algebra, v) -> np.ndarray:
    """Matrix of x -> x*v."""
    v = _vec(A, v)
    M = np.zeros((A.dim, A.dim), dtype=np.int64)
    for j in np.flatnonzero(v):
        M += v[j] * A.right_matrix(j).toarray()
    return M % A.p


class MapCheck(NamedTuple):
    ok: bool
    counterexample: tuple[int, int] | None

    def __bool__(self):
        return self.ok


def structure_tensor(A: Algebra) -> np.ndarray:
    i, j, k, c = A.triples
    T = np.zeros((A.dim, A.dim, A.dim), dtype=np.int64)
    T[i, j, k] = c
    return T


def is_derivation(A: Algebra, D: np.ndarray) -> MapCheck:
    """Check D(e_i e_j) = D(e_i) e_j + e_i D(e_j) for every basis pair."""
    D = np.asarray(D, dtype=np.int64) % A.p
    d = A.dim
    if D.shape != (d, d):
        raise ValueError("map dimension does not match algebra")
    I, J, K, C = A.triples
    diff = np.zeros((d, d, d), dtype=np.int64)
    # D(e_i e_j)
    np.add.at(diff, (I, J), C[:, None] * D[K])
    for m in range(d):
        rows = np.flatnonzero(D[:, m])
        if rows.size == 0:
            continue
        coef = D[rows, m]
        # D(e_i) e_j: e_m e_j entries weighted by D[i, m]
        sel = I == m
        if sel.any():
            js, ks, cs = J[sel], K[sel], C[sel]
            np.add.at(diff, (rows[:, None], js[None, :], ks[None, :]), -coef[:, None] * cs[None, :])
        # e_i D(e_j): e_i e_m entries weighted by D[j, m]
        sel = J == m
        if sel.any():
            is_, ks, cs = I[sel], K[sel], C[sel]
            np.add.at(diff, (is_[None, :], rows[:, None], ks[None, :]), -coef[:, None] * cs[None, :])
    bad = np.argwhere((diff % A.p).any(axis=2))
    if bad.size:
        return MapCheck(False, tuple(int(x) for x in bad[0]))
    return MapCheck(True, None)


def maps_commute(D1: np.ndarray, D2: np.ndarray, p: int) -> bool:
    D1 = np.asarray(D1, dtype=np.int64)
    D2 = np.asarray(D2, dtype=np.int64)
    if D1.shape != D2.shape or D1.shape[0] != D1.shape[1]:
        raise ValueError("maps must be square of equal size")
    S1, S2 = sparse.csr_matrix(D1), sparse.csr_matrix(D2)
    comm = (S1 @ S2 - S2 @ S1).tocoo()
    return not (comm.data % p).any()


class ExtensionError(ValueError):
    """Raised when the maps handed to split_extension are not admissible."""


def split_extension(
    A: Algebra,
    derivations: Sequence[tuple[str, np.ndarray]],
    validate: bool = True,
) -> Algebra:
    """Lie algebra on A + span(D) with [a, d] = a.D, [d, a] = -a.D, [d, d'] = 0."""
    if A.kind != "lie":
        raise ValueError("split extensions are built for Lie algebras")
    p, d = A.p, A.dim
    mats = [np.asarray(D, dtype=np.int64) % p for _, D in derivations]
    if validate:
        for (name, _), D in zip(derivations, mats):
            chk = is_derivation(A, D)
            if not chk:
                raise ExtensionError(f"{name} is not a derivation: fails on pair {chk.counterexample}")
        for a in range(len(mats)):
            for b in range(a + 1, len(mats)):
                if not maps_commute(mats[a], mats[b], p):
                    raise ExtensionError(f"{derivations[a][0]} and {derivations[b][0]} do not commute")
    products: dict[tuple[int, int], dict[int, int]] = {key: dict(v) for key, v in A.table.items()}
    for t, D in enumerate(mats):
        m = d + t
        for i in range(d):
            row = {int(k): int(D[i, k]) for k in np.flatnonzero(D[i])}
            if row:
                products[(i, m)] = row
                products[(m, i)] = {k: -c for k, c in row.items()}
    labels = tuple(A.labels or (f"e{i}" for i in range(d))) + tuple(name for name, _ in derivations)
    return Algebra.from_products(p, d + len(mats), products, kind=A.kind, labels=labels)


def zero_algebra(p: int, dim: int = 0, kind: str = "lie") -> Algebra:
    return Algebra(p, dim, {}, kind=kind)


def induced_algebra(A: Algebra, S: Subspace, labels: Sequence[str] | None = None) -> Algebra:
    """Structure constants of a subalgebra on the canonical basis of S.

    Raises if S is not closed under multiplication.
    """
    r = S.dim
    if r == 0:
        return zero_algebra(A.p, 0, A.kind)
    prods = A.products(S.basis, S.basis)
    resid = S.reduce(prods)
    if resid.any():
        raise ValueError("subspace is not closed under multiplication")
    coords = prods[:, list(S.pivots)] % A.p
    products = {}
    for idx in np.flatnonzero(coords.any(axis=1)):
        a, b = divmod(int(idx), r)
        products[(a, b)] = {int(k): int(coords[idx, k]) for k in np.flatnonzero(coords[idx])}
    if labels is None:
        labels = []
        for row in S.basis:
            nz = np.flatnonzero(row)
            labels.append(A.label(int(nz[0])) if nz.size == 1 and row[nz[0]] == 1 else "+".join(
                f"{row[k]}*{A.label(int(k))}" for k in nz))
    return Algebra.from_products(A.p, r, products, kind=A.kind, labels=tuple(labels))


def subalgebra_closure(A: Algebra, gens: Sequence) -> tuple[Subspace, Algebra]:
    """Smallest subalgebra containing ``gens``, with its induced structure."""
    gens = [_vec(A, g) for g in gens]
    S = rref(gens, A.p, A.dim)
    while True:
        if S.dim == 0:
            break
        new = A.products(S.basis, S.basis)
        T = rref(np.vstack([S.basis, new]), A.p, A.dim)
        if T.dim == S.dim:
            break
        S = T
    return S, induced_algebra(A, S)


def lower_central_series(A: Algebra) -> tuple[list[int], int | None]:
    """Dimensions of A, A^2, A^3, ... and the nilpotency class.

    The class is the largest c with A^c nonzero, or None when the series
    stabilises at a nonzero term.
    """
    terms = lower_central_terms(A)
    dims = [S.dim for S in terms]
    if dims[-1] != 0:
        return dims, None
    return dims, len(dims) - 1


def lower_central_terms(A: Algebra) -> list[Subspace]:
    S = Subspace.full(A.p, A.dim)
    terms = [S]
    while S.dim:
        blocks = [np.asarray((A.right_matrix(j).T @ S.basis.T).T) for j in range(A.dim) if A.right_matrix(j).nnz]
        nxt = rref(np.vstack(blocks) if blocks else np.zeros((0, A.dim), dtype=np.int64), A.p, A.dim)
        if nxt.dim == S.dim:
            break
        terms.append(nxt)
        S = nxt
    return terms


def filtration_weights(A: Algebra) -> tuple[list[int], int] | None:
    """Lower-central weights of basis vectors, if the basis is adapted.

    Returns (weights, class) where weight[i] = largest c with e_i in A^c,
    provided each A^c is spanned by the basis vectors of weight >= c.
    Returns None for non-nilpotent algebras or non-adapted bases.
    """
    terms = lower_central_terms(A)
    if terms[-1].dim != 0:
        return None
    weights = [0] * A.dim
    for c, S in enumerate(terms, start=1):
        for i in range(A.dim):
            if S.dim and S.contains(A.basis_vector(i)):
                weights[i] = c
    for c, S in enumerate(terms, start=1):
        if sum(1 for w in weights if w >= c) != S.dim:
            return None
    return weights, len(terms) - 1


def is_central(A: Algebra, v) -> bool:
    return not adjoint(A, v).any()
