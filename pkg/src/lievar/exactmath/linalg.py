"""Row reduction over GF(p) and canonical subspaces."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np


def _as_matrix(rows, ncols: int | None) -> np.ndarray:
    if isinstance(rows, np.ndarray):
        M = np.array(rows, dtype=np.int64, copy=True)
        if M.ndim == 1:
            M = M.reshape(1, -1) if M.size else M.reshape(0, ncols or 0)
    else:
        rows = [np.asarray(r, dtype=np.int64) for r in rows]
        if not rows:
            return np.zeros((0, ncols or 0), dtype=np.int64)
        lengths = {len(r) for r in rows}
        if len(lengths) != 1:
            raise ValueError(f"rows have mismatched lengths {sorted(lengths)}")
        M = np.vstack(rows)
    if ncols is not None and M.shape[1] != ncols:
        raise ValueError(f"expected ambient dimension {ncols}, got {M.shape[1]}")
    return M


def row_reduce(M: np.ndarray, p: int) -> tuple[np.ndarray, tuple[int, ...]]:
    """Reduced echelon form of ``M`` mod p; returns (nonzero rows, pivots).

    Pivots are chosen leftmost column first, topmost candidate row first.
    """
    M = M % p
    nrows = M.shape[0]
    pivots = []
    r = 0
    while r < nrows:
        live = np.flatnonzero(M[r:].any(axis=0))
        if live.size == 0:
            break
        c = int(live[0])
        i = r + int(np.flatnonzero(M[r:, c])[0])
        if i != r:
            M[[r, i]] = M[[i, r]]
        inv = pow(int(M[r, c]), p - 2, p)
        if inv != 1:
            M[r] = M[r] * inv % p
        col = M[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            M[hit] = (M[hit] - np.outer(col[hit], M[r])) % p
        pivots.append(c)
        r += 1
    return M[:r], tuple(pivots)


@dataclass(frozen=True, eq=False)
class Subspace:
    """Subspace of GF(p)^n stored as its canonical reduced echelon basis."""

    p: int
    ambient: int
    basis: np.ndarray
    pivots: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.pivots)

    @classmethod
    def zero(cls, p: int, ambient: int) -> "Subspace":
        return rref([], p, ambient)

    @classmethod
    def full(cls, p: int, ambient: int) -> "Subspace":
        return rref(np.eye(ambient, dtype=np.int64), p, ambient)

    def _check(self, n: int):
        if n != self.ambient:
            raise ValueError(f"ambient dimension mismatch: {n} vs {self.ambient}")

    def reduce(self, v) -> np.ndarray:
        """Remainder of ``v`` after eliminating the pivot columns."""
        v = np.asarray(v, dtype=np.int64) % self.p
        self._check(v.shape[-1])
        if self.dim == 0:
            return v
        coeffs = v[..., list(self.pivots)]
        return (v - coeffs @ self.basis) % self.p

    def contains(self, v) -> bool:
        return not self.reduce(v).any()

    def coordinates(self, v) -> np.ndarray:
        """Coordinates of ``v`` in the basis; raises if ``v`` is outside."""
        if not self.contains(v):
            raise ValueError("vector not in subspace")
        return np.asarray(v, dtype=np.int64)[..., list(self.pivots)] % self.p

    def issubspace(self, other: "Subspace") -> bool:
        self._check(other.ambient)
        return self.dim == 0 or not other.reduce(self.basis).any()

    def __add__(self, other: "Subspace") -> "Subspace":
        self._check(other.ambient)
        return rref(np.vstack([self.basis, other.basis]), self.p, self.ambient)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return (
            self.p == other.p
            and self.ambient == other.ambient
            and self.pivots == other.pivots
            and np.array_equal(self.basis, other.basis)
        )

    def __hash__(self):
        return hash((self.p, self.ambient, self.pivots, self.basis.tobytes()))

    def __repr__(self):
        return f"Subspace(p={self.p}, ambient={self.ambient}, dim={self.dim})"


def rref(rows: Iterable[Sequence[int]] | np.ndarray, p: int, ambient: int | None = None) -> Subspace:
    """Canonical span of ``rows`` over GF(p)."""
    M = _as_matrix(rows, ambient)
    basis, pivots = row_reduce(M, p)
    basis.setflags(write=False)
    return Subspace(p, M.shape[1], basis, pivots)


def subspace_query(S: Subspace, q, what: str = "auto"):
    """Membership (vector), equality (Subspace) or ``dim`` queries."""
    if what == "dim":
        return S.dim
    if isinstance(q, Subspace):
        if what in ("auto", "equal"):
            return S == q
        if what == "contains":
            return q.issubspace(S)
        raise ValueError(what)
    return S.contains(q)


def matrix_power(M: np.ndarray, n: int, p: int) -> np.ndarray:
    result = np.eye(M.shape[0], dtype=np.int64)
    base = M % p
    while n:
        if n & 1:
            result = result @ base % p
        n >>= 1
        if n:
            base = base @ base % p
    return result
