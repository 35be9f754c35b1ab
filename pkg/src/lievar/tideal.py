"""Relatively free algebras, T-ideals and ordinal functions.

Two nilpotent base varieties are supported:

* ``metabelian`` of class k: Lie algebras with (x1 x2)(x3 x4) = 0 and all
  products of k+1 elements zero.  The free algebra of rank r has basis
  z_1..z_r and left-normed words z_{i0} z_{i1} ... z_{i(d-1)} with
  i0 > i1 <= i2 <= ... <= i(d-1), 2 <= d <= k.
* ``commutative`` of class k: commutative associative algebras with all
  products of k+1 elements zero; basis = monomials of degree 1..k.

T-ideals are computed over an infinite extension of GF(p): values of an
identity under generic substitutions are expanded and the coefficient
vector of every monomial in the generic symbols is harvested.  Spans are
built one multidegree block at a time.
"""
from __future__ import annotations

import itertools
import time
from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property
from math import comb

import numpy as np

from .algebra import Algebra
from .exactmath import Subspace, row_reduce, rref
from .identities import FreePoly, GenericEvaluator, paper_identity
from .identities.freepoly import leaves, left_factors

BASES = ("metabelian", "commutative")
DEFAULT_CAP = 2000


class BudgetExceeded(RuntimeError):
    """A computation ran past its deadline."""


def _tick(deadline: float | None):
    if deadline is not None and time.monotonic() > deadline:
        raise BudgetExceeded("time budget exhausted")


@dataclass(frozen=True)
class Base:
    name: str
    k: int

    def __post_init__(self):
        if self.name not in BASES:
            raise ValueError(f"unknown base variety {self.name!r}")
        if self.k < 1:
            raise ValueError("class must be >= 1")

    @property
    def poly_kind(self) -> str:
        return "lie" if self.name == "metabelian" else "assoc"


@dataclass(frozen=True)
class VarietySpec:
    base: Base
    extra: tuple[FreePoly, ...]
    p: int

    def __post_init__(self):
        for f in self.extra:
            if not f.is_multihomogeneous():
                raise ValueError(f"identity {f} is not multihomogeneous")
            if f.p != self.p:
                raise ValueError("identity over a different field")


def remark_base(remark: int, p: int) -> Base:
    if remark == 4:
        return Base("metabelian", p**3 + p**2 + p + 2)
    if remark == 5:
        return Base("commutative", p**2 + p + 1)
    raise ValueError("remark must be 4 or 5")


def remark_spec(remark: int, p: int, which: str) -> VarietySpec:
    """The variety V (which='v'), W (which='w') or the base (which='base')."""
    base = remark_base(remark, p)
    if which == "base":
        return VarietySpec(base, (), p)
    if which not in ("v", "w"):
        raise ValueError("which must be 'v', 'w' or 'base'")
    return VarietySpec(base, (paper_identity(f"r{remark}{which}", p),), p)


# --------------------------------------------------------------------------
# word combinatorics
# --------------------------------------------------------------------------


def metabelian_words(r: int, d: int) -> list[tuple[int, ...]]:
    """Normal words of degree d over letters 1..r."""
    if d == 1:
        return [(a,) for a in range(1, r + 1)]
    out = []
    for i1 in range(1, r + 1):
        for i0 in range(i1 + 1, r + 1):
            for tail in itertools.combinations_with_replacement(range(i1, r + 1), d - 2):
                out.append((i0, i1) + tail)
    return out


def metabelian_count(r: int, d: int) -> int:
    return r if d == 1 else (d - 1) * comb(r + d - 2, d)


def normal_form(a: int, b: int, tail=()) -> dict[tuple[int, ...], int]:
    """Left-normed z_a z_b z_tail in the normal word basis (integer coefficients)."""
    if a == b:
        return {}
    sign = 1
    if a < b:
        a, b, sign = b, a, -1
    tail = sorted(tail)
    if not tail or b <= tail[0]:
        return {(a, b) + tuple(tail): sign}
    c, rest = tail[0], tail[1:]
    # (z_a z_b) z_c = (z_a z_c) z_b - (z_b z_c) z_a, both normal since c < b < a
    return {
        (a, c) + tuple(sorted(rest + [b])): sign,
        (b, c) + tuple(sorted(rest + [a])): -sign,
    }


def commutative_monomials(r: int, d: int) -> list[tuple[int, ...]]:
    out = []
    for combo in itertools.combinations_with_replacement(range(r), d):
        e = [0] * r
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return sorted(out, reverse=True)


def relatively_free_dim(base: Base, r: int) -> int:
    if base.name == "metabelian":
        return sum(metabelian_count(r, d) for d in range(1, base.k + 1)) if r >= 1 else 0
    return sum(comb(r + d - 1, d) for d in range(1, base.k + 1))


def _word_multidegree(word: tuple[int, ...], r: int) -> tuple[int, ...]:
    md = [0] * r
    for a in word:
        md[a - 1] += 1
    return tuple(md)


def _word_str(word: tuple[int, ...]) -> str:
    return " ".join(f"z{a}" for a in word)


def _mono_str(e: tuple[int, ...]) -> str:
    return "*".join(f"z{i + 1}" if x == 1 else f"z{i + 1}^{x}" for i, x in enumerate(e) if x)


# --------------------------------------------------------------------------
# relatively free algebras
# --------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class RelativelyFree:
    base: Base
    rank: int
    p: int
    algebra: Algebra
    words: tuple[tuple[int, ...], ...]

    @cached_property
    def index(self) -> dict[tuple[int, ...], int]:
        return {w: i for i, w in enumerate(self.words)}

    @property
    def degrees(self) -> list[int]:
        return [sum(md) for md in self.algebra.grading]

    @property
    def generators(self) -> list[int]:
        return [i for i, d in enumerate(self.degrees) if d == 1]

    def multidegree(self, i: int) -> tuple[int, ...]:
        return self.algebra.grading[i]


def build_relatively_free(base: Base, r: int, p: int, cap: int = DEFAULT_CAP) -> RelativelyFree:
    if r < 1:
        raise ValueError("rank must be >= 1")
    dim = relatively_free_dim(base, r)
    if dim > cap:
        raise ValueError(f"relatively free algebra of rank {r} has dimension {dim}, above the cap {cap}")
    k = base.k
    products: dict[tuple[int, int], dict[int, int]] = {}
    if base.name == "commutative":
        words = [e for d in range(1, k + 1) for e in commutative_monomials(r, d)]
        index = {w: i for i, w in enumerate(words)}
        for i, u in enumerate(words):
            du = sum(u)
            for j, v in enumerate(words):
                if du + sum(v) <= k:
                    products[(i, j)] = {index[tuple(x + y for x, y in zip(u, v))]: 1}
        grading = tuple(words)
        labels = tuple(_mono_str(e) for e in words)
        kind = "commutative-associative"
    else:
        words = [w for d in range(1, k + 1) for w in metabelian_words(r, d)]
        index = {w: i for i, w in enumerate(words)}
        gens = {a: index[(a,)] for a in range(1, r + 1)}
        if k >= 2:
            for a in range(1, r + 1):
                for b in range(1, r + 1):
                    nf = normal_form(a, b)
                    if nf:
                        products[(gens[a], gens[b])] = {index[w]: c for w, c in nf.items()}
        for i, w in enumerate(words):
            if len(w) < 2 or len(w) >= k:
                continue
            for a in range(1, r + 1):
                nf = normal_form(w[0], w[1], w[2:] + (a,))
                row = {index[u]: c for u, c in nf.items()}
                products[(i, gens[a])] = row
                products[(gens[a], i)] = {t: -c for t, c in row.items()}
        grading = tuple(_word_multidegree(w, r) for w in words)
        labels = tuple(_word_str(w) for w in words)
        kind = "lie"
    A = Algebra.from_products(p, len(words), products, kind=kind, labels=labels, grading=grading)
    return RelativelyFree(base, r, p, A, tuple(words))


# --------------------------------------------------------------------------
# value spans of identities
# --------------------------------------------------------------------------


def _check_poly(base: Base, f: FreePoly):
    if f.kind != base.poly_kind:
        raise ValueError(f"{f.kind} polynomial used with the {base.name} base")
    if not f.is_multihomogeneous():
        raise ValueError(f"identity {f} is not multihomogeneous")


def _max_substitution_degrees(f: FreePoly, k: int) -> list[int]:
    """Largest useful degree of the value substituted for each variable."""
    md = f.multidegree()
    D = sum(md)
    return [1 + (k - D) // d for d in md]


def generic_values(F: RelativelyFree, f: FreePoly, deadline: float | None = None) -> list[dict[int, int]]:
    """Coefficient vectors of f under generic substitutions in F."""
    _check_poly(F.base, f)
    if f.is_zero() or f.degree() > F.base.k:
        return []
    degs = F.degrees
    maxdeg = _max_substitution_degrees(f, F.base.k)
    allowed = [[j for j, d in enumerate(degs) if d <= m] for m in maxdeg]
    ev = GenericEvaluator(F.algebra, prune=True, weights=(degs, F.base.k))
    _tick(deadline)
    val = ev.evaluate(f, allowed=allowed)
    harvest: dict[tuple, dict[int, int]] = defaultdict(dict)
    for k, P in val.items():
        for m, c in P.items():
            harvest[m][k] = c
    return list(harvest.values())


def fast_route_shape(f: FreePoly) -> tuple[int, int, list[tuple[int, int]]] | None:
    """(x, y, runs) when f = c * x y u1^e1 u2^e2 ... with distinct variables.

    x and y occur once; each u_i occurs only in its own run of e_i
    consecutive factors.  Returns None for any other shape.
    """
    if len(f.terms) != 1:
        return None
    t, _ = f.terms[0]
    factors = left_factors(t)
    if any(isinstance(x, tuple) for x in factors) or len(factors) < 2:
        return None
    x, y = factors[0], factors[1]
    if x == y:
        return None
    runs: list[list[int]] = []
    for v in factors[2:]:
        if runs and runs[-1][0] == v:
            runs[-1][1] += 1
        else:
            runs.append([v, 1])
    names = [x, y] + [v for v, _ in runs]
    if len(set(names)) != len(names):
        return None
    return x, y, [(v, e) for v, e in runs]


def _lucas_nonzero(parts: tuple[int, ...], p: int) -> bool:
    """Multinomial coefficient of ``parts`` is nonzero mod p (no carries in base p)."""
    parts = list(parts)
    while any(parts):
        if sum(x % p for x in parts) >= p:
            return False
        parts = [x // p for x in parts]
    return True


def frobenius_exponents(e: int, r: int, p: int) -> list[tuple[int, ...]]:
    """Exponent vectors of (t_1 z_1 + ... + t_r z_r)^e with nonzero coefficient mod p."""
    out = []
    for combo in itertools.combinations_with_replacement(range(r), e):
        parts = [0] * r
        for i in combo:
            parts[i] += 1
        if _lucas_nonzero(tuple(parts), p):
            out.append(tuple(parts))
    return out


def _tail_exponents(runs, r, p, deadline=None) -> set[tuple[int, ...]]:
    total = {tuple([0] * r)}
    for _, e in runs:
        options = frobenius_exponents(e, r, p)
        total = {tuple(a + b for a, b in zip(s, o)) for s in total for o in options}
        _tick(deadline)
    return total


def _apply_tail(word_nf: dict, beta: tuple[int, ...], p: int) -> dict:
    """Right-multiply a combination of normal words by z^beta (tail letters commute)."""
    letters = [i + 1 for i, x in enumerate(beta) for _ in range(x)]
    out: dict = defaultdict(int)
    for w, c in word_nf.items():
        for u, d in normal_form(w[0], w[1], w[2:] + tuple(letters)).items():
            out[u] = (out[u] + c * d) % p
    return {u: c for u, c in out.items() if c}


def fast_values(F: RelativelyFree, f: FreePoly, deadline: float | None = None) -> list[dict[int, int]]:
    """Value vectors of x y u1^e1 ... in a metabelian F.

    x y spans the derived algebra F^2; the u_i act on F^2 through commuting
    operators, so only their linear parts matter and (ad u)^e contributes
    the monomials z^beta whose multinomial coefficient is nonzero mod p.
    """
    shape = fast_route_shape(f)
    if F.base.name != "metabelian" or shape is None:
        raise ValueError("fast route needs a metabelian base and a shape x y u1^e1 ...")
    _, _, runs = shape
    if f.is_zero() or f.degree() > F.base.k:
        return []
    c = f.terms[0][1]
    tail_deg = sum(e for _, e in runs)
    betas = sorted(_tail_exponents(runs, F.rank, F.p, deadline))
    out = []
    for w in F.words:
        if len(w) < 2 or len(w) + tail_deg > F.base.k:
            continue
        for beta in betas:
            nf = _apply_tail({w: c}, beta, F.p)
            if nf:
                out.append({F.index[u]: x for u, x in nf.items()})
        _tick(deadline)
    return out


# --------------------------------------------------------------------------
# blockwise spans and ideal closure
# --------------------------------------------------------------------------


def _block_rref(vectors: list[dict], p: int) -> tuple[list[int], np.ndarray]:
    coords = sorted({k for v in vectors for k in v})
    pos = {k: i for i, k in enumerate(coords)}
    M = np.zeros((len(vectors), len(coords)), dtype=np.int64)
    for r, v in enumerate(vectors):
        for k, c in v.items():
            M[r, pos[k]] = c
    basis, _ = row_reduce(M, p)
    return coords, basis


def tideal_blocks(
    F: RelativelyFree,
    fs: list[FreePoly],
    method: str = "auto",
    deadline: float | None = None,
) -> dict[tuple[int, ...], list[dict[int, int]]]:
    """T-ideal generated by ``fs`` as {multidegree: basis vectors (sparse)}."""
    A = F.algebra
    pending: dict[tuple[int, ...], list[dict]] = defaultdict(list)
    for f in fs:
        _check_poly(F.base, f)
        use_fast = method == "fast" or (method == "auto" and F.base.name == "metabelian" and fast_route_shape(f) is not None)
        vals = fast_values(F, f, deadline) if use_fast else generic_values(F, f, deadline)
        for v in vals:
            mds = {F.multidegree(k) for k in v}
            if len(mds) != 1:
                raise AssertionError("harvested vector is not multihomogeneous")
            pending[mds.pop()].append(v)
    gens = F.generators
    right = [A.left_entries[i] for i in range(A.dim)]
    blocks: dict[tuple[int, ...], list[dict[int, int]]] = {}
    while pending:
        key = min(pending, key=lambda md: (sum(md), md))
        vectors = pending.pop(key)
        coords, basis = _block_rref(vectors, F.p)
        rows = [{coords[i]: int(row[i]) for i in np.flatnonzero(row)} for row in basis]
        if not rows:
            continue
        blocks[key] = rows
        _tick(deadline)
        for g in gens:
            for row in rows:
                prod: dict[int, int] = defaultdict(int)
                for i, c in row.items():
                    js, ks, cs = right[i]
                    for j, kk, cc in zip(js.tolist(), ks.tolist(), cs.tolist()):
                        if j == g:
                            prod[kk] = (prod[kk] + c * cc) % F.p
                prod = {kk: c for kk, c in prod.items() if c}
                if prod:
                    md = F.multidegree(next(iter(prod)))
                    pending[md].append(prod)
    return blocks


def blocks_to_subspace(F: RelativelyFree, blocks: dict) -> Subspace:
    rows = []
    for vecs in blocks.values():
        for v in vecs:
            row = np.zeros(F.algebra.dim, dtype=np.int64)
            for k, c in v.items():
                row[k] = c
            rows.append(row)
    return rref(rows, F.p, F.algebra.dim)


def tideal_span(F: RelativelyFree, fs: list[FreePoly], method: str = "auto", deadline: float | None = None) -> Subspace:
    """Canonical basis of the T-ideal of F generated by ``fs``."""
    if method not in ("auto", "generic", "fast"):
        raise ValueError(f"unknown T-ideal method {method!r}")
    return blocks_to_subspace(F, tideal_blocks(F, list(fs), method, deadline))


def is_ideal(F: RelativelyFree, S: Subspace) -> bool:
    if S.dim == 0:
        return True
    prods = F.algebra.products(S.basis, np.eye(F.algebra.dim, dtype=np.int64))
    return not S.reduce(prods).any()


def fixed_point_check(F: RelativelyFree, fs: list[FreePoly], S: Subspace, limit: int = 20000) -> bool:
    """S is an ideal and every basis-vector substitution of each f lands in S.

    Tuples are drawn from basis elements of useful degree, at most ``limit``
    per identity in itertools.product order.
    """
    from .identities import evaluate

    if not is_ideal(F, S):
        return False
    degs = F.degrees
    for f in fs:
        if f.is_zero() or f.degree() > F.base.k:
            continue
        pools = [[j for j, d in enumerate(degs) if d <= m] for m in _max_substitution_degrees(f, F.base.k)]
        for tup in itertools.islice(itertools.product(*pools), limit):
            v = evaluate(F.algebra, f, [F.algebra.basis_vector(j) for j in tup])
            if v.any() and not S.contains(v):
                return False
    return True


# --------------------------------------------------------------------------
# ordinal functions and comparisons
# --------------------------------------------------------------------------


def feasible(spec: VarietySpec, r: int, cap: int = DEFAULT_CAP) -> bool:
    """The rank-r computation fits: free algebra under the cap or the top-degree route applies."""
    return relatively_free_dim(spec.base, r) <= cap or top_degree_eligible(spec.base, spec.extra)


def tideal_dimension(
    spec: VarietySpec, r: int, method: str = "auto", deadline: float | None = None, cap: int = DEFAULT_CAP
) -> tuple[int, int]:
    """(dim of the base relatively free algebra, dim of the T-ideal of the extra identities)."""
    dim_base = relatively_free_dim(spec.base, r)
    if not spec.extra:
        return dim_base, 0
    if dim_base > cap:
        if not top_degree_eligible(spec.base, spec.extra):
            raise ValueError(f"rank {r} gives a free algebra of dimension {dim_base}, above the cap {cap}")
        return dim_base, sum(top_degree_dims(spec.base, list(spec.extra), r, spec.p, deadline).values())
    F = build_relatively_free(spec.base, r, spec.p, cap)
    return dim_base, tideal_span(F, list(spec.extra), method, deadline).dim


def ordinal_value(spec: VarietySpec, r: int, method: str = "auto", deadline: float | None = None, cap: int = DEFAULT_CAP) -> int:
    """f_V(r) = dim of the base relatively free algebra minus dim T(V)."""
    dim_base, dim_t = tideal_dimension(spec, r, method, deadline, cap)
    return dim_base - dim_t


@dataclass(frozen=True)
class Comparison:
    verdict: str  # equal | f<g | g<f | incomparable
    dim_f: int
    dim_g: int
    rank: int
    dim_base: int


def _verdict(f_in_g: bool, g_in_f: bool) -> str:
    if f_in_g and g_in_f:
        return "equal"
    if f_in_g:
        return "f<g"
    if g_in_f:
        return "g<f"
    return "incomparable"


def compare_tideals(
    base: Base,
    f: FreePoly,
    g: FreePoly,
    r: int,
    p: int,
    method: str = "auto",
    deadline: float | None = None,
    cap: int = DEFAULT_CAP,
) -> Comparison:
    """Compare T(f) and T(g) inside the rank-r relatively free algebra."""
    dim_base = relatively_free_dim(base, r)
    if dim_base > cap:
        if not top_degree_eligible(base, (f, g)):
            raise ValueError(f"rank {r} exceeds the cap {cap} and the top-degree route does not apply")
        return _compare_top(base, f, g, r, p, deadline)
    F = build_relatively_free(base, r, p, cap)
    Sf = tideal_span(F, [f], method, deadline)
    Sg = tideal_span(F, [g], method, deadline)
    return Comparison(_verdict(Sf.issubspace(Sg), Sg.issubspace(Sf)), Sf.dim, Sg.dim, r, dim_base)


# --------------------------------------------------------------------------
# top-degree route: identities of degree exactly k in a metabelian base
# --------------------------------------------------------------------------


def top_degree_eligible(base: Base, fs) -> bool:
    """Every identity has degree k and the x y u^e shape (metabelian base).

    Such a T-ideal lives entirely in degree k: all its values have degree k
    and any further product has degree > k, so no ideal closure is needed
    and the free algebra never has to be built.
    """
    return base.name == "metabelian" and all(
        not f.is_zero() and f.degree() == base.k and fast_route_shape(f) is not None for f in fs
    )


def top_degree_blocks(base: Base, f: FreePoly, r: int, p: int, deadline: float | None = None):
    """{multidegree: (coords, reduced basis)} of T(f) in degree k, words as coordinates."""
    shape = fast_route_shape(f)
    _, _, runs = shape
    c = f.terms[0][1]
    betas = sorted(_tail_exponents(runs, r, p, deadline))
    vectors: dict[tuple, list[dict]] = defaultdict(list)
    for w in metabelian_words(r, 2):
        for beta in betas:
            nf = _apply_tail({w: c}, beta, p)
            if nf:
                vectors[_word_multidegree(next(iter(nf)), r)].append(nf)
        _tick(deadline)
    out = {}
    for md, vecs in vectors.items():
        coords, basis = _block_rref(vecs, p)
        if basis.shape[0]:
            out[md] = (coords, basis)
        _tick(deadline)
    return out


def top_degree_dims(base: Base, fs: list[FreePoly], r: int, p: int, deadline: float | None = None) -> dict:
    blocks: dict[tuple, list[dict]] = defaultdict(list)
    for f in fs:
        for md, (coords, basis) in top_degree_blocks(base, f, r, p, deadline).items():
            for row in basis:
                blocks[md].append({coords[i]: int(row[i]) for i in np.flatnonzero(row)})
    return {md: _block_rref(vecs, p)[1].shape[0] for md, vecs in blocks.items()}


def _block_contains(small, big, p) -> bool:
    coords_s, basis_s = small
    coords_b, basis_b = big
    union = sorted(set(coords_s) | set(coords_b))
    pos = {w: i for i, w in enumerate(union)}

    def embed(coords, basis):
        M = np.zeros((basis.shape[0], len(union)), dtype=np.int64)
        for j, w in enumerate(coords):
            M[:, pos[w]] = basis[:, j]
        return M

    both = np.vstack([embed(coords_b, basis_b), embed(coords_s, basis_s)])
    return row_reduce(both, p)[0].shape[0] == basis_b.shape[0]


def _compare_top(base, f, g, r, p, deadline) -> Comparison:
    bf = top_degree_blocks(base, f, r, p, deadline)
    bg = top_degree_blocks(base, g, r, p, deadline)
    f_in_g = all(md in bg and _block_contains(bf[md], bg[md], p) for md in bf)
    g_in_f = all(md in bf and _block_contains(bg[md], bf[md], p) for md in bg)
    dim_f = sum(b[1].shape[0] for b in bf.values())
    dim_g = sum(b[1].shape[0] for b in bg.values())
    return Comparison(_verdict(f_in_g, g_in_f), dim_f, dim_g, r, relatively_free_dim(base, r))


# --------------------------------------------------------------------------
# rank-one oracle
# --------------------------------------------------------------------------


def brute_rank1_span(F: RelativelyFree, f: FreePoly) -> Subspace:
    """T-ideal at rank 1 by enumerating every substitution over GF(p).

    Each variable runs over all elements of F whose components have degree
    at most the useful bound; values are spanned and closed under
    multiplication by the generator.  Independent of the generic route.
    """
    from .identities import evaluate

    if F.rank != 1:
        raise ValueError("the brute-force oracle is for rank 1")
    A = F.algebra
    if f.degree() > F.base.k:
        return Subspace.zero(F.p, A.dim)
    maxdeg = _max_substitution_degrees(f, F.base.k)
    degs = F.degrees
    choices = []
    for m in maxdeg:
        idx = [j for j, d in enumerate(degs) if d <= m]
        elems = []
        for coeffs in itertools.product(range(F.p), repeat=len(idx)):
            v = np.zeros(A.dim, dtype=np.int64)
            v[idx] = coeffs
            elems.append(v)
        choices.append(elems)
    rows = []
    for tup in itertools.product(*choices):
        w = evaluate(A, f, list(tup))
        if w.any():
            rows.append(w)
    S = rref(rows, F.p, A.dim)
    gen = F.generators[0]
    while True:
        if S.dim == 0:
            return S
        grown = rref(np.vstack([S.basis, A.products(S.basis, A.basis_vector(gen))]), F.p, A.dim)
        if grown.dim == S.dim:
            return S
        S = grown
