"""Evaluation of free polynomials in algebras and identity checking.

Four strategies decide whether f = 0 is an identity of an algebra:

``brute``    evaluate a multilinear f on every tuple of basis vectors;
``span``     for a single multilinear term, propagate the span of the
             values of each subtree up the bracketing tree;
``generic``  substitute x_i = sum_j t_ij e_j with independent symbols t_ij
             and test that every coordinate is the zero polynomial.  This
             is the strong notion of identity: it implies vanishing over
             every extension field of GF(p);
``random``   evaluate at seeded random points of GF(p^e) with
             p^e > 2*deg(f) (Schwartz-Zippel sampling).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from typing import Mapping, Sequence

import numpy as np

from ..algebra import Algebra, filtration_weights, mul
from ..exactmath import GF, extension_degree_for, field, rref
from .freepoly import FreePoly, Term, leaves

METHODS = ("brute", "span", "generic", "random", "auto")


class MethodError(ValueError):
    """The requested checking method does not apply to this polynomial."""


@dataclass(frozen=True)
class Witness:
    """Substitution x_i -> values[name] (vectors over ``field``) with f != 0."""

    values: dict[str, np.ndarray]
    value: np.ndarray
    field: GF

    def describe(self, A: Algebra) -> dict[str, str]:
        out = {name: format_vector(A, v, self.field) for name, v in self.values.items()}
        out["value"] = format_vector(A, self.value, self.field)
        return out


@dataclass(frozen=True)
class IdentityVerdict:
    status: str  # holds | fails | probably-holds
    method: str
    witness: Witness | None = None
    certificate: dict = dc_field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return self.status == "holds"


def format_vector(A: Algebra, v: np.ndarray, F: GF | None = None) -> str:
    nz = np.flatnonzero(v)
    if nz.size == 0:
        return "0"
    parts = []
    for k in nz:
        c = int(v[k])
        coeff = "" if c == 1 else (f"{c}*" if F is None or F.e == 1 else f"[{c}]*")
        parts.append(f"{coeff}{A.label(int(k))}")
    return " + ".join(parts)


def _check_kinds(A: Algebra, f: FreePoly):
    if f.p != A.p:
        raise ValueError(f"polynomial over GF({f.p}) evaluated in algebra over GF({A.p})")
    if f.kind == "assoc" and A.kind == "lie":
        raise ValueError("associative polynomial cannot be evaluated in a Lie algebra")


def _assignment_list(f: FreePoly, asg) -> list:
    if isinstance(asg, Mapping):
        missing = [x for x in f.names if x not in asg]
        if missing:
            raise ValueError(f"assignment misses variables {missing}")
        return [asg[x] for x in f.names]
    if len(asg) < f.nvars:
        raise ValueError("assignment misses variables")
    return list(asg)


def evaluate(A: Algebra, f: FreePoly, asg) -> np.ndarray:
    """Value of f under x_i -> asg[x_i] (a mapping by name or a sequence)."""
    _check_kinds(A, f)
    vals = [np.asarray(v, dtype=np.int64) % A.p for v in _assignment_list(f, asg)]
    memo: dict = {}

    def ev(t: Term):
        if not isinstance(t, tuple):
            return vals[t]
        if t not in memo:
            left = ev(t[0])
            memo[t] = mul(A, left, ev(t[1])) if left.any() else left
        return memo[t]

    total = A.zero()
    for t, c in f.terms:
        total = (total + c * ev(t)) % A.p
    return total


def evaluate_batch(A: Algebra, f: FreePoly, values: Sequence[np.ndarray], F: GF) -> np.ndarray:
    """Vectorised evaluation of N substitutions at once over the field F.

    ``values[i]`` is an (N, dim) array of field elements for variable i.
    """
    _check_kinds(A, f)
    I, J, K, C = A.triples
    memo: dict = {}

    def prod(u, v):
        out = np.zeros_like(u)
        if F.e == 1:
            for i, j, k, c in zip(I.tolist(), J.tolist(), K.tolist(), C.tolist()):
                out[:, k] += u[:, i] * v[:, j] * c
            return out % F.p
        mt, at = F.mul_table, F.add_table
        for i, j, k, c in zip(I.tolist(), J.tolist(), K.tolist(), C.tolist()):
            uv = mt[u[:, i], v[:, j]]
            if c != 1:
                uv = mt[uv, c]
            out[:, k] = at[out[:, k], uv]
        return out

    def ev(t):
        if not isinstance(t, tuple):
            return values[t]
        if t not in memo:
            memo[t] = prod(ev(t[0]), ev(t[1]))
        return memo[t]

    total = np.zeros_like(values[0])
    for t, c in f.terms:
        v = ev(t)
        if F.e == 1:
            total = (total + c * v) % F.p
        else:
            total = F.add_table[total, F.mul_table[v, c]] if c != 1 else F.add_table[total, v]
    return total


def witness_value(A: Algebra, f: FreePoly, w: Witness) -> np.ndarray:
    vals = [np.asarray(w.values[x], dtype=np.int64)[None, :] for x in f.names]
    return evaluate_batch(A, f, vals, w.field)[0]


# --------------------------------------------------------------------------
# brute force
# --------------------------------------------------------------------------


def _nonzero_values(A: Algebra, t: Term):
    """All (assignment, value) pairs of a multilinear subtree with value != 0."""
    if not isinstance(t, tuple):
        for j in range(A.dim):
            yield {t: j}, A.basis_vector(j)
        return
    right = list(_nonzero_values(A, t[1]))
    for asg_l, u in _nonzero_values(A, t[0]):
        for asg_r, v in right:
            w = mul(A, u, v)
            if w.any():
                yield {**asg_l, **asg_r}, w


def check_brute(A: Algebra, f: FreePoly, budget: int = 10**7) -> IdentityVerdict:
    """Exhaustive evaluation on basis tuples (f must be multilinear).

    A single-term f is enumerated subtree by subtree, skipping tuples whose
    subtree value is already zero (every completion is then zero too).
    """
    _check_kinds(A, f)
    if not f.is_multilinear():
        raise MethodError("brute force needs a multilinear polynomial")
    if f.is_zero():
        return IdentityVerdict("holds", "brute", certificate={"tuples": 0})
    basis = [A.basis_vector(j) for j in range(A.dim)]
    if len(f.terms) == 1:
        (t, c), = f.terms
        count = 0
        for asg, w in _nonzero_values(A, t):
            count += 1
            if (c * w % A.p).any():
                vals = {f.names[i]: basis[j] for i, j in asg.items()}
                wit = Witness(vals, c * w % A.p, field(A.p))
                return IdentityVerdict("fails", "brute", wit, {"nonzero_subtree_values": count})
        return IdentityVerdict("holds", "brute", certificate={"tuples": A.dim**f.nvars, "nonzero_paths": count})
    total = A.dim**f.nvars
    if total > budget:
        raise MethodError(f"brute force over {total} tuples exceeds budget {budget}")
    for tup in itertools.product(range(A.dim), repeat=f.nvars):
        vals = [basis[j] for j in tup]
        w = evaluate(A, f, vals)
        if w.any():
            wit = Witness(dict(zip(f.names, vals)), w, field(A.p))
            return IdentityVerdict("fails", "brute", wit, {"tuples": total})
    return IdentityVerdict("holds", "brute", certificate={"tuples": total})


# --------------------------------------------------------------------------
# span propagation
# --------------------------------------------------------------------------


def span_applicable(f: FreePoly) -> bool:
    """Single multilinear term (sibling subtrees then use disjoint variables)."""
    return len(f.terms) == 1 and f.is_multilinear()


def check_span(A: Algebra, f: FreePoly) -> IdentityVerdict:
    _check_kinds(A, f)
    if f.is_zero():
        return IdentityVerdict("holds", "span", certificate={"dims": {}})
    if not span_applicable(f):
        raise MethodError("span method needs a single multilinear term")
    (t, c), = f.terms
    dims: list[int] = []
    memo: dict = {}

    def span(s):
        if not isinstance(s, tuple):
            return np.eye(A.dim, dtype=np.int64)
        if s not in memo:
            U, V = span(s[0]), span(s[1])
            if U.shape[0] == 0 or V.shape[0] == 0:
                S = rref([], A.p, A.dim)
            else:
                S = rref(A.products(U, V), A.p, A.dim)
            dims.append(S.dim)
            memo[s] = S.basis
        return memo[s]

    top = span(t)
    cert = {"subtree_dims": dims}
    if top.shape[0] == 0:
        return IdentityVerdict("holds", "span", certificate=cert)
    # a nonzero span is spanned by values at basis tuples, so this search succeeds
    basis = [A.basis_vector(j) for j in range(A.dim)]
    for asg, w in _nonzero_values(A, t):
        if (c * w % A.p).any():
            vals = {f.names[i]: basis[j] for i, j in sorted(asg.items())}
            return IdentityVerdict("fails", "span", Witness(vals, c * w % A.p, field(A.p)), cert)
    raise AssertionError("nonzero value span without a nonzero basis value")


# --------------------------------------------------------------------------
# generic coefficients
# --------------------------------------------------------------------------

# A "generic vector" maps a coordinate to a polynomial in the symbols t_ij;
# a monomial is the sorted tuple of its symbol ids (with repetition).
GenericVec = dict[int, dict[tuple, int]]


class GenericEvaluator:
    """Evaluate polynomials with symbolic substitutions in a fixed algebra.

    With ``prune`` on and a basis adapted to the lower central series, a
    coordinate of weight w inside a subtree that still has to be multiplied
    by r further factors is dropped when w + r exceeds the nilpotency class
    (the product then lies in a zero term of the series).
    """

    def __init__(self, A: Algebra, prune: bool = True, weights: tuple[list[int], int] | None = None):
        self.A = A
        self.p = A.p
        self.left = [(js.tolist(), ks.tolist(), cs.tolist()) for js, ks, cs in A.left_entries]
        self.weights = None
        if prune:
            self.weights = weights if weights is not None else filtration_weights(A)
        self.max_terms = 0

    def keep(self, k: int, remaining: int) -> bool:
        if self.weights is None:
            return True
        w, cls = self.weights
        return w[k] + remaining <= cls

    def generic_leaf(self, var: int, remaining: int, allowed=None) -> GenericVec:
        d = self.A.dim
        out = {}
        for j in range(d) if allowed is None else allowed:
            if self.keep(j, remaining):
                out[j] = {(var * d + j,): 1}
        return out

    def product(self, u: GenericVec, v: GenericVec, remaining: int) -> GenericVec:
        p = self.p
        out: dict[int, dict[tuple, int]] = {}
        for i, Pi in u.items():
            js, ks, cs = self.left[i]
            for j, k, c in zip(js, ks, cs):
                Qj = v.get(j)
                if Qj is None or not self.keep(k, remaining):
                    continue
                acc = out.setdefault(k, {})
                for m1, c1 in Pi.items():
                    cc = c * c1
                    for m2, c2 in Qj.items():
                        m = tuple(sorted(m1 + m2))
                        acc[m] = (acc.get(m, 0) + cc * c2) % p
        result = {}
        for k, acc in out.items():
            acc = {m: c for m, c in acc.items() if c}
            if acc:
                result[k] = acc
                self.max_terms = max(self.max_terms, len(acc))
        return result

    def evaluate(self, f: FreePoly, allowed: Sequence | None = None) -> GenericVec:
        """Symbolic value of f; ``allowed[i]`` optionally restricts variable i's support."""
        _check_kinds(self.A, f)
        total: dict[int, dict[tuple, int]] = {}
        for t, c in f.terms:
            memo: dict = {}

            def ev(s, remaining):
                key = (s, remaining)
                if key not in memo:
                    if not isinstance(s, tuple):
                        memo[key] = self.generic_leaf(s, remaining, None if allowed is None else allowed[s])
                    else:
                        r_right = len(leaves(s[1]))
                        r_left = len(leaves(s[0]))
                        u = ev(s[0], remaining + r_right)
                        v = ev(s[1], remaining + r_left) if u else {}
                        memo[key] = self.product(u, v, remaining) if v else {}
                return memo[key]

            val = ev(t, 0)
            for k, P in val.items():
                acc = total.setdefault(k, {})
                for m, a in P.items():
                    acc[m] = (acc.get(m, 0) + c * a) % self.p
        return {k: {m: a for m, a in P.items() if a} for k, P in total.items() if any(P.values())}


def check_generic(A: Algebra, f: FreePoly, prune: bool = True, seed: int = 0) -> IdentityVerdict:
    ev = GenericEvaluator(A, prune=prune)
    val = ev.evaluate(f)
    cert = {
        "pruned": ev.weights is not None,
        "max_terms": ev.max_terms,
        "nonzero_coordinates": len(val),
    }
    if ev.weights is not None:
        cert["nilpotency_class"] = ev.weights[1]
    if not val:
        return IdentityVerdict("holds", "generic", certificate=cert)
    wit = find_witness(A, f, budget=20000, seed=seed)
    if wit is None:
        wit = _random_witness(A, f, seed, trials=10000)
    return IdentityVerdict("fails", "generic", wit, cert)


# --------------------------------------------------------------------------
# random sampling
# --------------------------------------------------------------------------


def _random_batches(A: Algebra, f: FreePoly, F: GF, trials: int, seed: int, batch: int = 20000):
    rng = np.random.default_rng(seed)
    done = 0
    while done < trials:
        n = min(batch, trials - done)
        vals = [F.random(rng, (n, A.dim)) for _ in range(f.nvars)]
        yield done, vals, evaluate_batch(A, f, vals, F)
        done += n


def _random_witness(A: Algebra, f: FreePoly, seed: int, trials: int) -> Witness | None:
    F = field(A.p, extension_degree_for(A.p, max(f.degree(), 1)))
    for _, vals, out in _random_batches(A, f, F, trials, seed):
        hit = np.flatnonzero(out.any(axis=1))
        if hit.size:
            r = int(hit[0])
            return Witness({x: vals[i][r].copy() for i, x in enumerate(f.names)}, out[r].copy(), F)
    return None


def check_random(A: Algebra, f: FreePoly, trials: int = 1000, seed: int = 0) -> IdentityVerdict:
    _check_kinds(A, f)
    e = extension_degree_for(A.p, max(f.degree(), 1))
    cert = {"trials": trials, "seed": seed, "field": f"GF({A.p}^{e})"}
    if f.is_zero():
        return IdentityVerdict("probably-holds", "random", certificate=cert)
    wit = _random_witness(A, f, seed, trials)
    if wit is None:
        return IdentityVerdict("probably-holds", "random", certificate=cert)
    return IdentityVerdict("fails", "random", wit, cert)


# --------------------------------------------------------------------------
# dispatcher and witness search
# --------------------------------------------------------------------------


def check_identity(
    A: Algebra,
    f: FreePoly,
    method: str = "auto",
    *,
    seed: int = 0,
    trials: int = 1000,
    prefilter: int = 0,
    prune: bool = True,
) -> IdentityVerdict:
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}")
    _check_kinds(A, f)
    if method == "brute":
        return check_brute(A, f)
    if method == "span":
        return check_span(A, f)
    if method == "generic":
        return check_generic(A, f, prune=prune, seed=seed)
    if method == "random":
        return check_random(A, f, trials=trials, seed=seed)
    if prefilter:
        pre = check_random(A, f, trials=prefilter, seed=seed)
        if pre.status == "fails":
            return pre
    if span_applicable(f):
        return check_span(A, f)
    return check_generic(A, f, prune=prune, seed=seed)


def find_witness(
    A: Algebra,
    f: FreePoly,
    budget: int = 100000,
    generators: Sequence[np.ndarray] | None = None,
    seed: int = 0,
) -> Witness | None:
    """First nonzero substitution in a fixed search order.

    Order: tuples of ``generators`` (itertools.product order), then tuples
    of basis vectors, then random vectors over GF(p) drawn from
    ``numpy.random.default_rng(seed)``.  Returns None once ``budget``
    evaluations are spent.
    """
    _check_kinds(A, f)
    if f.is_zero() or f.nvars == 0:
        return None
    m = f.nvars
    spent = 0

    def candidates():
        if generators:
            gens = [np.asarray(g, dtype=np.int64) % A.p for g in generators]
            for tup in itertools.product(range(len(gens)), repeat=m):
                yield [gens[i] for i in tup]
        basis = [A.basis_vector(j) for j in range(A.dim)]
        for tup in itertools.product(range(A.dim), repeat=m):
            yield [basis[j] for j in tup]
        rng = np.random.default_rng(seed)
        while True:
            yield [rng.integers(0, A.p, A.dim) for _ in range(m)]

    for vals in candidates():
        if spent >= budget:
            return None
        spent += 1
        w = evaluate(A, f, vals)
        if w.any():
            return Witness(dict(zip(f.names, vals)), w, field(A.p))
    return None


def total_degree_exceeds_class(A: Algebra, f: FreePoly) -> bool | None:
    """True when every term is longer than the nilpotency class of A."""
    fw = filtration_weights(A)
    if fw is None:
        return None
    cls = fw[1]
    return all(len(leaves(t)) > cls for t, _ in f.terms)
