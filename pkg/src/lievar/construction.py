"""The algebras A_n, B_n, C_n over GF(p) and the derivations acting on A_n.

Index subsets of {1, ..., 2n-1} are bitmasks (element i is bit i-1).
Basis order: a^(k)_{sigma,s} by (k, sigma, s), then b_s, then the maps
g_{lambda,s} by (lambda, s), then h_{mu,s} by (mu, s).

Label resolution is total: a^(p)_{sigma,s} is b_s when sigma is the full
set and zero otherwise, and any product or derivation value naming a
label outside the basis (k >= 2 with |sigma| even, s > p, k > p) is zero.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .algebra import (
    Algebra,
    check_axioms,
    is_central,
    is_derivation,
    lower_central_series,
    maps_commute,
    split_extension,
    subalgebra_closure,
)
from .exactmath import PRIMES, MultiPoly, field, matrix_power

DEFAULT_CAP = 500


class CapError(ValueError):
    """The requested instance is larger than the configured dimension cap."""


class DerivationError(ValueError):
    def __init__(self, name: str, pair, cfg):
        super().__init__(f"{name} is not a derivation under {cfg}: fails on basis pair {pair}")
        self.name = name
        self.pair = pair
        self.cfg = cfg


@dataclass(frozen=True)
class InterpretationConfig:
    """Readings of the two side conditions of the derivation rules.

    g_parity: parity of |sigma| for which g_{lambda,t} acts ("even" or
    "odd", the latter being the condition as printed).
    h_disjoint_with: "mu" requires sigma and mu disjoint for h_{mu,t};
    "lambda" keeps the printed condition, whose lambda is unbound, so no
    disjointness is imposed and h acts on every sigma.
    """

    g_parity: str = "even"
    h_disjoint_with: str = "mu"

    def __post_init__(self):
        if self.g_parity not in ("even", "odd"):
            raise ValueError(f"g_parity must be 'even' or 'odd', got {self.g_parity!r}")
        if self.h_disjoint_with not in ("mu", "lambda"):
            raise ValueError(f"h_disjoint_with must be 'mu' or 'lambda', got {self.h_disjoint_with!r}")

    @classmethod
    def parse(cls, text: str) -> "InterpretationConfig":
        try:
            g, h = (x.strip() for x in text.split(","))
        except ValueError:
            raise ValueError(f"interpretation must look like 'even,mu', got {text!r}") from None
        return cls(g, h)

    def __str__(self):
        return f"{self.g_parity},{self.h_disjoint_with}"


DEFAULT_CFG = InterpretationConfig()
ALL_CFGS = tuple(InterpretationConfig(g, h) for g in ("even", "odd") for h in ("mu", "lambda"))


def subset_str(mask: int) -> str:
    return "{" + ",".join(str(i + 1) for i in range(mask.bit_length()) if mask >> i & 1) + "}"


def subset(*elements: int) -> int:
    mask = 0
    for i in elements:
        mask |= 1 << (i - 1)
    return mask


class Label(NamedTuple):
    kind: str  # "a", "b", "g", "h"
    subset: int
    s: int
    k: int = 0

    def __str__(self):
        if self.kind == "a":
            return f"a({self.k},{subset_str(self.subset)},{self.s})"
        if self.kind == "b":
            return f"b({self.s})"
        return f"{self.kind}({subset_str(self.subset)},{self.s})"


def a_label(k: int, sigma: int, s: int) -> Label:
    return Label("a", sigma, s, k)


def dim_A(p: int, n: int) -> int:
    return (p + 1) * (p * 2 ** (2 * n - 2) + 1)


def derivation_count(p: int, n: int) -> int:
    return 2 ** (2 * n - 1) * (p + 1)


def check_params(p: int, n: int, cap: int = DEFAULT_CAP):
    if p not in PRIMES:
        raise ValueError(f"p must be a prime <= 13, got {p}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if dim_A(p, n) > cap:
        raise CapError(f"dim A_{n} over GF({p}) is {dim_A(p, n)}, above the cap {cap}")


class _Basis:
    """Label bookkeeping for A_n."""

    def __init__(self, p: int, n: int):
        self.p, self.n = p, n
        self.m = 2 * n - 1
        self.full = (1 << self.m) - 1
        labels = []
        for sigma in range(1 << self.m):
            for s in range(p + 1):
                labels.append(a_label(1, sigma, s))
        for k in range(2, p):
            for tau in range(1 << self.m):
                if bin(tau).count("1") % 2:
                    for s in range(p + 1):
                        labels.append(a_label(k, tau, s))
        labels += [Label("b", 0, s) for s in range(p + 1)]
        self.labels = labels
        self.index = {lab: i for i, lab in enumerate(labels)}

    def coords(self, i: int) -> tuple[int, int, int]:
        """(k, sigma, s) of basis vector i; b_s reads as a^(p)_{full,s}."""
        lab = self.labels[i]
        if lab.kind == "b":
            return self.p, self.full, lab.s
        return lab.k, lab.subset, lab.s

    def resolve(self, k: int, sigma: int, s: int) -> int | None:
        if s > self.p or k > self.p:
            return None
        if k == self.p:
            return self.index[Label("b", 0, s)] if sigma == self.full else None
        if k >= 2 and bin(sigma).count("1") % 2 == 0:
            return None
        return self.index[a_label(k, sigma, s)]


def build_A(p: int, n: int, cap: int = DEFAULT_CAP) -> Algebra:
    check_params(p, n, cap)
    B = _Basis(p, n)
    products = {}
    d = len(B.labels)
    for i in range(d):
        k, sigma, s = B.coords(i)
        for j in range(d):
            l, tau, t = B.coords(j)
            if k + l > p or s + t > p or sigma & tau:
                continue
            if (bin(sigma).count("1") + bin(tau).count("1")) % 2 == 0:
                continue
            target = B.resolve(k + l, sigma | tau, s + t)
            if target is not None:
                products[(i, j)] = {target: (-1) ** bin(sigma).count("1")}
    return Algebra.from_products(p, d, products, kind="lie", labels=tuple(map(str, B.labels)))


def derivation_labels(p: int, n: int) -> list[Label]:
    m = 2 * n - 1
    odd = [x for x in range(1 << m) if bin(x).count("1") % 2]
    even = [x for x in range(1 << m) if bin(x).count("1") % 2 == 0]
    out = [Label("g", lam, s) for lam in odd for s in range(p + 1)]
    out += [Label("h", mu, s) for mu in even for s in range(p + 1)]
    return out


def derivation_matrix(p: int, n: int, lab: Label, cfg: InterpretationConfig = DEFAULT_CFG) -> np.ndarray:
    B = _Basis(p, n)
    d = len(B.labels)
    D = np.zeros((d, d), dtype=np.int64)
    want_odd = cfg.g_parity == "odd"
    for i in range(d):
        k, sigma, s = B.coords(i)
        if s + lab.s > p:
            continue
        if lab.kind == "g":
            if sigma & lab.subset or (bin(sigma).count("1") % 2 == 1) != want_odd:
                continue
            target, coeff = B.resolve(k, sigma | lab.subset, s + lab.s), 1
        else:
            if cfg.h_disjoint_with == "mu" and sigma & lab.subset:
                continue
            target, coeff = B.resolve(k, sigma | lab.subset, s + lab.s), k
        if target is not None and coeff % p:
            D[i, target] = coeff % p
    return D


def build_derivations(
    p: int,
    n: int,
    cfg: InterpretationConfig = DEFAULT_CFG,
    check: bool = True,
    cap: int = DEFAULT_CAP,
) -> list[tuple[str, np.ndarray]]:
    """The maps g_{lambda,s}, h_{mu,s} as matrices acting on A_n.

    With ``check`` each map is verified to be a derivation and all pairs
    to commute; a failure raises DerivationError naming the pair.
    """
    check_params(p, n, cap)
    maps = [(str(lab), derivation_matrix(p, n, lab, cfg)) for lab in derivation_labels(p, n)]
    if check:
        A = build_A(p, n, cap)
        for name, D in maps:
            chk = is_derivation(A, D)
            if not chk:
                raise DerivationError(name, chk.counterexample, cfg)
        for (n1, D1), (n2, D2) in itertools.combinations(maps, 2):
            if not maps_commute(D1, D2, p):
                raise DerivationError(f"{n1} with {n2}", "commutator nonzero", cfg)
    return maps


def build_B(p: int, n: int, cfg: InterpretationConfig = DEFAULT_CFG, validate: bool = True, cap: int = DEFAULT_CAP) -> Algebra:
    A = build_A(p, n, cap)
    Ds = build_derivations(p, n, cfg, check=validate, cap=cap)
    return split_extension(A, Ds, validate=False)


def c_generator_labels(n: int) -> list[str]:
    gens = [a_label(1, 0, 0), Label("g", subset(1), 0), Label("h", 0, 1)]
    gens += [Label("h", subset(2 * i, 2 * i + 1), 0) for i in range(1, n)]
    return [str(x) for x in gens]


def build_C(
    p: int,
    n: int,
    cfg: InterpretationConfig = DEFAULT_CFG,
    validate: bool = True,
    cap: int = DEFAULT_CAP,
    B: Algebra | None = None,
) -> tuple[Algebra, dict[int, str]]:
    """Subalgebra of B_n generated by the n+2 listed generators.

    Returns the induced algebra and a map from its basis indices to the
    labels of B_n for basis vectors that are single labels.
    """
    if B is None:
        B = build_B(p, n, cfg, validate, cap)
    gens = [B.basis_vector(B.index(x)) for x in c_generator_labels(n)]
    S, C = subalgebra_closure(B, gens)
    labels = {}
    for a, row in enumerate(S.basis):
        nz = np.flatnonzero(row)
        if nz.size == 1 and row[nz[0]] == 1:
            labels[a] = B.label(int(nz[0]))
    return C, labels


def c_generators(C: Algebra, n: int) -> list[np.ndarray]:
    return [C.basis_vector(C.index(x)) for x in c_generator_labels(n)]


@dataclass
class PowerReport:
    ok: bool
    checks: dict[str, bool]


def _poly_matrix_mul(X: dict, Y: dict, F) -> dict:
    by_row: dict[int, list] = {}
    for (r, c), P in Y.items():
        by_row.setdefault(r, []).append((c, P))
    out: dict = {}
    for (r, m), P in X.items():
        for c, Q in by_row.get(m, ()):
            key = (r, c)
            out[key] = out[key] + P * Q if key in out else P * Q
    return {k: v for k, v in out.items() if not v.is_zero()}


def verify_power_relations(p: int, n: int, cfg: InterpretationConfig = DEFAULT_CFG, B: Algebra | None = None) -> PowerReport:
    """Check the p-th power relations of the adjoint maps of the derivations.

    (a) (ad g_{lambda,0})^p = 0 and (ad h_{mu,0})^p = 0 for mu nonempty;
    (b) (ad h_{{},1})^p = ad h_{{},p} on the A-part;
    (c) (ad sum a_i d_i)^p = sum a_i^p (ad d_i)^p with symbolic a_i over the
        derivation generators of C_n, entrywise as polynomials.
    """
    from .algebra import adjoint

    if B is None:
        B = build_B(p, n, cfg)
    dA = dim_A(p, n)
    checks: dict[str, bool] = {}
    for lab in derivation_labels(p, n):
        if lab.s == 0 and (lab.kind == "g" or lab.subset):
            ad = adjoint(B, B.basis_vector(B.index(str(lab))))
            checks[f"(ad {lab})^p=0"] = not matrix_power(ad, p, p).any()
    h1 = adjoint(B, B.basis_vector(B.index(str(Label("h", 0, 1)))))
    hp = adjoint(B, B.basis_vector(B.index(str(Label("h", 0, p)))))
    checks["(ad h({},1))^p=ad h({},p)"] = np.array_equal(matrix_power(h1, p, p)[:dA], hp[:dA])

    F = field(p)
    ds = [x for x in c_generator_labels(n) if not x.startswith("a")]
    ads = [adjoint(B, B.basis_vector(B.index(x))) for x in ds]
    M: dict = {}
    for var, ad in enumerate(ads):
        for r, c in zip(*np.nonzero(ad)):
            term = MultiPoly.var(F, var).scale(int(ad[r, c]))
            key = (int(r), int(c))
            M[key] = M[key] + term if key in M else term
    M = {k: v for k, v in M.items() if not v.is_zero()}
    Mp = M
    for _ in range(p - 1):
        Mp = _poly_matrix_mul(Mp, M, F)
    rhs: dict = {}
    for var, ad in enumerate(ads):
        P = matrix_power(ad, p, p)
        for r, c in zip(*np.nonzero(P)):
            term = MultiPoly.var(F, var, p).scale(int(P[r, c]))
            key = (int(r), int(c))
            rhs[key] = rhs[key] + term if key in rhs else term
    rhs = {k: v for k, v in rhs.items() if not v.is_zero()}
    checks["(ad sum a_i d_i)^p=sum a_i^p (ad d_i)^p"] = Mp == rhs
    return PowerReport(all(checks.values()), checks)


@dataclass
class AuditRow:
    cfg: InterpretationConfig
    derivations: bool
    commute: bool
    axioms_B: bool
    eq1_B: bool
    eq2_B: bool
    eq3_C: bool
    eq4_witness: bool
    dim_C: int

    @property
    def all_claims(self) -> bool:
        return all((self.derivations, self.commute, self.axioms_B, self.eq1_B, self.eq2_B, self.eq3_C, self.eq4_witness))

    def as_dict(self) -> dict:
        return {
            "interp": str(self.cfg),
            "derivations": self.derivations,
            "commute": self.commute,
            "axioms_B": self.axioms_B,
            "eq1_B": self.eq1_B,
            "eq2_B": self.eq2_B,
            "eq3_C": self.eq3_C,
            "eq4_witness_k=n": self.eq4_witness,
            "dim_C": self.dim_C,
            "all_claims": self.all_claims,
        }


def audit_config(p: int, n: int, cfg: InterpretationConfig, cap: int = DEFAULT_CAP) -> AuditRow:
    from .identities import check_identity, find_witness, paper_identity

    A = build_A(p, n, cap)
    maps = build_derivations(p, n, cfg, check=False, cap=cap)
    derivs = all(is_derivation(A, D) for _, D in maps)
    commute = all(maps_commute(D1, D2, p) for (_, D1), (_, D2) in itertools.combinations(maps, 2))
    B = split_extension(A, maps, validate=False)
    axioms = bool(check_axioms(B))
    eq1 = check_identity(B, paper_identity("eq1", p), "span").holds
    eq2 = check_identity(B, paper_identity("eq2", p), "span").holds
    C, _ = build_C(p, n, cfg, B=B)
    fw = lower_central_series(C)[1]
    if fw is None:
        eq3 = check_identity(C, paper_identity("eq3", p), "random", trials=2000).status != "fails"
    else:
        eq3 = check_identity(C, paper_identity("eq3", p), "generic").holds
    wit = find_witness(C, paper_identity("eq4", p, n), budget=50000, generators=c_generators(C, n))
    return AuditRow(cfg, derivs, commute, axioms, eq1, eq2, eq3, wit is not None, C.dim)


def interpretation_audit(p: int, n: int, cap: int = DEFAULT_CAP) -> list[AuditRow]:
    return [audit_config(p, n, cfg, cap) for cfg in ALL_CFGS]


def b_central_in_C(C: Algebra, labels: dict[int, str]) -> dict[str, bool]:
    return {lab: is_central(C, C.basis_vector(i)) for i, lab in labels.items() if lab.startswith("b(")}
