"""Sparse multivariate polynomials with coefficients in a finite field.

A monomial is a tuple of ``(variable_id, exponent)`` pairs sorted by id;
the empty tuple is the constant monomial.  Zero coefficients are never
stored, so the zero polynomial has an empty term map.
"""
from __future__ import annotations

import random
from typing import Iterable, Mapping

from .field import GF, field

Monomial = tuple[tuple[int, int], ...]


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    out = []
    i = j = 0
    while i < len(a) and j < len(b):
        va, ea = a[i]
        vb, eb = b[j]
        if va == vb:
            out.append((va, ea + eb))
            i += 1
            j += 1
        elif va < vb:
            out.append(a[i])
            i += 1
        else:
            out.append(b[j])
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return tuple(out)


def mono_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


class MultiPoly:
    """Immutable sparse polynomial over ``GF(p^e)``."""

    __slots__ = ("F", "_terms", "_hash")

    def __init__(self, F: GF | int, terms: Mapping[Monomial, int] | None = None):
        self.F = field(F) if isinstance(F, int) else F
        clean = {}
        for m, c in (terms or {}).items():
            if self.F.e == 1:
                c %= self.F.p
            else:
                self.F.check(c)
            if c:
                clean[tuple(sorted(m))] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, F: GF, terms: dict) -> "MultiPoly":
        obj = cls.__new__(cls)
        obj.F = F
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def var(cls, F: GF | int, i: int, power: int = 1) -> "MultiPoly":
        return cls(F, {((i, power),): 1})

    @classmethod
    def const(cls, F: GF | int, c: int) -> "MultiPoly":
        return cls(F, {(): c})

    @property
    def terms(self) -> dict[Monomial, int]:
        return dict(self._terms)

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def degree(self) -> int:
        return max((mono_degree(m) for m in self._terms), default=-1)

    def variables(self) -> set[int]:
        return {v for m in self._terms for v, _ in m}

    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.F != self.F:
                raise ValueError("polynomials over different fields")
            return other
        if isinstance(other, int):
            return MultiPoly.const(self.F, other % self.F.p if self.F.e == 1 else other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        F = self.F
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = F.add(out.get(m, 0), c)
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return MultiPoly._raw(F, out)

    __radd__ = __add__

    def __neg__(self):
        F = self.F
        return MultiPoly._raw(F, {m: F.neg(c) for m, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c: int) -> "MultiPoly":
        F = self.F
        c = c % F.p if F.e == 1 else c
        if not c:
            return MultiPoly._raw(F, {})
        return MultiPoly._raw(F, {m: F.mul(a, c) for m, a in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        F = self.F
        out: dict[Monomial, int] = {}
        if F.e == 1:
            p = F.p
            for m1, c1 in self._terms.items():
                for m2, c2 in other._terms.items():
                    m = mono_mul(m1, m2)
                    out[m] = (out.get(m, 0) + c1 * c2) % p
        else:
            for m1, c1 in self._terms.items():
                for m2, c2 in other._terms.items():
                    m = mono_mul(m1, m2)
                    out[m] = F.add(out.get(m, 0), F.mul(c1, c2))
        return MultiPoly._raw(F, {m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative exponent")
        result = MultiPoly.const(self.F, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def evaluate(self, point: Mapping[int, int]) -> int:
        F = self.F
        total = 0
        for m, c in self._terms.items():
            v = c
            for var, e in m:
                v = F.mul(v, F.pow(point[var], e))
            total = F.add(total, v)
        return total

    def __eq__(self, other):
        if isinstance(other, int):
            other = self._coerce(other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.F == other.F and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.F, frozenset(self._terms.items())))
        return self._hash

    def sorted_terms(self) -> list[tuple[Monomial, int]]:
        """Terms in graded lexicographic order, largest first."""
        nvars = max(self.variables(), default=-1) + 1

        def key(item):
            m = item[0]
            dense = [0] * nvars
            for v, e in m:
                dense[v] = e
            return (mono_degree(m), dense)

        return sorted(self._terms.items(), key=key, reverse=True)

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            mono = "*".join(f"t{v}" if e == 1 else f"t{v}^{e}" for v, e in m)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts)

    def __repr__(self):
        return f"MultiPoly({self.F}, {self})"


def poly_arith(op: str, f: MultiPoly, g: MultiPoly | int) -> MultiPoly:
    if op == "add":
        return f + g
    if op == "mul":
        return f * g
    if op == "scale":
        if not isinstance(g, int):
            raise TypeError("scale takes a scalar")
        return f.scale(g)
    raise ValueError(f"unknown polynomial op {op!r}")


def random_poly(F: GF, nvars: int, nterms: int, max_exp: int, rng: random.Random) -> MultiPoly:
    terms = {}
    for _ in range(nterms):
        m = tuple((v, rng.randint(1, max_exp)) for v in sorted(rng.sample(range(nvars), rng.randint(0, nvars))))
        terms[m] = rng.randrange(F.q)
    return MultiPoly(F, terms)


def sum_polys(F: GF, polys: Iterable[MultiPoly]) -> MultiPoly:
    total = MultiPoly(F)
    for f in polys:
        total = total + f
    return total
