"""Prime fields GF(p) and their extensions GF(p^e).

Elements are plain Python ints.  For e = 1 the int is the residue in
[0, p).  For e > 1 the base-p digits of the int are the coefficients of a
polynomial over GF(p) of degree < e (least significant digit = constant
term), reduced modulo a fixed Conway-style polynomial from ``CONWAY``.
The residues 0..p-1 therefore embed GF(p) into every extension.
"""
from __future__ import annotations

from functools import cached_property, lru_cache

import numpy as np

PRIMES = (2, 3, 5, 7, 11, 13)

# Monic defining polynomials, coefficients listed from the constant term up.
# These are the Conway polynomials for the listed (p, e); every entry is
# checked to be primitive by the test-suite.
CONWAY: dict[tuple[int, int], tuple[int, ...]] = {
    (2, 1): (1, 1),
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (2, 5): (1, 0, 1, 0, 0, 1),
    (2, 6): (1, 1, 0, 1, 1, 0, 1),
    (2, 7): (1, 1, 0, 0, 0, 0, 0, 1),
    (2, 8): (1, 0, 1, 1, 1, 0, 0, 0, 1),
    (2, 9): (1, 0, 0, 0, 1, 0, 0, 0, 0, 1),
    (2, 10): (1, 1, 1, 1, 0, 1, 1, 0, 0, 0, 1),
    (3, 1): (1, 1),
    (3, 2): (2, 2, 1),
    (3, 3): (1, 2, 0, 1),
    (3, 4): (2, 0, 0, 2, 1),
    (3, 5): (1, 2, 0, 0, 0, 1),
    (3, 6): (2, 2, 1, 0, 2, 0, 1),
    (5, 1): (3, 1),
    (5, 2): (2, 4, 1),
    (5, 3): (3, 3, 0, 1),
    (5, 4): (2, 4, 4, 0, 1),
    (7, 1): (4, 1),
    (7, 2): (3, 6, 1),
    (7, 3): (4, 0, 6, 1),
    (11, 1): (9, 1),
    (11, 2): (2, 7, 1),
    (11, 3): (9, 2, 0, 1),
    (13, 1): (11, 1),
    (13, 2): (2, 12, 1),
    (13, 3): (11, 2, 0, 1),
}

# Largest field order for which dense add/mul lookup tables are built.
MAX_TABLE_ORDER = 4096


class GF:
    """The finite field with p**e elements."""

    def __init__(self, p: int, e: int = 1):
        if p not in PRIMES:
            raise ValueError(f"p must be a prime <= 13, got {p}")
        if e < 1 or (e > 1 and (p, e) not in CONWAY):
            raise ValueError(f"no defining polynomial for GF({p}^{e})")
        self.p = p
        self.e = e
        self.q = p**e
        self.modulus = CONWAY[(p, e)] if e > 1 else (0, 1)

    def __repr__(self):
        return f"GF({self.p})" if self.e == 1 else f"GF({self.p}^{self.e})"

    def __eq__(self, other):
        return isinstance(other, GF) and (self.p, self.e) == (other.p, other.e)

    def __hash__(self):
        return hash((self.p, self.e))

    # -- digit <-> int conversion ------------------------------------------
    def digits(self, a: int) -> list[int]:
        out = []
        for _ in range(self.e):
            a, r = divmod(a, self.p)
            out.append(r)
        return out

    def from_digits(self, ds) -> int:
        a = 0
        for d in reversed(list(ds)):
            a = a * self.p + d % self.p
        return a

    def elements(self) -> range:
        return range(self.q)

    def check(self, a: int) -> int:
        if not 0 <= a < self.q:
            raise ValueError(f"{a} is not an element of {self}")
        return a

    # -- scalar arithmetic ---------------------------------------------------
    def add(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a + b) % self.p
        return self.from_digits(x + y for x, y in zip(self.digits(a), self.digits(b)))

    def neg(self, a: int) -> int:
        if self.e == 1:
            return -a % self.p
        return self.from_digits(-x for x in self.digits(a))

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.e == 1:
            return a * b % self.p
        p, e = self.p, self.e
        x, y = self.digits(a), self.digits(b)
        prod = [0] * (2 * e - 1)
        for i, xi in enumerate(x):
            if xi:
                for j, yj in enumerate(y):
                    prod[i + j] += xi * yj
        m = self.modulus
        for i in range(2 * e - 2, e - 1, -1):
            c = prod[i] % p
            if c:
                for j in range(e + 1):
                    prod[i - e + j] -= c * m[j]
        return self.from_digits(prod[:e])

    def pow(self, a: int, n: int) -> int:
        if n < 0:
            return self.pow(self.inv(a), -n)
        result, base = 1, a
        while n:
            if n & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            n >>= 1
        return result

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError(f"0 has no inverse in {self}")
        if self.e == 1:
            return pow(a, self.p - 2, self.p)
        return self.pow(a, self.q - 2)

    # -- vectorised arithmetic on int arrays --------------------------------
    @cached_property
    def add_table(self) -> np.ndarray:
        return self._table(self.add)

    @cached_property
    def mul_table(self) -> np.ndarray:
        return self._table(self.mul)

    @cached_property
    def neg_table(self) -> np.ndarray:
        return np.array([self.neg(a) for a in range(self.q)], dtype=np.int64)

    def _table(self, op) -> np.ndarray:
        if self.q > MAX_TABLE_ORDER:
            raise ValueError(f"{self} too large for lookup tables")
        t = np.empty((self.q, self.q), dtype=np.int64)
        for a in range(self.q):
            for b in range(a, self.q):
                t[a, b] = t[b, a] = op(a, b)
        return t

    def vadd(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.e == 1:
            return (a + b) % self.p
        return self.add_table[a, b]

    def vmul(self, a: np.ndarray, b) -> np.ndarray:
        if self.e == 1:
            return (a * b) % self.p
        return self.mul_table[a, b]

    def random(self, rng: np.random.Generator, size) -> np.ndarray:
        return rng.integers(0, self.q, size=size, dtype=np.int64)


@lru_cache(maxsize=None)
def field(p: int, e: int = 1) -> GF:
    """Shared field instances (lookup tables are built once per field)."""
    return GF(p, e)


def extension_degree_for(p: int, degree: int) -> int:
    """Smallest e with p**e > 2*degree and a known defining polynomial."""
    e = 1
    while p**e <= 2 * degree:
        e += 1
    if e > 1 and (p, e) not in CONWAY:
        raise ValueError(f"no extension of GF({p}) large enough for degree {degree}")
    return e


def scalar_arith(op: str, a: int, b: int | None = None, *, p: int, e: int = 1) -> int:
    """Apply one of add/sub/mul/inv/pow in GF(p^e)."""
    F = field(p, e)
    F.check(a)
    if op == "inv":
        return F.inv(a)
    if op == "pow":
        return F.pow(a, b)
    F.check(b)
    if op == "add":
        return F.add(a, b)
    if op == "sub":
        return F.sub(a, b)
    if op == "mul":
        return F.mul(a, b)
    raise ValueError(f"unknown scalar op {op!r}")
