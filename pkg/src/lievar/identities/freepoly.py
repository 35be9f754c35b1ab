"""Elements of free nonassociative / associative algebras and their text form.

A term is a binary bracketing tree: an ``int`` leaf (variable index) or a
pair ``(left, right)``.  Juxtaposition in text is the left-normed product,
so ``x1 x2 x3`` is ``((x1 x2) x3)`` and ``x1 x2^3`` is ``((x1 x2) x2) x2``.
Associative polynomials keep every term as the left-normed chain of its
word, which makes bracketing irrelevant.

Grammar::

    poly   := ['+'|'-'] term (('+'|'-') term)*  |  '0'
    term   := [int '*'] factor+
    factor := atom ['^' nat]
    atom   := variable | '(' poly ')'
"""
from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from typing import Iterator, Mapping, Union

Term = Union[int, tuple]
POLY_KINDS = ("lie", "assoc")


class ParseError(ValueError):
    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos


def _name_key(name: str):
    m = re.fullmatch(r"([A-Za-z_]+)(\d*)", name)
    return (m.group(1), int(m.group(2)) if m.group(2) else -1)


def leaves(t: Term) -> list:
    if isinstance(t, tuple):
        return leaves(t[0]) + leaves(t[1])
    return [t]


def left_factors(t: Term) -> list:
    """Factors of the left-normed reading of ``t``: ((a b) c) -> [a, b, c]."""
    out = []
    while isinstance(t, tuple):
        out.append(t[1])
        t = t[0]
    out.append(t)
    return out[::-1]


def chain(items) -> Term:
    items = list(items)
    t = items[0]
    for x in items[1:]:
        t = (t, x)
    return t


def term_key(t: Term):
    if isinstance(t, tuple):
        return (1, term_key(t[0]), term_key(t[1]))
    return (0, t)


def _relabel(t, mapping):
    if isinstance(t, tuple):
        return (_relabel(t[0], mapping), _relabel(t[1], mapping))
    return mapping[t]


@dataclass(frozen=True)
class FreePoly:
    """Formal linear combination of bracketing trees over named variables."""

    p: int
    names: tuple[str, ...]
    terms: tuple[tuple[Term, int], ...]
    kind: str = "lie"

    @classmethod
    def from_named(cls, p: int, named: Mapping[Term, int], kind: str = "lie") -> "FreePoly":
        """Canonical polynomial from a {tree with str leaves: coefficient} map."""
        if kind not in POLY_KINDS:
            raise ValueError(f"unknown polynomial kind {kind!r}")
        names = sorted({x for t in named for x in leaves(t)}, key=_name_key)
        index = {x: i for i, x in enumerate(names)}
        acc: dict[Term, int] = {}
        for t, c in named.items():
            t = _relabel(t, index)
            if kind == "assoc":
                t = chain(leaves(t))
            acc[t] = (acc.get(t, 0) + c) % p
        terms = sorted(((t, c) for t, c in acc.items() if c), key=lambda tc: (len(leaves(tc[0])), term_key(tc[0])))
        used = sorted({x for t, _ in terms for x in leaves(t)})
        if used != list(range(len(used))):
            # cancelled terms removed some variables: re-index densely
            return cls.from_named(p, {_relabel(t, names): c for t, c in terms}, kind)
        return cls(p, tuple(names) if terms else (), tuple(terms), kind)

    @property
    def nvars(self) -> int:
        return len(self.names)

    def is_zero(self) -> bool:
        return not self.terms

    def term_degrees(self) -> list[Counter]:
        return [Counter(leaves(t)) for t, _ in self.terms]

    def multidegree(self) -> tuple[int, ...] | None:
        """Per-variable degrees if every term shares them, else None."""
        degs = {tuple(d.get(i, 0) for i in range(self.nvars)) for d in self.term_degrees()}
        return degs.pop() if len(degs) == 1 else None

    def is_multihomogeneous(self) -> bool:
        return self.is_zero() or self.multidegree() is not None

    def is_multilinear(self) -> bool:
        return all(set(d.values()) <= {1} and len(d) == self.nvars for d in self.term_degrees())

    def degree(self) -> int:
        return max((len(leaves(t)) for t, _ in self.terms), default=0)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for t, c in self.terms:
            body = self._fmt(t)
            parts.append(body if c == 1 else f"{c}*{body}")
        return " + ".join(parts)

    def _fmt(self, t: Term) -> str:
        factors = left_factors(t)
        out = []
        i = 0
        while i < len(factors):
            j = i
            while j + 1 < len(factors) and factors[j + 1] == factors[i]:
                j += 1
            f = factors[i]
            atom = self.names[f] if not isinstance(f, tuple) else f"({self._fmt(f)})"
            out.append(atom if j == i else f"{atom}^{j - i + 1}")
            i = j + 1
        return " ".join(out)


_TOKEN = re.compile(r"(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S)")


def _tokens(text: str) -> Iterator[tuple[str, str, int]]:
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos == len(text):
            break
        m = _TOKEN.match(text, pos)
        if m.group(1):
            yield ("int", m.group(1), pos)
        elif m.group(2):
            yield ("var", m.group(2), pos)
        elif m.group(3) in "+-*^()":
            yield (m.group(3), m.group(3), pos)
        else:
            raise ParseError(f"unknown token {m.group(3)!r}", pos)
        pos = m.end()
    yield ("end", "", len(text))


class _Parser:
    def __init__(self, text: str, p: int, kind: str):
        self.toks = list(_tokens(text))
        self.i = 0
        self.p = p
        self.kind = kind

    def peek(self):
        return self.toks[self.i]

    def take(self, typ=None):
        tok = self.toks[self.i]
        if typ is not None and tok[0] != typ:
            raise ParseError(f"expected {typ}, found {tok[1] or 'end of input'!r}", tok[2])
        self.i += 1
        return tok

    def product(self, f: dict, g: dict) -> dict:
        out: dict = {}
        for s, a in f.items():
            for t, b in g.items():
                key = (s, t)
                out[key] = (out.get(key, 0) + a * b) % self.p
        return {k: v for k, v in out.items() if v}

    def poly(self) -> dict:
        sign = 1
        if self.peek()[0] in "+-":
            sign = -1 if self.take()[0] == "-" else 1
        acc: dict = {}
        while True:
            for t, c in self.term().items():
                acc[t] = (acc.get(t, 0) + sign * c) % self.p
            if self.peek()[0] in ("+", "-"):
                sign = -1 if self.take()[0] == "-" else 1
                continue
            return {k: v for k, v in acc.items() if v}

    def term(self) -> dict:
        coeff = 1
        if self.peek()[0] == "int":
            tok = self.take()
            if self.peek()[0] != "*":
                raise ParseError("a coefficient must be followed by '*'", self.peek()[2])
            self.take("*")
            coeff = int(tok[1]) % self.p
        factors = []
        while self.peek()[0] in ("var", "("):
            factors.extend(self.factor())
        if not factors:
            tok = self.peek()
            raise ParseError(f"expected a variable or '(', found {tok[1] or 'end of input'!r}", tok[2])
        acc = factors[0]
        for f in factors[1:]:
            acc = self.product(acc, f)
        return {t: c * coeff % self.p for t, c in acc.items() if c * coeff % self.p}

    def factor(self) -> list[dict]:
        base = self.atom()
        if self.peek()[0] == "^":
            self.take("^")
            tok = self.take("int")
            e = int(tok[1])
            if e == 0:
                raise ParseError("exponent must be positive", tok[2])
            return [base] * e
        return [base]

    def atom(self) -> dict:
        tok = self.peek()
        if tok[0] == "var":
            self.take()
            return {tok[1]: 1}
        self.take("(")
        inner = self.poly()
        self.take(")")
        return inner


def parse_poly(text: str, p: int, kind: str = "lie") -> FreePoly:
    """Parse the left-normed text notation into a canonical FreePoly."""
    if text.strip() == "0":
        return FreePoly(p, (), (), kind)
    parser = _Parser(text, p, kind)
    named = parser.poly()
    tok = parser.peek()
    if tok[0] != "end":
        raise ParseError(f"unexpected {tok[1]!r}", tok[2])
    return FreePoly.from_named(p, named, kind)


IDENTITY_NAMES = ("eq1", "eq2", "eq3", "eq4", "r4v", "r4w", "r5v", "r5w")


def identity_text(name: str, p: int, k: int | None = None) -> tuple[str, str]:
    """Text and polynomial kind of one of the named identities."""
    if (name == "eq4") != (k is not None):
        raise ValueError("k is required for eq4 and only for eq4")
    if name == "eq1":
        pairs = "".join(f"(x{2 * i + 1} x{2 * i + 2})" for i in range(p))
        return f"{pairs} x{2 * p + 1}", "lie"
    if name == "eq2":
        return "((x1 x2)(x3 x4))((x5 x6)(x7 x8))", "lie"
    if name == "eq3":
        return f"x1 x2^{p * p + 2}", "lie"
    if name == "eq4":
        if k < 1:
            raise ValueError("k must be positive")
        word = " ".join(f"x{i}" for i in range(1, k + 3))
        return f"({word})(x1 x2)^{p - 1}", "lie"
    if name in ("r4v", "r4w"):
        inner, last = (p, p**3) if name == "r4v" else (p * p, p)
        ys = " ".join(f"y{i}^{inner}" for i in range(p + 1))
        return f"x1 x2 {ys} y{p + 1}^{last}", "lie"
    if name == "r5v":
        xs = " ".join(f"x{i}" for i in range(p + 1))
        return f"{xs} y^{p * p}", "assoc"
    if name == "r5w":
        xs = " ".join(f"x{i}" for i in range(p + 1))
        return f"({xs})^{p} y", "assoc"
    raise ValueError(f"unknown identity {name!r}; expected one of {IDENTITY_NAMES}")


def paper_identity(name: str, p: int, k: int | None = None) -> FreePoly:
    text, kind = identity_text(name, p, k)
    return parse_poly(text, p, kind)
