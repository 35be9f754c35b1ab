"""Canonical JSON interchange for algebras (format ``sca-v1``).

Layout: ``{"dim", "format", "kind", "labels", "p", "table"}`` with keys
sorted, UTF-8, and ``table`` a list of ``[i, j, [[k, c], ...]]`` sorted by
(i, j, k).  Every nonzero product is listed in both orders.
"""
from __future__ import annotations

import json
from pathlib import Path

from .algebra import KINDS, Algebra
from .exactmath import PRIMES

FORMAT = "sca-v1"


class FormatError(ValueError):
    """Malformed algebra file."""


def algebra_to_dict(A: Algebra) -> dict:
    table = [[i, j, [[k, c] for k, c in sorted(entries)]] for (i, j), entries in sorted(A.table.items())]
    return {
        "format": FORMAT,
        "p": A.p,
        "kind": A.kind,
        "dim": A.dim,
        "labels": [A.label(i) for i in range(A.dim)],
        "table": table,
    }


def dumps_algebra(A: Algebra) -> str:
    return json.dumps(algebra_to_dict(A), sort_keys=True, separators=(",", ":"), ensure_ascii=False) + "\n"


def save_algebra(A: Algebra, path: str | Path):
    Path(path).write_text(dumps_algebra(A), encoding="utf-8")


def _int(x, what: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise FormatError(f"{what} must be an integer, got {x!r}")
    return x


def algebra_from_dict(d) -> Algebra:
    if not isinstance(d, dict):
        raise FormatError("top level must be an object")
    if d.get("format") != FORMAT:
        raise FormatError(f"format must be {FORMAT!r}, got {d.get('format')!r}")
    missing = {"p", "kind", "dim", "labels", "table"} - d.keys()
    if missing:
        raise FormatError(f"missing keys: {', '.join(sorted(missing))}")
    p = _int(d["p"], "p")
    if p not in PRIMES:
        raise FormatError(f"p must be one of {PRIMES}")
    if d["kind"] not in KINDS:
        raise FormatError(f"kind must be one of {KINDS}")
    dim = _int(d["dim"], "dim")
    if dim < 0:
        raise FormatError("dim must be nonnegative")
    labels = d["labels"]
    if not isinstance(labels, list) or not all(isinstance(x, str) for x in labels) or len(labels) != dim:
        raise FormatError("labels must be a list of dim strings")
    if len(set(labels)) != len(labels):
        raise FormatError("labels must be distinct")
    if not isinstance(d["table"], list):
        raise FormatError("table must be a list")
    table = {}
    for entry in d["table"]:
        if not (isinstance(entry, list) and len(entry) == 3 and isinstance(entry[2], list)):
            raise FormatError(f"bad table entry {entry!r}")
        i, j = _int(entry[0], "i"), _int(entry[1], "j")
        if not (0 <= i < dim and 0 <= j < dim):
            raise FormatError(f"index pair ({i}, {j}) out of range")
        if (i, j) in table:
            raise FormatError(f"duplicate pair ({i}, {j})")
        row = []
        for kc in entry[2]:
            if not (isinstance(kc, list) and len(kc) == 2):
                raise FormatError(f"bad coefficient entry {kc!r}")
            k, c = _int(kc[0], "k"), _int(kc[1], "c")
            if not 0 <= k < dim:
                raise FormatError(f"target {k} out of range")
            if not 0 < c < p:
                raise FormatError(f"coefficient {c} is not a nonzero residue mod {p}")
            row.append((k, c))
        if len({k for k, _ in row}) != len(row):
            raise FormatError(f"repeated target in pair ({i}, {j})")
        if row:
            table[(i, j)] = tuple(sorted(row))
    return Algebra(p, dim, dict(sorted(table.items())), kind=d["kind"], labels=tuple(labels))


def loads_algebra(text: str) -> Algebra:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatError(f"invalid JSON: {e}") from None
    return algebra_from_dict(d)


def load_algebra(path: str | Path) -> Algebra:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise FormatError(f"cannot read {path}: {e.strerror}") from None
    return loads_algebra(text)
