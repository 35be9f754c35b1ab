"""Machine-readable verification reports."""
from __future__ import annotations

import json
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__

STATUSES = ("verified", "refuted", "probably-verified", "skipped")


@dataclass
class Claim:
    claim_id: str
    description: str
    method: str
    status: str
    expected: str | None = "verified"
    witness: dict | None = None
    dims: dict | None = None
    details: dict = field(default_factory=dict)
    elapsed_ms: int | None = None

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")
        if self.status == "refuted" and self.witness is None:
            raise ValueError(f"refuted claim {self.claim_id} needs a witness")

    @property
    def matches(self) -> bool:
        """Status agrees with the expected status (None = nothing expected)."""
        if self.expected is None or self.status == "skipped":
            return True
        if self.expected == "verified":
            return self.status in ("verified", "probably-verified")
        return self.status == self.expected

    def as_dict(self, timings: bool = False) -> dict:
        d = {
            "claim_id": self.claim_id,
            "description": self.description,
            "method": self.method,
            "status": self.status,
            "expected": self.expected,
            "matches": self.matches,
        }
        if self.witness is not None:
            d["witness"] = self.witness
        if self.dims is not None:
            d["dims"] = self.dims
        if self.details:
            d["details"] = self.details
        if timings and self.elapsed_ms is not None:
            d["elapsed_ms"] = self.elapsed_ms
        return d


@dataclass
class Report:
    command: str
    parameters: dict
    claims: list[Claim] = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    def add(self, claim: Claim) -> Claim:
        self.claims.append(claim)
        return claim

    def claim(self, claim_id: str) -> Claim:
        for c in self.claims:
            if c.claim_id == claim_id:
                return c
        raise KeyError(claim_id)

    @property
    def ok(self) -> bool:
        return all(c.matches for c in self.claims)

    @property
    def exit_code(self) -> int:
        return 0 if self.ok else 1

    def counts(self) -> dict[str, int]:
        out = {s: 0 for s in STATUSES}
        for c in self.claims:
            out[c.status] += 1
        return out

    def as_dict(self, timings: bool = False) -> dict:
        d = {
            "tool": "lievar",
            "version": __version__,
            "command": self.command,
            "parameters": self.parameters,
            "claims": [c.as_dict(timings) for c in self.claims],
            "summary": {
                "claims": len(self.claims),
                "statuses": self.counts(),
                "mismatches": [c.claim_id for c in self.claims if not c.matches],
                "exit_code": self.exit_code,
            },
        }
        d.update(self.extra)
        return d

    def to_json(self, timings: bool = False) -> str:
        return json.dumps(self.as_dict(timings), sort_keys=True, indent=2, ensure_ascii=False) + "\n"

    def write(self, path: str | Path, timings: bool = False):
        Path(path).write_text(self.to_json(timings), encoding="utf-8")

    def summary_lines(self) -> list[str]:
        lines = []
        for c in self.claims:
            mark = "ok " if c.matches else "BAD"
            exp = "" if c.expected in (None, "verified") or c.status == "skipped" else f" (expected {c.expected})"
            line = f"[{mark}] {c.claim_id}: {c.status}{exp}  {c.description}"
            scalars = {k: v for k, v in (c.dims or {}).items() if isinstance(v, int)}
            if scalars:
                line += "  [" + " ".join(f"{k}={v}" for k, v in scalars.items()) + "]"
            lines.append(line)
        counts = ", ".join(f"{v} {k}" for k, v in self.counts().items() if v)
        lines.append(f"{len(self.claims)} claims: {counts}; exit {self.exit_code}")
        return lines


@contextmanager
def stopwatch():
    """Yields a one-element list that receives the elapsed milliseconds."""
    box = [0]
    t0 = time.perf_counter()
    try:
        yield box
    finally:
        box[0] = int(round((time.perf_counter() - t0) * 1000))
