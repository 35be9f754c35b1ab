from __future__ import annotations

import os
from contextlib import contextmanager

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "repro",
    derandomize=True,
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "repro"))

_ACCEPTANCE: dict[int, tuple[str, str, str]] = {}


class _Record:
    def __init__(self):
        self.notes: list[str] = []

    def note(self, text: str):
        self.notes.append(text)


@pytest.fixture
def criterion():
    """Context manager recording one acceptance criterion as PASS or FAIL."""

    @contextmanager
    def run(number: int, title: str):
        rec = _Record()
        try:
            yield rec
        except BaseException as e:
            msg = "; ".join(rec.notes + [f"{type(e).__name__}: {e}".splitlines()[0]])
            _ACCEPTANCE[number] = ("FAIL", title, msg)
            raise
        _ACCEPTANCE[number] = ("PASS", title, "; ".join(rec.notes))

    return run


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        status, title, detail = _ACCEPTANCE[number]
        line = f"criterion {number:>2} {status}: {title}"
        if detail:
            line += f" -- {detail}"
        terminalreporter.write_line(line)
