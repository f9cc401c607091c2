from __future__ import annotations

import pytest

from relroots import survey
from relroots.multigraph import GraphClass

_CRITERIA: dict[str, tuple[bool, str]] = {}


def record_criterion(name: str, passed: bool, detail: str = "") -> None:
    _CRITERIA[name] = (passed, detail)


@pytest.fixture(scope="session")
def criterion():
    return record_criterion


@pytest.fixture(scope="session")
def censuses():
    """Connected simple census records for orders 1..8, computed once."""
    out = {}
    for n in range(1, 9):
        out[n] = survey.run_census(n, GraphClass.CONNECTED)
    return out


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_CRITERIA, key=lambda s: int(s.split()[0])):
        ok, detail = _CRITERIA[name]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {name}  {detail}")
