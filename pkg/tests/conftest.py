from __future__ import annotations

import json
import pathlib

import pytest

FROZEN = pathlib.Path(__file__).parent / "oracles" / "frozen.json"


@pytest.fixture(scope="session")
def frozen():
    """Reference values computed by ``oracles/make_oracles.py`` (sympy/mpmath)."""
    return json.loads(FROZEN.read_text())


_ACCEPTANCE: dict = {}


@pytest.fixture
def acceptance(request):
    """Record the outcome line of one acceptance criterion."""

    def record(number: int, ok: bool, detail: str):
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        _ACCEPTANCE[number] = line
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        terminalreporter.write_line(_ACCEPTANCE[number])
