import json
import os

import pytest

HERE = os.path.dirname(__file__)


@pytest.fixture(scope="session")
def frozen():
    """Reference values produced once by tests/oracles/generate.py (mpmath)."""
    with open(os.path.join(HERE, "oracles", "frozen.json")) as fh:
        return json.load(fh)


def rel(a, b):
    return abs(a - b) / abs(b)


# acceptance criteria report: one line per criterion, shown without -s
_ACCEPTANCE = []


@pytest.fixture
def acceptance_report():
    def record(number, ok, detail):
        line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
        _ACCEPTANCE.append((number, line))
        print(line)
    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(_ACCEPTANCE):
        terminalreporter.write_line(line)
