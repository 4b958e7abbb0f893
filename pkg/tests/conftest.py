from __future__ import annotations

import pytest

from selbergsums.descriptor import chi4_descriptor, zeta_descriptor
from selbergsums.zeros_io import load_bundled


@pytest.fixture(scope="session")
def zeta():
    return zeta_descriptor()


@pytest.fixture(scope="session")
def chi4():
    return chi4_descriptor()


@pytest.fixture(scope="session")
def zeta_zeros():
    return load_bundled("zeta")


@pytest.fixture(scope="session")
def chi4_zeros():
    return load_bundled("lchi4")


ACCEPTANCE_LINES: dict[str, str] = {}


@pytest.fixture
def acceptance():
    """Record one summary line per acceptance criterion; printed at the end of the run."""
    def record(key: str, passed: bool, detail: str) -> None:
        line = f"criterion {key}: {'PASS' if passed else 'FAIL'}  {detail}"
        ACCEPTANCE_LINES[key] = line
        print(line)
    return record


def _order(key: str):
    head = key.rstrip("abcdefghijklmnopqrstuvwxyz")
    return int(head), key[len(head):]


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES, key=_order):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
