from functools import lru_cache

import pytest

from qfclique.algebra import make_field, make_residue_ring
from qfclique.verify import run_suite

# (criterion, passed, detail) lines collected by tests/test_acceptance.py
ACCEPTANCE_LINES: list[tuple[int, bool, str]] = []


@pytest.fixture(scope="session")
def gf():
    return make_field


@pytest.fixture(scope="session")
def zmod():
    return make_residue_ring


@lru_cache(maxsize=None)
def cached_suite(name: str):
    """Records and runtime of a verification sweep, computed once per session."""
    return run_suite(name, workers=1)


@pytest.fixture(scope="session")
def suite():
    return cached_suite


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for num, ok, detail in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
