import functools

import pytest

from parallelohedra import Census, get
from parallelohedra.harness import analyze


@functools.lru_cache(maxsize=None)
def census_of(name):
    return Census(get(name).to_lattice())


@functools.lru_cache(maxsize=None)
def report_of(name):
    return analyze(get(name))


@pytest.fixture(scope="session")
def census():
    return census_of


@pytest.fixture(scope="session")
def report():
    return report_of


@pytest.fixture(scope="session")
def fixtures_dir():
    from pathlib import Path

    return Path(__file__).parent / "fixtures"


@functools.lru_cache(maxsize=None)
def audit_of(name):
    from parallelohedra import audit

    return audit(census_of(name))


@pytest.fixture(scope="session")
def audited():
    return audit_of


ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[k])
