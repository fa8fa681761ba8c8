import pytest

from hocat.presentation import build
from hocat.presets import random_presentations

ACCEPTANCE = []


def record(number, ok, summary):
    ACCEPTANCE.append((number, ok, summary))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, ok, summary in sorted(ACCEPTANCE):
        terminalreporter.write_line(f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {summary}")


@pytest.fixture(scope="session")
def set_suite():
    return random_presentations("finset", 25, seed=0)


@pytest.fixture(scope="session")
def chain_suite():
    return random_presentations("chainQ", 10, seed=0)


@pytest.fixture(scope="session")
def built_suites(set_suite, chain_suite):
    """Every presentation of both suites built at stage 3."""
    return [build(data, 3) for data in set_suite + chain_suite]
