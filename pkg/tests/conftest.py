from functools import lru_cache

import pytest

from zariski.lattice import DynkinType
from zariski.moduli import component_report

RANK19_TYPES = ["A16+A2+A1", "A16+A3", "A18+A1", "A15+A4", "A19", "A10+A9"]


@lru_cache(maxsize=None)
def cached_report(type_string):
    return component_report(DynkinType.parse(type_string))


@pytest.fixture(scope="session")
def report():
    return cached_report


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
