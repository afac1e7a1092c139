from functools import lru_cache

import pytest

from ktrees.enumeration import count_refined, enumerate_knoncrossing, enumerate_kplane

# criterion number -> (description, passed); filled by test_acceptance.py
ACCEPTANCE: dict[int, tuple[str, bool]] = {}


@lru_cache(maxsize=None)
def plane_trees(k, n):
    return tuple(enumerate_kplane(k, n))


@lru_cache(maxsize=None)
def nc_trees(k, n):
    return tuple(enumerate_knoncrossing(k, n))


@lru_cache(maxsize=None)
def plane_refined(k, n):
    return count_refined(plane_trees(k, n), k)


@lru_cache(maxsize=None)
def nc_refined(k, n):
    return count_refined(nc_trees(k, n), k)


@pytest.fixture
def oracle():
    class Oracle:
        plane = staticmethod(plane_trees)
        nc = staticmethod(nc_trees)
        plane_counts = staticmethod(plane_refined)
        nc_counts = staticmethod(nc_refined)
    return Oracle


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        description, passed = ACCEPTANCE[number]
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'} [{number:2d}] {description}")
