import math
from itertools import combinations_with_replacement

import pytest

from ghgd import Instance

# lines appended by tests/test_acceptance.py, echoed after the run
ACCEPTANCE_LINES = []


def small_family(max_n=6, max_T=4, max_configs=10**6):
    """Every instance with n <= max_n, 2 <= T <= max_T, up to reordering of m."""
    out = []
    for n in range(1, max_n + 1):
        for T in range(2, max_T + 1):
            for m in combinations_with_replacement(range(n + 1), T):
                if math.prod(math.comb(n, mi) for mi in m) <= max_configs:
                    out.append(Instance(n, m))
    return out


@pytest.fixture(scope="session")
def family():
    return small_family()


@pytest.fixture(scope="session")
def tiny_family():
    return small_family(max_n=4, max_T=3)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
