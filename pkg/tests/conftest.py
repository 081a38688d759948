import itertools

import pytest

from dsirr.packet import ExperimentConfig

# (gamma, t, tau) grid shared by the oracle comparisons
GRID = list(itertools.product((-1.0, 0.0, 1.0), (0.3, 1.0), (5.0, 18.0)))

_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def neutron():
    return ExperimentConfig()


@pytest.fixture(scope="session")
def acceptance_log():
    return _ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
