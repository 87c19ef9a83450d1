import numpy as np
import pytest

from efimov_tms.config import geometric_grid

ACCEPTANCE_LINES = {}


@pytest.fixture(scope="session")
def pgrid():
    return geometric_grid()


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
