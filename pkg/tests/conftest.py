import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from contactlie import catalog  # noqa: E402

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def rng():
    return np.random.default_rng(20260101)


@pytest.fixture
def h3():
    return catalog.heisenberg(1, 1.0)


@pytest.fixture
def h3s():
    return catalog.heisenberg(1, 2.0)


@pytest.fixture
def h5():
    return catalog.heisenberg(2, 1.0)


@pytest.fixture
def a5():
    return catalog.abelian(5)


def e(n, *idx):
    v = np.zeros(n)
    for i in idx:
        v[i] += 1.0
    return v


# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[key])
