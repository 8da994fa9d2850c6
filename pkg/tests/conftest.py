import os
import sys

import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from orderdensity.ff import field_new  # noqa: E402
from orderdensity.profile import profile_new  # noqa: E402

# filled by the acceptance suite, one line per criterion
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip("]"))):
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def F2():
    return field_new(2)


@pytest.fixture(scope="session")
def F3():
    return field_new(3)


@pytest.fixture(scope="session")
def F4():
    return field_new(2, 2)


@pytest.fixture(scope="session")
def F5():
    return field_new(5)


@pytest.fixture
def prof_3T2(F3):
    return profile_new(F3, "T", 2)


@pytest.fixture
def prof_2T3(F2):
    return profile_new(F2, "T", 3)
