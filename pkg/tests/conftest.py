import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from qcombinat import qdatum as qd  # noqa: E402


@pytest.fixture
def a2():
    return qd.QDatum.make("A2", (0, 1))


@pytest.fixture
def a2_order(a2):
    return qd.adapted_word(a2)


@pytest.fixture
def b2():
    return qd.QDatum.make("A3", (1, 0, -1), sigma="(1 3)")


@pytest.fixture
def b2_order(b2):
    return qd.adapted_word(b2)


def pytest_terminal_summary(terminalreporter):
    from acceptance_log import LINES

    if LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(LINES, key=lambda s: int(s.split()[1].rstrip("]"))):
            terminalreporter.write_line(line)
