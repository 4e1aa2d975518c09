import pytest

from cartanlab.scalar import Chart
from cartanlab.sexpr import loads_one

ACCEPTANCE_LINES: list[str] = []


def C(text: str, n: int = 2):
    """Parse ``text`` on the complex chart of dimension ``n``."""
    return loads_one(text, Chart.complex(n))


def R(text: str, m: int = 3):
    return loads_one(text, Chart.real(m))


@pytest.fixture
def c2():
    return Chart.complex(2)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
