import pytest

from lssa import LSSA_STIFFNESS

ACCEPTANCE_LINES = []


@pytest.fixture
def report():
    """Record one acceptance verdict line, printed in the terminal summary."""
    def _report(criterion, passed, detail):
        ACCEPTANCE_LINES.append(f"criterion {criterion}: {'PASS' if passed else 'FAIL'}  {detail}")
    return _report


@pytest.fixture
def stiffness():
    return LSSA_STIFFNESS


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
