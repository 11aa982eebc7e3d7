import pytest

_ACCEPTANCE = []


@pytest.fixture
def report():
    """Record one summary line per acceptance criterion."""

    def add(criterion, status, detail):
        _ACCEPTANCE.append(f"[{status}] {criterion}: {detail}")

    return add


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE:
            terminalreporter.write_line(line)
