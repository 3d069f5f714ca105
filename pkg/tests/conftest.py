import pytest

from arealaw import harness


@pytest.fixture(scope="session")
def sweep_d1():
    return harness.run_sweep(harness.standard_sweeps()["d1"])


@pytest.fixture(scope="session")
def sweep_d2():
    return harness.run_sweep(harness.standard_sweeps()["d2"])


ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture
def acceptance():
    """Record one summary line per acceptance criterion."""

    def report(number, passed, detail):
        ACCEPTANCE_LINES[number] = f"[{'PASS' if passed else 'FAIL'}] criterion {number}: {detail}"
        return passed

    return report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for key in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[key])
