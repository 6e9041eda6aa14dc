import pytest

from tclpulse import _core

_ACCEPTANCE_LINES = []


@pytest.fixture(params=sorted(_core.backends()))
def backend(request):
    return _core.backends()[request.param]


@pytest.fixture
def report():
    """Record a one-line acceptance verdict; printed in the terminal summary."""
    def _report(criterion, ok, detail):
        _ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] criterion {criterion}: {detail}")
        print(_ACCEPTANCE_LINES[-1])
        return ok
    return _report


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
