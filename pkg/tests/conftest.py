import pytest

_LINES = []


@pytest.fixture
def acceptance_log():
    """Record one summary line per acceptance criterion."""
    def log(criterion: int, ok: bool, detail: str):
        line = f"criterion {criterion}: {'PASS' if ok else 'FAIL'}  {detail}"
        _LINES.append(line)
        print(line)
    return log


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in _LINES:
            terminalreporter.write_line(line)
