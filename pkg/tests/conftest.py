import pytest

_LINES: list[str] = []


@pytest.fixture
def acceptance():
    """Record one pass/fail line for the end-of-session acceptance report."""

    def record(criterion: int, ok: bool, detail: str) -> bool:
        _LINES.append(f"[{'PASS' if ok else 'FAIL'}] criterion {criterion}: {detail}")
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_LINES, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
