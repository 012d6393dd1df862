import pytest

_ACCEPTANCE: list[tuple[int, str, bool, str]] = []


@pytest.fixture
def record():
    """Log one acceptance criterion; the summary is printed at session end."""

    def _record(number: int, name: str, ok: bool, detail: str) -> bool:
        _ACCEPTANCE.append((number, name, bool(ok), detail))
        return ok

    return _record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, name, ok, detail in sorted(_ACCEPTANCE):
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {number}. {name}: {detail}")
