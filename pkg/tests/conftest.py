import pytest

_LINES: dict[str, str] = {}


@pytest.fixture
def criterion():
    """Record the one-line verdict of an acceptance criterion."""

    def record(key: str, passed: bool, detail: str) -> bool:
        _LINES[key] = f"criterion {key}: {'PASS' if passed else 'FAIL'}  {detail}"
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not _LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_LINES, key=lambda k: (int(k.rstrip("ab")), k)):
        terminalreporter.write_line(_LINES[key])
