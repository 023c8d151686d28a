import pytest

_CRITERIA = {}


@pytest.fixture
def criterion(request):
    """Record one acceptance line; call with (number, title, ok, detail)."""
    def record(number, title, ok, detail=""):
        _CRITERIA[number] = (title, bool(ok), detail)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        title, ok, detail = _CRITERIA[number]
        status = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"[{status}] criterion {number}: {title} {detail}".rstrip())
