import pytest

ACCEPTANCE = {}


@pytest.fixture
def record_acceptance(request):
    """Tests call this with (criterion number, ok) to appear in the summary."""

    def record(number, ok, detail=""):
        ACCEPTANCE[number] = (ok, detail)

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[number]
        line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}"
        terminalreporter.write_line(line + (f"  ({detail})" if detail else ""))
