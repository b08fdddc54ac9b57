import pytest

_LINES: list[tuple[str, str, str]] = []


@pytest.fixture
def criterion():
    """``criterion(key, label, ok, detail="")`` records one acceptance line
    and fails the test when ``ok`` is false."""

    def record(key, label, ok, detail=""):
        _LINES.append((key, label, "PASS" if ok else "FAIL", detail))
        print(f"criterion {key}: {'PASS' if ok else 'FAIL'} {label}{' ' + detail if detail else ''}")
        assert ok, f"criterion {key} failed: {label} {detail}"

    return record


def pytest_terminal_summary(terminalreporter):
    if not _LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key, label, status, detail in _LINES:
        terminalreporter.write_line(f"criterion {key}: {status} {label}{' (' + detail + ')' if detail else ''}")
