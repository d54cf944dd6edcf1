import pytest

_CRITERIA = {}


@pytest.fixture
def criterion():
    """Record one acceptance outcome; returns whether it passed."""

    def record(number, title, value, bound):
        passed = bool(value < bound)
        line = f"[{'PASS' if passed else 'FAIL'}] criterion {number:>2}: {title}: {value:.3e} < {bound:.0e}"
        _CRITERIA.setdefault(number, []).append((passed, line))
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        for _, line in _CRITERIA[number]:
            terminalreporter.write_line(line)
