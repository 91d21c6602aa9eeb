import pytest

_verdicts = pytest.StashKey[list]()


@pytest.fixture
def verdict(request):
    """Record one acceptance line and fail the test when ``ok`` is false."""
    lines = request.config.stash.setdefault(_verdicts, [])

    def record(name, ok, detail=""):
        line = f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}"
        lines.append(line)
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_verdicts, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
