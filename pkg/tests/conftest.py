import pytest

_LINES = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[_LINES] = {}


@pytest.fixture
def verdict(request):
    """``verdict(num, ok, detail)`` records one acceptance line and returns ok."""
    lines = request.config.stash[_LINES]

    def record(num, ok, detail=""):
        line = "criterion %d: %s  %s" % (num, "PASS" if ok else "FAIL", detail)
        lines[num] = line
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_LINES, {})
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(lines):
        terminalreporter.write_line(lines[num])
