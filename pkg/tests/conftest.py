import pytest

_LINES = pytest.StashKey[list]()


@pytest.fixture
def criterion(request):
    """report(k, ok, detail): record a one-line verdict and assert it."""
    lines = request.config.stash.setdefault(_LINES, [])

    def report(k, ok, detail):
        line = f"criterion {k}: {'PASS' if ok else 'FAIL'} - {detail}"
        lines.append(line)
        print(line)
        assert ok, line

    return report


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_LINES, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
