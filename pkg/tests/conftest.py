import pytest

_LINES = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_LINES] = []


@pytest.fixture
def criterion(request):
    """Record a one-line PASS/FAIL verdict, shown again in the terminal summary."""
    lines = request.config.stash[_LINES]

    def record(number, title, failures, detail=""):
        verdict = "PASS" if not failures else "FAIL"
        line = f"criterion {number}: {verdict}  {title}"
        if detail:
            line += f"  ({detail})"
        for failure in failures[:5]:
            line += f"\n    {failure}"
        if len(failures) > 5:
            line += f"\n    ... {len(failures) - 5} more"
        print(line)
        lines.append((number, line))
        assert not failures, line

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_LINES, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
