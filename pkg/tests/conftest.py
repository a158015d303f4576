import pytest

ACCEPTANCE_LINES = []


@pytest.fixture
def record_acceptance():
    def _record(line):
        ACCEPTANCE_LINES.append(line)
        print(line, flush=True)

    return _record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
