import pytest

from ramellin import primes

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def tables_1e6():
    return primes.cached_tables(10**6)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
