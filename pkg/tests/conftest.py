import pytest

from hyperpi.catalog import builtin_text, parse_catalog

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def builtin():
    return parse_catalog(builtin_text())


@pytest.fixture(scope="session")
def eq6(builtin):
    return builtin.transformations["eq6"]


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
