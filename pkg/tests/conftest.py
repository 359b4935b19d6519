import os

import pytest

ACCEPTANCE_LINES = []

CATALOG_ROWS = ("J1", "J1a", "J2", "J3", "S", "Sa")


@pytest.fixture(scope="session")
def catalog():
    from transmon3d.catalog import load_catalog

    return {r.id: r for r in load_catalog()}


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running statistical checks")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
