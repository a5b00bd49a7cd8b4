import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

ACCEPTANCE_LINES: list[str] = []


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: optional long-running tier (set COVOLLAB_SLOW=1)")


def pytest_collection_modifyitems(config, items):
    if os.environ.get("COVOLLAB_SLOW"):
        return
    skip = pytest.mark.skip(reason="optional tier; set COVOLLAB_SLOW=1 to run")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
