import sys

import mpmath
import pytest


@pytest.fixture(autouse=True)
def working_precision():
    """Unit tests run at 60 digits unless a test raises it itself."""
    with mpmath.workdps(60):
        yield


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for res in sorted(results, key=lambda r: r.number):
        terminalreporter.write_line(res.line())
        for d in res.details:
            terminalreporter.write_line("    " + d)
