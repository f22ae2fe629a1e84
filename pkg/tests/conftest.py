import numpy as np
import pytest

ACCEPTANCE_RESULTS: dict[str, str] = {}


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    marker = "test_acceptance.py::"
    if marker in report.nodeid:
        name = report.nodeid.split(marker, 1)[1]
        ACCEPTANCE_RESULTS[name] = "PASS" if report.passed else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, status in ACCEPTANCE_RESULTS.items():
        terminalreporter.write_line(f"{status}  {name}")
