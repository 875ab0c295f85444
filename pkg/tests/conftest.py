import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_outcomes = {}


def pytest_configure(config):
    config.addinivalue_line(
        "markers",
        "acceptance(label): marks a test as one acceptance criterion; "
        "the label is echoed with PASS/FAIL in the terminal summary",
    )


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    label = marker.args[0]
    if report.when == "call":
        _outcomes[label] = report.passed
    elif not report.passed:
        # setup or teardown blew up; the criterion did not pass
        _outcomes[label] = False


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_outcomes):
        verdict = "PASS" if _outcomes[label] else "FAIL"
        terminalreporter.write_line(f"[{verdict}] {label}")
