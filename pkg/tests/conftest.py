"""Collects per-criterion outcomes from tests marked ``criterion`` and prints one
line per criterion at the end of the session."""
from collections import defaultdict

import pytest

_RESULTS: dict = defaultdict(list)
_TITLES: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion number and title")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    n, title = mark.args
    _TITLES[n] = title
    if report.when == "call" or (report.when == "setup" and not report.passed):
        _RESULTS[n].append(report.passed)


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_RESULTS):
        status = "PASS" if all(_RESULTS[n]) else "FAIL"
        terminalreporter.write_line(f"criterion {n:2d}: {status}  {_TITLES[n]}")
