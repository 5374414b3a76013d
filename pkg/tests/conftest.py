import logging

import pytest

_criteria = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or report.when != "call":
        return
    doc = (item.function.__doc__ or item.name).strip().splitlines()[0]
    _criteria.append((marker.args[0], doc, report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number, doc, outcome in sorted(_criteria):
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {number:>2}: {verdict}  {doc}")


@pytest.fixture(autouse=True)
def _quiet_zero_columns(caplog):
    caplog.set_level(logging.ERROR, logger="mub.matrix")
