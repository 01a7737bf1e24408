"""Prints one PASS/FAIL line per acceptance criterion after the run."""

import re

_results = {}


def pytest_runtest_logreport(report):
    m = re.search(r"test_acceptance\.py::test_criterion_(\d+)", report.nodeid)
    if not m:
        return
    crit = int(m.group(1))
    if report.when == "call":
        _results[crit] = "PASS" if report.passed else "FAIL"
    elif report.when == "setup" and report.failed:
        _results[crit] = "ERROR"


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for crit in sorted(_results):
        terminalreporter.write_line(f"criterion {crit:2d}: {_results[crit]}")
