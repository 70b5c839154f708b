import re

_ACCEPTANCE_RESULTS = {}


def pytest_runtest_logreport(report):
    if report.when != "call" or "test_acceptance" not in report.nodeid:
        return
    match = re.search(r"test_criterion_(\d+)_(\w+)", report.nodeid)
    if match:
        number = int(match.group(1))
        label = match.group(2).replace("_", " ")
        _ACCEPTANCE_RESULTS[number] = (label, report.outcome)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE_RESULTS):
        label, outcome = _ACCEPTANCE_RESULTS[number]
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {number} ({label}): {status}")
