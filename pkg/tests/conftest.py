ACCEPTANCE_FILE = "test_acceptance.py"

_results: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if ACCEPTANCE_FILE in report.nodeid and report.when == "call":
        _results[report.nodeid.split("::")[-1]] = report.outcome.upper()


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for name, outcome in _results.items():
        terminalreporter.write_line(f"{name}: {outcome}")
