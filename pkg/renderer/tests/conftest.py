import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

import synth  # noqa: E402

GOLDEN_DIR = Path(__file__).parent / "golden"

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


@pytest.fixture()
def grid_csv(tmp_path):
    return synth.write_grid_csv(tmp_path / "grid.csv")


@pytest.fixture()
def ridge_csv(tmp_path):
    return synth.write_ridge_csv(tmp_path / "ridge.csv")


@pytest.fixture()
def ridge_meta(tmp_path):
    return synth.write_ridge_meta(tmp_path / "ridge_meta.json")
