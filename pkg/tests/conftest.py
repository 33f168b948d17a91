import numpy as np
import pytest

from sqrtjacobi.io import MatrixSpec, generate_symmetric

WORKED = np.array([[1.0, 0.0, 2.0], [0.0, 3.0, 0.0], [2.0, 0.0, 4.0]])

_criteria: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion check")


@pytest.fixture
def worked():
    return WORKED.copy()


@pytest.fixture
def worked_file(tmp_path):
    path = tmp_path / "worked.mtx"
    path.write_text(
        "%%MatrixMarket matrix coordinate real symmetric\n"
        "3 3 4\n"
        "1 1 1\n"
        "3 1 2\n"
        "2 2 3\n"
        "3 3 4\n"
    )
    return path


@pytest.fixture
def gap_one_matrix():
    return generate_symmetric(MatrixSpec(6, spectrum=[6, 5, 4, 3, 2, 1], seed=7))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or report.when not in ("setup", "call"):
        return
    number, title = marker.args
    entry = _criteria.setdefault(number, {"title": title, "passed": True, "ran": False})
    if report.when == "call":
        entry["ran"] = True
    if report.failed:
        entry["passed"] = False


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        entry = _criteria[number]
        status = "PASS" if entry["passed"] and entry["ran"] else "FAIL"
        terminalreporter.write_line(f"criterion {number}: {status}  {entry['title']}")
