import pytest

from fspp import Granularity

# criterion number -> (title, outcome, detail)
_criteria: dict[int, tuple[str, str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or report.when != "call":
        return
    number, title = marker.args
    detail = "; ".join(str(v) for k, v in item.user_properties if k == "detail")
    _criteria[number] = (title, "PASS" if report.passed else "FAIL", detail)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        title, status, detail = _criteria[number]
        line = f"{status} criterion {number:2d}: {title}"
        terminalreporter.write_line(f"{line} ({detail})" if detail else line)


@pytest.fixture
def g18():
    return Granularity(18, 20)


@pytest.fixture
def g_small():
    """8 sectors, 5 bands of width 2, 4, 8, ... metres."""
    return Granularity(8, 5, 1.0, 2.0)
