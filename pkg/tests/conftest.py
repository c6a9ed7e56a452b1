import pytest

_outcomes: dict[int, tuple[str, str]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, text = marker.args
    failed = report.failed
    if report.when == "call" or failed:
        prev = _outcomes.get(number, ("PASS", text))[0]
        _outcomes[number] = ("FAIL" if failed or prev == "FAIL" else "PASS", text)
    elif report.skipped:
        _outcomes[number] = ("SKIP", text)


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_outcomes):
        status, text = _outcomes[number]
        terminalreporter.write_line(f"[{status}] criterion {number:2d}: {text}")
