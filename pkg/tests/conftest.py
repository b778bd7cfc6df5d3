import pytest

_RESULTS = {}


def pytest_collection_modifyitems(items):
    # run acceptance criteria in numeric order, after everything else
    def key(item):
        m = item.get_closest_marker("acceptance")
        return (1, m.args[0]) if m else (0, 0)

    items.sort(key=key)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None or rep.when not in ("setup", "call"):
        return
    number, title = marker.args
    if rep.when == "call" or rep.failed:
        _RESULTS[number] = (title, "PASS" if rep.passed else "FAIL", rep.duration)


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_RESULTS):
        title, verdict, seconds = _RESULTS[number]
        terminalreporter.write_line(f"{verdict}  criterion {number}: {title} ({seconds:.2f} s)")
