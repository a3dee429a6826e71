import pytest

_criteria = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or (rep.when != "call" and not rep.failed):
        return
    number, title = mark.args
    _, previous = _criteria.get(number, (title, "passed"))
    state = rep.outcome if previous == "passed" else previous
    _criteria[number] = (title, state)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for number in sorted(_criteria):
        title, state = _criteria[number]
        verdict = "PASS" if state == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {number:>2}  {verdict}  {title}")
