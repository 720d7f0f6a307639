import pytest

_CRITERIA: dict[int, list] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion n")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when != "call" and not (rep.when == "setup" and rep.failed):
        return
    n, title = mark.args
    entry = _CRITERIA.setdefault(n, [title, True, []])
    if not rep.passed:
        entry[1] = False
        entry[2].append(item.name)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        title, ok, failed = _CRITERIA[n]
        line = f"{'PASS' if ok else 'FAIL'} criterion {n}: {title}"
        if failed:
            line += f"  [failed: {', '.join(failed)}]"
        terminalreporter.write_line(line)
