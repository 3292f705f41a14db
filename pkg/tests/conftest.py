import pytest

_verdicts: dict[str, tuple[str, bool, str]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None or rep.when not in ("setup", "call"):
        return
    if rep.when == "setup" and rep.passed:
        return
    key, title = marker.args
    detail = ""
    if rep.failed:
        detail = str(rep.longrepr.reprcrash.message if hasattr(rep.longrepr, "reprcrash") else rep.longrepr)
        detail = detail.splitlines()[0][:160] if detail else ""
    _verdicts[key] = (title, rep.passed, detail)


def pytest_terminal_summary(terminalreporter):
    if not _verdicts:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_verdicts):
        title, ok, detail = _verdicts[key]
        line = f"{key} {'PASS' if ok else 'FAIL'}  {title}"
        if detail:
            line += f"  -- {detail}"
        terminalreporter.write_line(line)
