import os
import sys

sys.path.insert(0, os.path.dirname(__file__))

# criterion number -> (title, passed so far)
_CRITERIA = {}


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m is not None:
            item.user_properties.append(("criterion", m.args))


def pytest_runtest_logreport(report):
    for key, (number, title) in ((k, v) for k, v in report.user_properties if k == "criterion"):
        ok = _CRITERIA.get(number, (title, True))[1] and not report.failed
        _CRITERIA[number] = (title, ok)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        title, ok = _CRITERIA[number]
        terminalreporter.write_line(f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {title}")
