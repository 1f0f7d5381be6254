import pytest

from stackcount.ffield import FieldSpec
from stackcount.quiver import Quiver


@pytest.fixture(scope="session")
def F2():
    return FieldSpec(2)


@pytest.fixture(scope="session")
def F3():
    return FieldSpec(3)


@pytest.fixture(scope="session")
def F4():
    return FieldSpec(2, 2)


@pytest.fixture(scope="session")
def a2():
    return Quiver.linear(2)


# --- acceptance summary ------------------------------------------------------

_criteria: dict[int, dict] = {}


def pytest_runtest_makereport(item, call):
    mark = item.get_closest_marker("criterion")
    if mark is None or call.when not in ("setup", "call"):
        return
    n, title = mark.args
    rec = _criteria.setdefault(n, {"title": title, "failed": [], "ran": 0})
    if call.when == "call":
        rec["ran"] += 1
    if call.excinfo is not None and not call.excinfo.errisinstance(pytest.skip.Exception):
        rec["failed"].append(item.name)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(_criteria):
        rec = _criteria[n]
        ok = rec["ran"] > 0 and not rec["failed"]
        line = f"criterion {n:2d} {'PASS' if ok else 'FAIL'}  {rec['title']}"
        if rec["failed"]:
            line += f"  (failed: {', '.join(rec['failed'])})"
        tr.write_line(line)
