import re
import time
from contextlib import contextmanager

import numpy as np
import pytest

_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, budget): acceptance criterion with runtime budget in seconds")


@contextmanager
def _budget(seconds):
    start = time.perf_counter()
    yield
    elapsed = time.perf_counter() - start
    assert elapsed < seconds, f"took {elapsed:.2f} s, budget {seconds} s"


@pytest.fixture
def budget(request):
    marker = request.node.get_closest_marker("acceptance")
    return _budget(marker.args[1] if marker else 1e9)


@pytest.fixture
def rng():
    return np.random.default_rng(20240531)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None or rep.when not in ("setup", "call"):
        return
    num, limit = marker.args
    entry = _CRITERIA.setdefault(num, {"tests": [], "budget": limit})
    if rep.when == "call" or rep.failed:
        entry["tests"].append((item.name, rep.outcome, rep.duration))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        entry = _CRITERIA[num]
        ok = all(o == "passed" for _, o, _ in entry["tests"])
        total = sum(d for _, _, d in entry["tests"])
        tr.write_line(
            f"criterion {num:>2}: {'PASS' if ok else 'FAIL'}  "
            f"({total:.2f} s, budget {entry['budget']} s)"
        )
        for name, o, d in entry["tests"]:
            if o != "passed":
                tr.write_line(f"    {o.upper()}: {re.sub(r'^test_', '', name)} ({d:.2f} s)")
