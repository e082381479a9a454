import numpy as np
import pytest

from oracles import DIAMOND_ROWS
from seideldet.core import SeidelMatrix

_CRITERIA: dict[str, tuple[str, str]] = {}


@pytest.fixture
def diamond():
    return SeidelMatrix.from_array(DIAMOND_ROWS)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if item.module.__name__ != "test_acceptance":
        return
    if rep.when == "call" or rep.failed:
        doc = (item.function.__doc__ or item.name).strip().splitlines()[0]
        _CRITERIA[item.name] = (doc, "PASS" if rep.passed else "FAIL")


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_CRITERIA):
        doc, status = _CRITERIA[name]
        terminalreporter.write_line(f"{status}  {doc}")
