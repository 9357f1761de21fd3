import numpy as np
import pytest
from hypothesis import settings

from paretokit.core import Problem

settings.register_profile("default", max_examples=60, deadline=None)
settings.register_profile("fast", max_examples=10, deadline=None)
settings.load_profile("default")

_criteria: dict[int, list[tuple[str, str]]] = {}


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    number = getattr(report, "criterion", None)
    if number is not None:
        _criteria.setdefault(number, []).append((report.nodeid.split("::")[-1], report.outcome))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is not None:
        report.criterion = marker.args[0]


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        results = _criteria[number]
        failed = [name for name, outcome in results if outcome != "passed"]
        line = f"criterion {number}: {'FAIL' if failed else 'PASS'}  ({len(results) - len(failed)}/{len(results)} checks passed)"
        if failed:
            line += "  failing: " + ", ".join(failed)
        terminalreporter.write_line(line)


class OneMax(Problem):
    """Binary test problem: minimize the number of zeros."""

    def __init__(self, n_var=8):
        super().__init__(n_var=n_var, n_obj=1, var_kind="binary", name="onemax")

    def _evaluate(self, X):
        return (X.shape[1] - X.sum(axis=1))[:, None], None, None


class IntegerSphere(Problem):
    def __init__(self, n_var=3):
        super().__init__(n_var=n_var, n_obj=1, lower=0, upper=15, var_kind="integer", name="intsphere")

    def _evaluate(self, X):
        return ((X - 7.0) ** 2).sum(axis=1)[:, None], None, None


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
