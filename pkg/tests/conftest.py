"""Collects acceptance outcomes and prints one line per criterion at the end."""

from collections import defaultdict

import pytest

CRITERIA = {
    1: "inertia: EL residual and straight trajectories",
    2: "coefficient PDE residuals",
    3: "velocity Hessian determinant at the origin",
    4: "induced metric and closed-form inverse",
    5: "signature minors",
    6: "group action, decomposition and contraction",
    7: "exact bracket tables and operator realization",
    8: "invariant tensors and direction-preserving relations",
    9: "mode equation and WKB",
    10: "Fourier oracle and detector amplitude",
    11: "dU = D and density invariance",
    12: "short-distance action",
}

_outcomes = defaultdict(list)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and not report.passed):
        _outcomes[marker.args[0]].append((item.name, report.passed))


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n, title in CRITERIA.items():
        results = _outcomes.get(n)
        if not results:
            continue
        failed = [name for name, ok in results if not ok]
        status = "FAIL" if failed else "PASS"
        suffix = f"  (failing: {', '.join(failed)})" if failed else ""
        tr.write_line(f"AC{n:<3d}{status}  {title}{suffix}")
