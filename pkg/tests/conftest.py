import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

CRITERIA = {
    1: "Gorenstein detection",
    2: "boundary lattice point counts",
    3: "special simplices",
    4: "projection along a special simplex",
    5: "nef duality for the cube pair",
    6: "cancellation counterexample",
    7: "stringy point values",
    8: "K3 identity E(1,1) = 24",
    9: "diagnostics on Cayley polytopes",
    10: "oracle equivalence",
    11: "decomposition and length bound",
}

_results: dict[int, list[bool]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if call.when == "call" or (call.when == "setup" and call.excinfo is not None):
        _results.setdefault(marker.args[0], []).append(call.excinfo is None)


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for n, title in CRITERIA.items():
        got = _results.get(n)
        if got is None:
            status = "NOT RUN"
        else:
            status = "PASS" if all(got) else "FAIL"
        terminalreporter.write_line(f"criterion {n:2d} {status:7s} {title} ({len(got or [])} checks)")
