import sys
from pathlib import Path

import pytest
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from orientdiam.graph import (  # noqa: E402
    Graph,
    complete_graph,
    cycle_graph,
    path_graph,
    petersen_graph,
)


def corpus() -> dict[str, Graph]:
    return {
        "K2": complete_graph(2),
        "P3": path_graph(3),
        "P4": path_graph(4),
        "C4": cycle_graph(4),
        "C5": cycle_graph(5),
        "K4": complete_graph(4),
        "K5": complete_graph(5),
        "Petersen": petersen_graph(),
    }


@pytest.fixture(scope="session")
def small_corpus():
    return corpus()


@st.composite
def small_graphs(draw, max_n=7, min_n=1):
    n = draw(st.integers(min_value=min_n, max_value=max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    keep = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph.from_edges(n, [p for p, k in zip(pairs, keep) if k])


# One summary line per acceptance criterion, printed after the run.
_ACCEPTANCE: list[tuple[str, str]] = []


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    if "test_acceptance.py" in report.nodeid and "::test_criterion_" in report.nodeid:
        name = report.nodeid.split("::")[-1]
        _ACCEPTANCE.append((name, "PASS" if report.passed else "FAIL"))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, verdict in _ACCEPTANCE:
        terminalreporter.write_line(f"{verdict}  {name}")
