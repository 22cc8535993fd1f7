import numpy as np
import pytest

from digraph_consensus.graph import WeightedDigraph


def digraph(n, arcs, w=1.0):
    """Digraph from 1-based ``(tail, head)`` or ``(tail, head, weight)`` tuples."""
    edges = [(a[0] - 1, a[1] - 1, a[2] if len(a) > 2 else w) for a in arcs]
    return WeightedDigraph.from_edges(n, edges)


@pytest.fixture
def rng():
    return np.random.default_rng(20080721)


@pytest.fixture
def two_cycle():
    return digraph(2, [(1, 2), (2, 1)])


@pytest.fixture
def two_sources():
    # arcs 1 -> 3 and 2 -> 3
    return digraph(3, [(1, 3), (2, 3)])


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(results):
        terminalreporter.write_line(results[num])
