from __future__ import annotations

import json
from pathlib import Path

import networkx as nx
import pytest

from topobounds.algebra import QQ
from topobounds.graphs import Graph, gen_cycle
from topobounds.representations import VectorAssignment

FIXTURES = Path(__file__).parent / "fixtures"

C5_VECTORS = [(1, 1, 1), (-1, -1, 2), (3, 1, 2), (-1, 5, -1), (1, 0, -1)]


def atlas_graphs(max_nodes: int, min_edges: int = 0) -> list[Graph]:
    """Isomorphism-class representatives from the networkx graph atlas."""
    out = []
    for a in nx.graph_atlas_g():
        if a.number_of_nodes() > max_nodes or a.number_of_edges() < min_edges:
            continue
        if a.number_of_nodes() == 0:
            continue
        out.append(Graph(a.nodes(), a.edges()))
    return out


def c5_rep() -> VectorAssignment:
    return VectorAssignment(QQ, 3, {str(i): v for i, v in enumerate(C5_VECTORS)})


@pytest.fixture
def c5() -> Graph:
    return gen_cycle(5)


@pytest.fixture
def c5_vectors() -> VectorAssignment:
    return c5_rep()


@pytest.fixture
def fixture_json():
    def load(name: str):
        return json.loads((FIXTURES / name).read_text())

    return load


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        ok, detail = RESULTS[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'} {detail}")
