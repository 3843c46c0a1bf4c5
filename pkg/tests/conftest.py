import random

import pytest
from hypothesis import strategies as st

from pursuit.constructibility import random_constructible
from pursuit.graph import FiniteGraph

ACCEPTANCE_LINES: list[str] = []


def graph_from_bits(n: int, bits: int) -> FiniteGraph:
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    edges = [p for k, p in enumerate(pairs) if bits >> k & 1]
    return FiniteGraph.from_edges([str(i) for i in range(n)], edges, f"bits{n}:{bits}")


@st.composite
def connected_graphs(draw, min_n=1, max_n=7):
    n = draw(st.integers(min_n, max_n))
    pairs = n * (n - 1) // 2
    bits = draw(st.integers(0, (1 << pairs) - 1)) if pairs else 0
    g = graph_from_bits(n, bits)
    if not g.is_connected():
        # add a spanning path so every draw is usable
        extra = [(i, i + 1) for i in range(n - 1)]
        g = FiniteGraph.from_edges(g.labels, list(g.edges()) + extra, g.name)
    return g


@st.composite
def constructible_graphs(draw, min_n=1, max_n=12):
    n = draw(st.integers(min_n, max_n))
    seed = draw(st.integers(0, 2**32 - 1))
    keep = draw(st.sampled_from([0.2, 0.5, 0.9]))
    return random_constructible(n, random.Random(seed), keep)


@pytest.fixture
def acceptance_report():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
