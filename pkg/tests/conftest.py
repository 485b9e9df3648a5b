from itertools import combinations

import pytest
from hypothesis import strategies as st

from qecc.graph import SimilarityGraph


@st.composite
def graphs(draw, min_n=0, max_n=12):
    n = draw(st.integers(min_n, max_n))
    pairs = list(combinations(range(n), 2))
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return SimilarityGraph.from_edges(n, [p for p, keep in zip(pairs, mask) if keep])


def make(n, edges):
    return SimilarityGraph.from_edges(n, edges)


@pytest.fixture
def triangle():
    return make(3, [(0, 1), (1, 2), (0, 2)])


@pytest.fixture
def path3():
    return make(3, [(0, 1), (1, 2)])


@pytest.fixture
def star4():
    return make(4, [(0, 1), (0, 2), (0, 3)])


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
