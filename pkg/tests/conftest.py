import numpy as np
import pytest
from hypothesis import strategies as st

from graphfb import Graph
from graphfb.fixtures import fixture_zoo


@pytest.fixture(scope="session")
def zoo():
    return fixture_zoo()


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


@st.composite
def small_graphs(draw, max_vertices=16, min_vertices=1):
    """Arbitrary simple graphs with unit or random positive weights."""
    n = draw(st.integers(min_vertices, max_vertices))
    possible = [(i, j) for i in range(n) for j in range(i + 1, n)]
    edges = draw(st.sets(st.sampled_from(possible), max_size=len(possible))) if possible else set()
    weighted = draw(st.booleans())
    if weighted:
        weights = draw(
            st.lists(
                st.floats(0.05, 2.0, allow_nan=False, allow_infinity=False),
                min_size=len(edges),
                max_size=len(edges),
            )
        )
        return Graph.from_edges(n, [(u, v, w) for (u, v), w in zip(sorted(edges), weights)])
    return Graph.from_edges(n, sorted(edges))
