"""Shared fixtures: small hand-built graphs and a seeded random-graph factory."""

import numpy as np
import pytest

from hgsparse import HeteroGraph, build_graph, build_graph_arrays

# Three-edge example used throughout: gene 1 links diseases 2, 3 via
# etype 0 and chemical 4 via etype 1.
G1_EDGES = [(1, 2, 0), (1, 3, 0), (1, 4, 1)]
G1_TYPES = {1: 0, 2: 1, 3: 1, 4: 2}


@pytest.fixture
def g1() -> HeteroGraph:
    return build_graph(G1_EDGES, node_types=G1_TYPES)


@pytest.fixture
def k33() -> HeteroGraph:
    # Complete bipartite 3x3, single edge type.
    edges = [(u, v, 0) for u in (1, 2, 3) for v in (4, 5, 6)]
    types = {u: 0 for u in (1, 2, 3)} | {v: 1 for v in (4, 5, 6)}
    return build_graph(edges, node_types=types)


def make_random_graph(seed: int, max_n: int = 200, max_t: int = 8,
                      max_m: int = 5000) -> HeteroGraph:
    """Log-uniform sizes so the suite mixes tiny and large instances."""
    rng = np.random.default_rng(seed)
    n = int(np.exp(rng.uniform(np.log(2), np.log(max_n + 1))))
    m = int(np.exp(rng.uniform(0.0, np.log(max_m + 1))))
    t = int(rng.integers(1, max_t + 1))
    node_type_count = int(rng.integers(1, 4))
    src = rng.integers(0, n, size=m)
    dst = rng.integers(0, n, size=m)
    etype = rng.integers(0, t, size=m)
    node_types = rng.integers(0, node_type_count, size=n)
    return build_graph_arrays(src, dst, etype,
                              node_ids=np.arange(n), node_types=node_types)


@pytest.fixture
def random_graph():
    return make_random_graph
