import numpy as np
import pytest

from spreadnet import mln


@pytest.fixture
def triangle():
    # K3 in a single layer
    return mln.MultilayerNetwork.build(
        ["a", "b", "c"], ["l0"], {0: [(0, 1), (1, 2), (0, 2)]}
    )


@pytest.fixture
def two_layer_split():
    # a0-a1 only in layer 1; both actors present in both layers
    presence = np.ones((2, 2), dtype=bool)
    return mln.MultilayerNetwork.build(
        ["a", "b"], ["l0", "l1"], {1: [(0, 1)]}, presence=presence
    )


@pytest.fixture
def duplicated_edge():
    # the same a0-a1 edge in two layers
    return mln.MultilayerNetwork.build(
        ["a", "b"], ["l0", "l1"], {0: [(0, 1)], 1: [(0, 1)]}
    )


def random_network(rng, n_actors, n_layers, edge_prob=0.15):
    """Small random multilayer network for oracle comparisons."""
    edges = {}
    for l in range(n_layers):
        pairs = [
            (i, j)
            for i in range(n_actors)
            for j in range(i + 1, n_actors)
            if rng.random() < edge_prob
        ]
        edges[l] = pairs
    names = [f"a{i}" for i in range(n_actors)]
    layers = [f"l{i}" for i in range(n_layers)]
    return mln.MultilayerNetwork.build(names, layers, edges)
