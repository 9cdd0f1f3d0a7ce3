import numpy as np
import pytest

from spreadnet import mln
from tests.conftest import random_network


def test_triangle_neighbors(triangle):
    assert triangle.neighbors(0, 0) == {1, 2}
    assert triangle.neighbors(1, 0) == {0, 2}


def test_isolated_actor_present_in_layer():
    presence = np.array([[True, True, True]])
    net = mln.MultilayerNetwork.build(
        ["a", "b", "c"], ["l0"], {0: [(0, 1)]}, presence=presence
    )
    assert net.neighbors(2, 0) == set()


def test_layer_separation(two_layer_split):
    assert two_layer_split.neighbors(0, 0) == set()
    assert two_layer_split.neighbors(0, 1) == {1}


def test_neighbors_unknown_ids(triangle):
    with pytest.raises(mln.NotFoundError):
        triangle.neighbors(7, 0)
    with pytest.raises(mln.NotFoundError):
        triangle.neighbors(0, 3)


def test_degree(triangle):
    assert [triangle.degree(a, 0) for a in range(3)] == [2, 2, 2]


def test_degree_absent_from_layer(two_layer_split):
    assert two_layer_split.degree(0, 0) == 0


def test_degree_star_center():
    edges = {0: [(0, i) for i in range(1, 6)]}
    net = mln.MultilayerNetwork.build([f"a{i}" for i in range(6)], ["l0"], edges)
    assert net.degree(0, 0) == 5


def test_actor_degree_sums_over_layers(duplicated_edge):
    assert duplicated_edge.actor_degree(0) == 2


def test_actor_degree_single_layer(triangle):
    for a in range(3):
        assert triangle.actor_degree(a) == triangle.degree(a, 0)


def test_neighborhood_union_collapses_duplicates(duplicated_edge):
    assert duplicated_edge.neighborhood(0) == {1}


def test_neighborhood_union_across_layers():
    net = mln.MultilayerNetwork.build(
        ["a", "b", "c"], ["l0", "l1"], {0: [(0, 1)], 1: [(0, 2)]}
    )
    assert net.neighborhood(0) == {1, 2}


def test_neighborhood_empty_network():
    net = mln.MultilayerNetwork.build(["a", "b"], ["l0"], {})
    assert net.neighborhood(0) == set()


def test_flatten_single_layer_identity(triangle):
    assert triangle.flatten().structurally_equal(triangle)


def test_flatten_deduplicates(duplicated_edge):
    flat = duplicated_edge.flatten()
    assert flat.n_layers == 1
    assert flat.total_edges() == 1


def test_flatten_merges_paths():
    net = mln.MultilayerNetwork.build(
        ["a", "b", "c"], ["l0", "l1"], {0: [(0, 1)], 1: [(1, 2)]}
    )
    flat = net.flatten()
    assert flat.neighbors(1, 0) == {0, 2}
    assert flat.n_actors == net.n_actors


def test_validate_ok(triangle):
    assert triangle.validate() == []


def test_validate_missing_presence():
    presence = np.array([[True, False]])
    net = mln.MultilayerNetwork.build(["a", "b"], ["l0"], {0: [(0, 1)]},
                                      presence=presence)
    violations = net.validate()
    assert len(violations) == 1
    assert "node not in V" in violations[0]


def test_validate_self_loop():
    net = mln.MultilayerNetwork.build(["a", "b"], ["l0"], {0: [(0, 0), (0, 1)]})
    assert any("self-loop" in v for v in net.validate())


def test_roundtrip_structural_equality():
    rng = np.random.default_rng(11)
    for _ in range(10):
        net = random_network(rng, int(rng.integers(3, 15)), int(rng.integers(1, 4)))
        text = mln.serialize_network(net)
        reparsed = mln.parse_network(text)
        assert net.structurally_equal(reparsed)
        assert mln.serialize_network(reparsed) == text


def test_neighbor_symmetry():
    rng = np.random.default_rng(12)
    net = random_network(rng, 12, 3)
    for l in range(net.n_layers):
        for a in range(net.n_actors):
            for b in net.neighbors(a, l):
                assert a in net.neighbors(b, l)


def test_actor_degree_and_neighborhood_bounds():
    rng = np.random.default_rng(13)
    net = random_network(rng, 15, 3)
    for a in range(net.n_actors):
        total = sum(net.degree(a, l) for l in range(net.n_layers))
        assert net.actor_degree(a) == total
        assert len(net.neighborhood(a)) <= total


def test_flatten_multiplicity_bound():
    rng = np.random.default_rng(14)
    net = random_network(rng, 10, 4, edge_prob=0.4)
    flat = net.flatten()
    pairs = [tuple(e) for e in flat.edges[0].tolist()]
    assert len(pairs) == len(set(pairs))
    assert flat.n_actors == net.n_actors


def test_parse_rejects_unknown_names():
    text = "#actors\na\n#layers\nl0\n#edges\nl0,a,zz\n"
    with pytest.raises(mln.NetworkFormatError):
        mln.parse_network(text)


def test_presence_section_overrides_inference():
    text = (
        "#actors\na\nb\nc\n#layers\nl0\n#edges\nl0,a,b\n"
        "#presence\nl0,a\nl0,b\nl0,c\n"
    )
    net = mln.parse_network(text)
    assert net.presence[0, 2]  # isolate declared present
    assert net.node_count() == 3


def test_edgelist_dir_loader(tmp_path):
    (tmp_path / "work.edges").write_text("alice bob\nbob carol\n")
    (tmp_path / "social.edges").write_text("alice,carol\n")
    net = mln.load_edgelist_dir(tmp_path)
    assert net.n_layers == 2
    assert net.layer_names == ("social", "work")
    assert net.n_actors == 3
    assert net.neighborhood(net.actor_id("alice")) == {
        net.actor_id("bob"), net.actor_id("carol")
    }
