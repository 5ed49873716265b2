import numpy as np
import pytest

from peerlearn.errors import ConnectivityError, ParameterError
from peerlearn.graph import (
    Graph,
    NeighborDistribution,
    build_angle_kernel_graph,
    build_gaussian_kernel_graph,
    build_knn_graph,
    read_edge_list,
    sample_neighbor,
    similarity_neighbor_distribution,
    stochastic_matrix,
    uniform_neighbor_distribution,
    write_edge_list,
)
from peerlearn.rng import stream

from _utils import random_graph


def test_basic_construction_from_dict_and_triples():
    edges = {(0, 1): 2.0, (1, 2): 3.0, (0, 2): 1.0}
    g1 = Graph(3, edges)
    g2 = Graph(3, [(1, 0, 2.0), (2, 1, 3.0), (2, 0, 1.0)])  # swapped ends
    assert g1.num_edges == g2.num_edges == 3
    assert g1.edges == g2.edges == {(0, 1): 2.0, (0, 2): 1.0, (1, 2): 3.0}
    np.testing.assert_allclose(g1.degrees, [3.0, 5.0, 4.0])
    np.testing.assert_array_equal(g1.neighbor_lists[1], [0, 2])
    np.testing.assert_allclose(g1.neighbor_weights[1], [2.0, 3.0])
    assert g1.weight(0, 1) == 2.0
    assert g1.weight(1, 0) == 2.0
    assert g1.weight(0, 0) == 0.0
    assert g1.neighbor_position(2, 1) == 1


def test_from_edge_arrays_matches_dict_path():
    rng = stream(0, "graph")
    for _ in range(10):
        n = int(rng.integers(3, 9))
        g = random_graph(rng, n)
        ei, ej, w = g.edge_arrays()
        h = Graph.from_edge_arrays(n, ei, ej, w)
        assert h.edges == g.edges
        np.testing.assert_allclose(h.degrees, g.degrees)


def test_adjacency_is_symmetric_and_degrees_are_row_sums():
    rng = stream(1, "graph")
    for _ in range(20):
        g = random_graph(rng, int(rng.integers(3, 12)))
        adj = g.adjacency().toarray()
        np.testing.assert_allclose(adj, adj.T)
        assert np.all(np.diag(adj) == 0.0)
        np.testing.assert_allclose(g.degrees, adj.sum(axis=1))


@pytest.mark.parametrize("bad,msg", [
    ({}, "at least 2"),
    ({(0, 0): 1.0}, "self-loop"),
    ({(0, 3): 1.0}, "out of range"),
    ({(0, 1): 0.0}, "positive"),
    ({(0, 1): -2.0}, "positive"),
    ({(0, 1): float("nan")}, "positive"),
])
def test_construction_rejects_bad_edges(bad, msg):
    with pytest.raises(ParameterError, match=msg):
        Graph(1 if not bad else 3, bad)


def test_construction_rejects_duplicate_edge():
    with pytest.raises(ParameterError, match="duplicate"):
        Graph(3, [(0, 1, 1.0), (1, 0, 2.0), (1, 2, 1.0)])


def test_disconnected_graph_names_a_component():
    with pytest.raises(ConnectivityError) as exc:
        Graph(4, {(0, 1): 1.0, (2, 3): 1.0})
    assert exc.value.component is not None
    assert sorted(exc.value.component) in ([0, 1], [2, 3])


def test_neighbor_position_rejects_non_neighbors():
    g = Graph(3, {(0, 1): 1.0, (1, 2): 1.0})
    with pytest.raises(ParameterError, match="not neighbors"):
        g.neighbor_position(0, 2)


# ---- builders ----------------------------------------------------------


def test_gaussian_kernel_weights_match_formula():
    pts = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 2.0]])
    sigma = 0.8
    g = build_gaussian_kernel_graph(pts, sigma)
    for (i, j), w in g.edges.items():
        d2 = float(np.sum((pts[i] - pts[j]) ** 2))
        assert w == pytest.approx(np.exp(-d2 / (2 * sigma**2)), rel=1e-12)


def test_gaussian_kernel_accepts_1d_points():
    g = build_gaussian_kernel_graph(np.array([0.0, 1.0, 3.0]), 1.0)
    assert g.n == 3
    assert g.weight(0, 1) == pytest.approx(np.exp(-0.5))


def test_gaussian_kernel_rejects_bad_sigma():
    with pytest.raises(ParameterError, match="sigma"):
        build_gaussian_kernel_graph(np.zeros((3, 2)), 0.0)


def test_angle_kernel_weights_match_formula():
    models = np.array([[1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])
    sigma = 0.5
    g = build_angle_kernel_graph(models, sigma, prune_threshold=0.0)
    cos01 = 1.0 / np.sqrt(2.0)
    assert g.weight(0, 1) == pytest.approx(np.exp((cos01 - 1) / sigma), rel=1e-12)
    assert g.weight(0, 2) == pytest.approx(np.exp(-1.0 / sigma), rel=1e-12)
    # scaling a model does not change its angles
    g2 = build_angle_kernel_graph(models * np.array([[7.0], [1.0], [3.0]]),
                                  sigma, prune_threshold=0.0)
    for key, w in g.edges.items():
        assert g2.edges[key] == pytest.approx(w, rel=1e-12)


def test_angle_kernel_pruning_drops_weak_edges():
    # four directions 45 degrees apart: adjacent pairs survive sigma=0.1
    # pruning at 1e-4, anything 90 degrees or more apart is dropped
    angles = np.array([0.0, 0.25, 0.5, 0.75]) * np.pi
    models = np.column_stack([np.cos(angles), np.sin(angles)])
    g = build_angle_kernel_graph(models, 0.1, prune_threshold=1e-4)
    assert set(g.edges) == {(0, 1), (1, 2), (2, 3)}


def test_angle_kernel_pruning_reports_disconnection():
    angles = np.array([0.0, 0.25, 0.5, 0.75]) * np.pi
    models = np.column_stack([np.cos(angles), np.sin(angles)])
    with pytest.raises(ConnectivityError):
        build_angle_kernel_graph(models, 0.1, prune_threshold=0.5)


def test_angle_kernel_rejects_zero_norm_model():
    with pytest.raises(ParameterError, match="zero-norm"):
        build_angle_kernel_graph(np.array([[1.0, 0.0], [0.0, 0.0]]), 0.5)


def test_knn_graph_contains_every_directed_selection():
    rng = stream(2, "graph")
    for trial in range(5):
        n, k = 20, 3
        # directions spread over 0.8 pi with jitter: nearest-in-angle
        # selections form a connected band
        angles = np.linspace(0.0, 0.8 * np.pi, n) + rng.normal(0, 0.01, n)
        radii = rng.uniform(0.5, 2.0, n)
        models = radii[:, None] * np.column_stack([np.cos(angles),
                                                   np.sin(angles)])
        g = build_knn_graph(models, k)
        unit = models / np.linalg.norm(models, axis=1, keepdims=True)
        cos = unit @ unit.T
        for i in range(n):
            order = np.lexsort((np.arange(n), -cos[i]))
            order = order[order != i][:k]
            for j in order:
                assert g.weight(i, int(j)) == 1.0
        # union symmetrization can only add edges on top of the k picks
        assert all(len(g.neighbors(i)) >= k for i in range(n))
        assert np.all(np.asarray(g.adjacency().data) == 1.0)


def test_knn_graph_reports_disconnected_clusters():
    # two tight opposite bundles cannot be joined by nearest-angle picks
    models = np.array([[1.0, 0.0], [1.0, 0.01], [1.0, -0.01],
                       [-1.0, 0.0], [-1.0, 0.01], [-1.0, -0.01]])
    with pytest.raises(ConnectivityError):
        build_knn_graph(models, 2)


def test_knn_ties_break_toward_lower_index():
    # agents 1 and 2 are identical, so agent 0 sees a tie between them
    models = np.array([[1.0, 0.0], [0.0, 1.0], [0.0, 1.0], [-1.0, 1.0]])
    g = build_knn_graph(models, 1)
    assert (0, 1) in g.edges


def test_knn_rejects_bad_k():
    models = np.ones((4, 2))
    with pytest.raises(ParameterError, match="k must"):
        build_knn_graph(models, 0)
    with pytest.raises(ParameterError, match="k must"):
        build_knn_graph(models, 4)


# ---- stochastic matrix and neighbor distributions ------------------------


def test_stochastic_matrix_rows():
    rng = stream(3, "graph")
    for _ in range(10):
        g = random_graph(rng, int(rng.integers(3, 10)))
        P = stochastic_matrix(g)
        np.testing.assert_allclose(np.asarray(P.sum(axis=1)).ravel(),
                                   np.ones(g.n), atol=1e-12)
        dense = P.toarray()
        adj = g.adjacency().toarray()
        np.testing.assert_allclose(dense, adj / g.degrees[:, None])


def test_neighbor_distribution_validation():
    g = Graph(3, {(0, 1): 1.0, (1, 2): 1.0})
    with pytest.raises(ParameterError, match="per agent"):
        NeighborDistribution(3, list(g.neighbor_lists), [np.array([1.0])])
    bad_len = [np.array([1.0]), np.array([0.5]), np.array([1.0])]
    with pytest.raises(ParameterError, match="misaligned"):
        NeighborDistribution(3, list(g.neighbor_lists), bad_len)
    bad_sum = [np.array([1.0]), np.array([0.7, 0.7]), np.array([1.0])]
    with pytest.raises(ParameterError, match="sum"):
        NeighborDistribution(3, list(g.neighbor_lists), bad_sum)
    bad_sign = [np.array([1.0]), np.array([1.0, 0.0]), np.array([1.0])]
    with pytest.raises(ParameterError, match="positive"):
        NeighborDistribution(3, list(g.neighbor_lists), bad_sign)


def test_pick_maps_uniform_draws_to_neighbors():
    g = Graph(4, {(0, 1): 1.0, (0, 2): 1.0, (0, 3): 1.0, (1, 2): 1.0,
                  (2, 3): 1.0})
    dist = NeighborDistribution(
        4,
        list(g.neighbor_lists),
        [np.array([0.2, 0.3, 0.5]), np.array([0.5, 0.5]),
         np.array([0.25, 0.25, 0.5]), np.array([0.5, 0.5])],
    )
    assert dist.pick(0, 0.0) == 1
    assert dist.pick(0, 0.19) == 1
    assert dist.pick(0, 0.2) == 2
    assert dist.pick(0, 0.499) == 2
    assert dist.pick(0, 0.5) == 3
    assert dist.pick(0, 1.0 - 1e-16) == 3
    dense = dist.pi(0)
    np.testing.assert_allclose(dense, [0.0, 0.2, 0.3, 0.5])


def test_uniform_and_similarity_distributions():
    g = Graph(3, {(0, 1): 1.0, (0, 2): 3.0, (1, 2): 2.0})
    uni = uniform_neighbor_distribution(g)
    np.testing.assert_allclose(uni.pi(0), [0.0, 0.5, 0.5])
    sim = similarity_neighbor_distribution(g)
    np.testing.assert_allclose(sim.pi(0), [0.0, 0.25, 0.75])
    np.testing.assert_allclose(sim.pi(2), [3.0 / 5.0, 2.0 / 5.0, 0.0])


def test_sample_neighbor_frequencies_follow_probabilities():
    g = Graph(3, {(0, 1): 1.0, (0, 2): 3.0, (1, 2): 2.0})
    dist = similarity_neighbor_distribution(g)
    rng = stream(4, "schedule")
    draws = np.array([sample_neighbor(dist, 0, rng) for _ in range(20_000)])
    freq2 = float(np.mean(draws == 2))
    assert draws.min() >= 1
    assert abs(freq2 - 0.75) < 0.02


# ---- edge-list round trip ------------------------------------------------


def test_edge_list_round_trip(tmp_path):
    rng = stream(5, "graph")
    g = random_graph(rng, 8)
    path = tmp_path / "graph.txt"
    write_edge_list(g, path)
    h = read_edge_list(path)
    assert h.n == g.n
    assert h.edges == g.edges  # repr() weights survive the trip exactly


def test_read_edge_list_parses_comments_and_rejects_conflicts(tmp_path):
    ok = tmp_path / "ok.txt"
    ok.write_text("# header\n0 1 2.0\n\n1 0 2.0\n1 2 1.5\n")
    g = read_edge_list(ok)
    assert g.edges == {(0, 1): 2.0, (1, 2): 1.5}

    bad = tmp_path / "bad.txt"
    bad.write_text("0 1 2.0\n1 0 3.0\n")
    with pytest.raises(ParameterError, match="conflicting"):
        read_edge_list(bad)

    junk = tmp_path / "junk.txt"
    junk.write_text("0 1\n")
    with pytest.raises(ParameterError, match="expected"):
        read_edge_list(junk)

    empty = tmp_path / "empty.txt"
    empty.write_text("# nothing\n")
    with pytest.raises(ParameterError, match="no edges"):
        read_edge_list(empty)
