"""
Tests for the attributed network model, neighborhoods, and connectivity.
"""
import pytest
import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).parent.parent))

from netfair.exceptions import ArgumentError, CapacityError, NetworkConstructionError
from netfair.network.graph_core import (
    AttributedNetwork,
    DecisionVector,
    bfs_layers,
    connected_components,
    eccentricity,
    ego_network,
    eccentricity_bound,
    is_connected,
    neighborhood,
    to_networkx,
)
from netfair.network.matrix_oracle import neighborhood_by_matrix_power
from tests.conftest import build_network


def random_network(rng, max_nodes=50):
    n = int(rng.integers(1, max_nodes + 1))
    p = float(rng.uniform(0.0, 0.3))
    edges = [(a, b) for a in range(n) for b in range(a + 1, n) if rng.random() < p]
    return build_network(n, edges)


class TestBuild:
    """Tests for AttributedNetwork.build validation."""

    def test_rejects_self_loop(self):
        """Test that self-loops are refused."""
        with pytest.raises(NetworkConstructionError):
            build_network(2, [(1, 1)])

    def test_rejects_duplicate_edge(self):
        """Test that (a, b) and (b, a) count as the same edge."""
        with pytest.raises(NetworkConstructionError):
            build_network(2, [(0, 1), (1, 0)])

    def test_rejects_bad_endpoint(self):
        """Test that endpoints outside the node range are refused."""
        with pytest.raises(NetworkConstructionError):
            build_network(2, [(0, 2)])

    def test_rejects_non_binary_outcome(self):
        """Test that outcomes other than 0/1 are refused."""
        with pytest.raises(NetworkConstructionError):
            build_network(2, [], outcome=[0, 2])

    def test_construction_error_is_argument_error(self):
        """Test that construction failures are also argument errors."""
        assert issubclass(NetworkConstructionError, ArgumentError)

    def test_edges_are_canonical(self):
        """Test that edges are stored smaller endpoint first."""
        net = build_network(3, [(2, 0)])
        assert net.edges == frozenset({(0, 2)})
        assert net.has_edge(2, 0)
        assert net.neighbors(0) == frozenset({2})

    def test_invalid_node_id(self, path_network):
        """Test that node lookups validate the id."""
        with pytest.raises(ArgumentError):
            path_network.neighbors(5)
        with pytest.raises(ArgumentError):
            path_network.neighbors(-1)


class TestDecisionVector:
    """Tests for DecisionVector."""

    def test_rejects_non_binary(self):
        """Test that decisions must be 0 or 1."""
        with pytest.raises(ArgumentError):
            DecisionVector((0, 1, 2))

    def test_size_check(self, path_network):
        """Test that a vector of the wrong length is refused."""
        with pytest.raises(ArgumentError):
            DecisionVector((0, 1)).check_for(path_network)

    def test_with_decision_copies(self):
        """Test that with_decision leaves the original untouched."""
        h = DecisionVector.constant(3, 0)
        assert h.with_decision(1, 1).decisions == (0, 1, 0)
        assert h.decisions == (0, 0, 0)


class TestNeighborhood:
    """Tests for neighborhood and bfs_layers."""

    def test_path_delta_one(self, path_network):
        """Test that the middle of a path sees its two neighbors."""
        assert neighborhood(path_network, 2, 1) == frozenset({1, 3})

    def test_path_delta_two(self, path_network):
        """Test that delta = 2 reaches the whole path."""
        assert neighborhood(path_network, 2, 2) == frozenset({0, 1, 3, 4})

    def test_isolated_node_is_empty(self, isolated_network):
        """Test that an isolated node has an empty neighborhood at any delta."""
        assert neighborhood(isolated_network, 0, 3) == frozenset()

    def test_excludes_center(self):
        """Test that v is never in its own neighborhood, even on a cycle."""
        triangle = build_network(3, [(0, 1), (1, 2), (0, 2)])
        assert 0 not in neighborhood(triangle, 0, 5)

    def test_rejects_bad_delta(self, path_network):
        """Test that delta must be a positive integer."""
        with pytest.raises(ArgumentError):
            neighborhood(path_network, 0, 0)
        with pytest.raises(ArgumentError):
            neighborhood(path_network, 0, True)

    def test_bfs_layers(self, path_network):
        """Test that layers hold nodes by exact distance."""
        assert bfs_layers(path_network, 0) == [[0], [1], [2], [3], [4]]
        assert bfs_layers(path_network, 2, 1) == [[2], [1, 3]]

    def test_oracle_agreement_on_random_cases(self):
        """Test BFS against boolean matrix powers on 1000 random cases."""
        rng = np.random.default_rng(2024)
        mismatches = 0
        for _ in range(1000):
            net = random_network(rng)
            v = int(rng.integers(net.node_count))
            delta = int(rng.integers(1, 7))
            if neighborhood(net, v, delta) != neighborhood_by_matrix_power(net, v, delta):
                mismatches += 1
        assert mismatches == 0

    def test_oracle_size_guard(self):
        """Test that the matrix oracle refuses large networks."""
        net = build_network(201, [])
        with pytest.raises(CapacityError):
            neighborhood_by_matrix_power(net, 0, 1)


class TestEgoNetwork:
    """Tests for ego_network."""

    def test_star_center(self, star_network):
        """Test that a star's center ego at delta = 1 is the whole star."""
        net, h = star_network
        ego = ego_network(net, 0, 1, h)
        assert ego.members == frozenset(range(5))
        assert len(ego.induced_edges) == 4
        assert ego.labels[1].decision == 1

    def test_leaf_ego(self, star_network):
        """Test that a leaf's ego at delta = 1 is the leaf and the center."""
        net, _ = star_network
        ego = ego_network(net, 1, 1)
        assert ego.members == frozenset({0, 1})
        assert ego.induced_edges == frozenset({(0, 1)})
        assert ego.labels[0].decision is None

    def test_induced_edges_only(self, path_network):
        """Test that edges leaving the ego are not included."""
        ego = ego_network(path_network, 0, 1)
        assert ego.induced_edges == frozenset({(0, 1)})


class TestConnectivity:
    """Tests for components and eccentricity_bound."""

    def test_components_ordered(self):
        """Test that components are ordered by smallest member."""
        net = build_network(5, [(3, 4), (0, 2)])
        assert connected_components(net) == [frozenset({0, 2}), frozenset({1}), frozenset({3, 4})]
        assert not is_connected(net)

    def test_empty_network(self):
        """Test that the empty network has no components and bound 0."""
        net = build_network(0, [])
        assert connected_components(net) == []
        assert not is_connected(net)
        assert eccentricity_bound(net) == 0

    def test_path_diameter(self, path_network):
        """Test that a path of five nodes has bound 4."""
        assert eccentricity_bound(path_network) == 4
        assert is_connected(path_network)

    def test_to_networkx_keeps_isolated_nodes(self):
        """Test that the networkx view carries every node and edge."""
        net = build_network(4, [(0, 1), (1, 2)])
        graph = to_networkx(net)
        assert sorted(graph.nodes) == [0, 1, 2, 3]
        assert sorted(tuple(sorted(e)) for e in graph.edges) == [(0, 1), (1, 2)]

    def test_matches_breadth_first_search(self):
        """Test components and eccentricities against plain BFS layers."""
        rng = np.random.default_rng(7)
        for _ in range(100):
            net = random_network(rng, max_nodes=30)
            reached = {v: {u for layer in bfs_layers(net, v) for u in layer} for v in net.nodes}
            expected = sorted(sorted(members) for members in {frozenset(r) for r in reached.values()})
            assert sorted(sorted(c) for c in connected_components(net)) == expected
            for v in net.nodes:
                assert eccentricity(net, v) == len(bfs_layers(net, v)) - 1
            assert eccentricity_bound(net) == max(len(bfs_layers(net, v)) - 1 for v in net.nodes)

    def test_eccentricity_rejects_bad_node(self, path_network):
        """Test that eccentricity validates the node id."""
        with pytest.raises(ArgumentError):
            eccentricity(path_network, 5)

    def test_saturation_covers_component(self):
        """Test that delta = eccentricity_bound reaches every node of the component."""
        rng = np.random.default_rng(11)
        for _ in range(50):
            net = random_network(rng, max_nodes=25)
            bound = max(1, eccentricity_bound(net))
            components = connected_components(net)
            for v in net.nodes:
                own = next(c for c in components if v in c)
                assert neighborhood(net, v, bound) == own - {v}


class TestImmutability:
    """Tests that networks cannot be modified after construction."""

    def test_frozen(self, path_network):
        """Test that assigning to a field fails."""
        with pytest.raises(AttributeError):
            path_network.node_count = 3

    def test_equality_ignores_adjacency_cache(self):
        """Test that two builds of the same data compare equal."""
        a = build_network(3, [(0, 1)])
        b = AttributedNetwork.build(3, [(1, 0)], [0, 0, 0], [0, 0, 0])
        assert a == b
