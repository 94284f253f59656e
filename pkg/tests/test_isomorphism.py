"""
Tests for decision-respecting isomorphism of ego networks.
"""
import pytest
import sys
from pathlib import Path

import networkx as nx
from networkx.algorithms.isomorphism import GraphMatcher
import numpy as np

sys.path.insert(0, str(Path(__file__).parent.parent))

from netfair.exceptions import ArgumentError
from netfair.engines.isomorphism import decision_isomorphic, find_decision_isomorphism, relabel
from netfair.network.graph_core import DecisionVector, ego_network
from tests.conftest import build_network


def to_networkx(ego, rooted=True):
    graph = nx.Graph()
    for v in ego.members:
        label = ego.labels[v]
        graph.add_node(v, key=(
            label.protected, label.unprotected, label.outcome, label.decision,
            rooted and v == ego.center,
        ))
    graph.add_edges_from(ego.induced_edges)
    return graph


def networkx_isomorphic(g1, g2, rooted=True):
    matcher = GraphMatcher(
        to_networkx(g1, rooted), to_networkx(g2, rooted),
        node_match=lambda a, b: a['key'] == b['key'],
    )
    return matcher.is_isomorphic()


def random_labeled(rng, n, p):
    edges = [(a, b) for a in range(n) for b in range(a + 1, n) if rng.random() < p]
    net = build_network(
        n, edges,
        protected=rng.integers(0, 2, n).tolist(),
        outcome=rng.integers(0, 2, n).tolist(),
    )
    h = DecisionVector(tuple(int(x) for x in rng.integers(0, 2, n)))
    return net, h


class TestExamples:
    """Small hand-checked cases."""

    def test_triangle_vs_path(self):
        """Test that a triangle ego is not isomorphic to a path ego."""
        triangle = build_network(3, [(0, 1), (1, 2), (0, 2)])
        path = build_network(3, [(0, 1), (1, 2)])
        h = DecisionVector.constant(3, 0)
        assert not decision_isomorphic(ego_network(triangle, 0, 1, h), ego_network(path, 1, 1, h))

    def test_mirror_leaves(self, star_network):
        """Test that two positive leaves differ only by their decision."""
        net, h = star_network
        same = DecisionVector((0, 1, 1, 1, 0))
        assert decision_isomorphic(ego_network(net, 1, 1, same), ego_network(net, 2, 1, same))
        assert not decision_isomorphic(ego_network(net, 1, 1, h), ego_network(net, 2, 1, h))

    def test_rooted_distinguishes_center(self):
        """Test that rootedness pins the center of a path ego."""
        path = build_network(3, [(0, 1), (1, 2)])
        h = DecisionVector.constant(3, 0)
        end, middle = ego_network(path, 0, 2, h), ego_network(path, 1, 2, h)
        assert not decision_isomorphic(end, middle)
        assert decision_isomorphic(end, middle, rooted=False)

    def test_mapping_is_bijection(self, star_network):
        """Test that the returned mapping preserves edges and sends center to center."""
        net, h = star_network
        g1 = ego_network(net, 3, 2, h)
        g2 = relabel(g1, {v: 10 + v for v in g1.members})
        mapping = find_decision_isomorphism(g1, g2)
        assert mapping[3] == 13
        assert sorted(mapping.values()) == sorted(g2.members)
        for a, b in g1.induced_edges:
            assert (min(mapping[a], mapping[b]), max(mapping[a], mapping[b])) in g2.induced_edges

    def test_requires_decisions(self, path_network):
        """Test that ego networks without decision labels are refused."""
        with pytest.raises(ArgumentError):
            decision_isomorphic(ego_network(path_network, 0, 1), ego_network(path_network, 1, 1))

    def test_attribute_arity_mismatch(self):
        """Test that attribute vectors of different lengths are refused."""
        a = build_network(2, [(0, 1)], unprotected=[(1,), (0,)])
        b = build_network(2, [(0, 1)], unprotected=[(1, 0), (0, 0)])
        h = DecisionVector.constant(2, 0)
        with pytest.raises(ArgumentError):
            decision_isomorphic(ego_network(a, 0, 1, h), ego_network(b, 0, 1, h))


class TestAgainstNetworkx:
    """Agreement with networkx's VF2 matcher on random labeled egos."""

    @pytest.mark.parametrize('rooted', [True, False])
    def test_random_pairs(self, rooted):
        """Test random ego pairs, including many isomorphic ones."""
        rng = np.random.default_rng(31 if rooted else 32)
        for _ in range(200):
            net, h = random_labeled(rng, int(rng.integers(2, 9)), 0.35)
            u, v = (int(x) for x in rng.integers(0, net.node_count, 2))
            delta = int(rng.integers(1, 3))
            g1, g2 = ego_network(net, u, delta, h), ego_network(net, v, delta, h)
            assert decision_isomorphic(g1, g2, rooted) == networkx_isomorphic(g1, g2, rooted)

    def test_relabelled_copies(self):
        """Test that a permuted copy is always isomorphic."""
        rng = np.random.default_rng(33)
        for _ in range(100):
            net, h = random_labeled(rng, int(rng.integers(1, 15)), 0.3)
            ego = ego_network(net, int(rng.integers(net.node_count)), 2, h)
            members = sorted(ego.members)
            shuffled = [int(x) + 100 for x in rng.permutation(members)]
            copy = relabel(ego, dict(zip(members, shuffled)))
            assert decision_isomorphic(ego, copy)
            assert networkx_isomorphic(ego, copy)


class TestRelationProperties:
    """Reflexivity and symmetry."""

    def test_reflexive_and_symmetric(self):
        """Test the relation on random pairs from one network."""
        rng = np.random.default_rng(34)
        for _ in range(50):
            net, h = random_labeled(rng, 8, 0.4)
            egos = [ego_network(net, v, 1, h) for v in net.nodes]
            for g in egos:
                assert decision_isomorphic(g, g)
            for g1 in egos:
                for g2 in egos:
                    assert decision_isomorphic(g1, g2) == decision_isomorphic(g2, g1)
