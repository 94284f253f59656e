"""
Attributed network model, delta-neighborhoods, ego networks, and connectivity.

Nodes are dense integer ids in [0, node_count). The network is undirected,
has no self-loops or multi-edges, and is immutable once built.
"""

from dataclasses import dataclass, field
from typing import (
    Dict, FrozenSet, Hashable, Iterable, List, Optional, Sequence, Tuple
)

import networkx as nx

from ..exceptions import ArgumentError, NetworkConstructionError

Edge = Tuple[int, int]
Attributes = Tuple[Hashable, ...]


def normalize_edge(a: int, b: int) -> Edge:
    """Return the canonical (smaller, larger) form of an undirected edge."""
    return (a, b) if a <= b else (b, a)


@dataclass(frozen=True)
class AttributedNetwork:
    """
    Undirected attributed network G = <V, E, X> with a binary target outcome.

    Build with AttributedNetwork.build(); the constructor expects already
    validated, canonical edges.
    """
    node_count: int
    edges: FrozenSet[Edge]
    protected: Tuple[Hashable, ...]
    outcome: Tuple[int, ...]
    unprotected: Tuple[Attributes, ...]
    adjacency: Tuple[FrozenSet[int], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        neighbors: List[set] = [set() for _ in range(self.node_count)]
        for a, b in self.edges:
            neighbors[a].add(b)
            neighbors[b].add(a)
        object.__setattr__(self, 'adjacency', tuple(frozenset(n) for n in neighbors))

    @classmethod
    def build(
        cls,
        node_count: int,
        edges: Iterable[Sequence[int]],
        protected: Sequence[Hashable],
        outcome: Sequence[int],
        unprotected: Optional[Sequence[Sequence[Hashable]]] = None,
    ) -> 'AttributedNetwork':
        """
        Validate inputs and build a network.

        Args:
            node_count: Number of nodes
            edges: Unordered node pairs; each pair may appear once
            protected: One protected-attribute value per node
            outcome: One binary target outcome per node
            unprotected: Optional attribute vector per node (defaults to empty)

        Returns:
            AttributedNetwork

        Raises:
            NetworkConstructionError: On self-loops, duplicate edges, invalid
                endpoints, wrong label counts, or non-binary outcomes
        """
        if node_count < 0:
            raise NetworkConstructionError(f"node_count must be >= 0, got {node_count}")
        if len(protected) != node_count:
            raise NetworkConstructionError(
                f"expected {node_count} protected values, got {len(protected)}")
        if len(outcome) != node_count:
            raise NetworkConstructionError(
                f"expected {node_count} outcomes, got {len(outcome)}")
        for v, y in enumerate(outcome):
            if y not in (0, 1):
                raise NetworkConstructionError(f"outcome of node {v} must be 0 or 1, got {y!r}")

        if unprotected is None:
            attrs: Tuple[Attributes, ...] = tuple(() for _ in range(node_count))
        else:
            if len(unprotected) != node_count:
                raise NetworkConstructionError(
                    f"expected {node_count} attribute vectors, got {len(unprotected)}")
            attrs = tuple(tuple(x) for x in unprotected)

        canonical = set()
        for pair in edges:
            a, b = int(pair[0]), int(pair[1])
            if not (0 <= a < node_count and 0 <= b < node_count):
                raise NetworkConstructionError(f"edge ({a}, {b}) has an endpoint outside [0, {node_count})")
            if a == b:
                raise NetworkConstructionError(f"self-loop on node {a}")
            edge = normalize_edge(a, b)
            if edge in canonical:
                raise NetworkConstructionError(f"duplicate edge {edge}")
            canonical.add(edge)

        return cls(
            node_count=node_count,
            edges=frozenset(canonical),
            protected=tuple(protected),
            outcome=tuple(int(y) for y in outcome),
            unprotected=attrs,
        )

    @property
    def nodes(self) -> range:
        return range(self.node_count)

    def neighbors(self, v: int) -> FrozenSet[int]:
        """Direct neighbors of v."""
        self.check_node(v)
        return self.adjacency[v]

    def degree(self, v: int) -> int:
        self.check_node(v)
        return len(self.adjacency[v])

    def check_node(self, v: int) -> None:
        """Raise ArgumentError unless v is a valid node id."""
        if isinstance(v, bool) or not isinstance(v, int) or not 0 <= v < self.node_count:
            raise ArgumentError(f"invalid node id {v!r} for network of {self.node_count} nodes")

    def has_edge(self, a: int, b: int) -> bool:
        return normalize_edge(a, b) in self.edges


@dataclass(frozen=True)
class DecisionVector:
    """Binary decision h(v) for every node of an audited network."""
    decisions: Tuple[int, ...]

    def __post_init__(self):
        for v, d in enumerate(self.decisions):
            if d not in (0, 1):
                raise ArgumentError(f"decision of node {v} must be 0 or 1, got {d!r}")
        values = tuple(int(d) for d in self.decisions)
        object.__setattr__(self, 'decisions', values)

    @classmethod
    def constant(cls, node_count: int, value: int) -> 'DecisionVector':
        return cls(tuple([value] * node_count))

    def __len__(self) -> int:
        return len(self.decisions)

    def __getitem__(self, v: int) -> int:
        return self.decisions[v]

    def __iter__(self):
        return iter(self.decisions)

    def with_decision(self, v: int, value: int) -> 'DecisionVector':
        """Copy with h(v) replaced."""
        values = list(self.decisions)
        values[v] = value
        return DecisionVector(tuple(values))

    def check_for(self, net: AttributedNetwork) -> None:
        """Raise ArgumentError unless this vector is sized to net."""
        if len(self.decisions) != net.node_count:
            raise ArgumentError(
                f"decision vector has {len(self.decisions)} entries, network has {net.node_count} nodes")


@dataclass(frozen=True)
class NodeLabel:
    """Labels carried by an ego-network member."""
    protected: Hashable
    unprotected: Attributes
    outcome: int
    decision: Optional[int]


@dataclass(frozen=True)
class EgoNet:
    """Induced subgraph on neighborhood(center) plus the center itself."""
    center: int
    delta: int
    members: FrozenSet[int]
    induced_edges: FrozenSet[Edge]
    labels: Dict[int, NodeLabel] = field(hash=False)

    def neighbors(self, v: int) -> FrozenSet[int]:
        return frozenset(
            b if a == v else a for a, b in self.induced_edges if v in (a, b)
        )


def _check_delta(delta: int) -> None:
    if isinstance(delta, bool) or not isinstance(delta, int) or delta < 1:
        raise ArgumentError(f"delta must be a positive integer, got {delta!r}")


def bfs_layers(net: AttributedNetwork, v: int, max_depth: Optional[int] = None) -> List[List[int]]:
    """
    Breadth-first layers around v.

    Args:
        net: Network
        v: Source node
        max_depth: Stop after this distance (None for the whole component)

    Returns:
        layers[d] is the sorted list of nodes at distance exactly d (layers[0] == [v])
    """
    net.check_node(v)
    seen = {v}
    layers = [[v]]
    frontier = [v]
    while frontier and (max_depth is None or len(layers) <= max_depth):
        nxt = []
        for u in frontier:
            for w in net.adjacency[u]:
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        if not nxt:
            break
        nxt.sort()
        layers.append(nxt)
        frontier = nxt
    return layers


def neighborhood(net: AttributedNetwork, v: int, delta: int) -> FrozenSet[int]:
    """
    Nodes within shortest-path distance delta of v, excluding v itself.

    Raises:
        ArgumentError: If v is not a node or delta < 1
    """
    _check_delta(delta)
    layers = bfs_layers(net, v, delta)
    return frozenset(u for layer in layers[1:] for u in layer)


def ego_network(
    net: AttributedNetwork,
    v: int,
    delta: int,
    decisions: Optional[DecisionVector] = None,
) -> EgoNet:
    """
    Build the ego network of v: members neighborhood(v, delta) + {v} with every induced edge.

    Args:
        net: Network
        v: Ego (center) node
        delta: Neighborhood radius
        decisions: Optional decision vector whose values are carried as labels

    Returns:
        EgoNet
    """
    if decisions is not None:
        decisions.check_for(net)
    members = neighborhood(net, v, delta) | {v}
    induced = frozenset(
        normalize_edge(a, b)
        for a in members
        for b in net.adjacency[a]
        if a < b and b in members
    )
    labels = {
        u: NodeLabel(
            protected=net.protected[u],
            unprotected=net.unprotected[u],
            outcome=net.outcome[u],
            decision=None if decisions is None else decisions[u],
        )
        for u in members
    }
    return EgoNet(center=v, delta=delta, members=members, induced_edges=induced, labels=labels)


def to_networkx(net: AttributedNetwork) -> nx.Graph:
    """Plain networkx view of the topology (labels are not copied)."""
    graph = nx.Graph()
    graph.add_nodes_from(net.nodes)
    graph.add_edges_from(sorted(net.edges))
    return graph


def connected_components(net: AttributedNetwork) -> List[FrozenSet[int]]:
    """Partition the nodes into connected components, ordered by smallest member."""
    graph = to_networkx(net)
    return sorted((frozenset(c) for c in nx.connected_components(graph)), key=min)


def is_connected(net: AttributedNetwork) -> bool:
    """True for a network with exactly one component (the empty network is not connected)."""
    return net.node_count > 0 and nx.is_connected(to_networkx(net))


def eccentricity(net: AttributedNetwork, v: int) -> int:
    """Greatest distance from v to any node of its component."""
    net.check_node(v)
    graph = to_networkx(net)
    return nx.eccentricity(graph.subgraph(nx.node_connected_component(graph, v)), v)


def eccentricity_bound(net: AttributedNetwork) -> int:
    """
    Largest component diameter.

    For delta at or above this value every neighborhood covers its whole
    component, so this is the saturation radius of perception sweeps.
    """
    graph = to_networkx(net)
    return max(
        (nx.diameter(graph.subgraph(c)) for c in nx.connected_components(graph)),
        default=0,
    )


def degrees(net: AttributedNetwork) -> Tuple[int, ...]:
    """Degree of every node."""
    return tuple(len(n) for n in net.adjacency)
