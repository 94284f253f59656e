"""
Reachability by boolean adjacency-matrix powers.

A slow, dense reference for neighborhood(): u is within delta of v iff
A^k[u, v] > 0 for some k <= delta. Only meant for small networks.
"""

from typing import FrozenSet

import numpy as np

from ..exceptions import ArgumentError, CapacityError
from ..utils.constants import MATRIX_ORACLE_MAX_NODES
from .graph_core import AttributedNetwork


def adjacency_matrix(net: AttributedNetwork) -> np.ndarray:
    """Dense 0/1 adjacency matrix (symmetric, zero diagonal)."""
    matrix = np.zeros((net.node_count, net.node_count), dtype=np.int64)
    for a, b in net.edges:
        matrix[a, b] = 1
        matrix[b, a] = 1
    return matrix


def neighborhood_by_matrix_power(
    net: AttributedNetwork,
    v: int,
    delta: int,
    max_nodes: int = MATRIX_ORACLE_MAX_NODES,
) -> FrozenSet[int]:
    """
    Delta-neighborhood of v computed from boolean powers of the adjacency matrix.

    Args:
        net: Network
        v: Node
        delta: Radius (>= 1)
        max_nodes: Size guard

    Returns:
        {u != v : A^k[u, v] > 0 for some 1 <= k <= delta}

    Raises:
        CapacityError: If the network has more than max_nodes nodes
    """
    if net.node_count > max_nodes:
        raise CapacityError(
            f"matrix oracle limited to {max_nodes} nodes, network has {net.node_count}")
    net.check_node(v)
    if isinstance(delta, bool) or not isinstance(delta, int) or delta < 1:
        raise ArgumentError(f"delta must be a positive integer, got {delta!r}")

    adjacency = adjacency_matrix(net)
    power = adjacency.copy()
    reach = power > 0
    for _ in range(1, delta):
        # clip back to 0/1 so entries never overflow
        power = (power @ adjacency > 0).astype(np.int64)
        reach |= power > 0

    row = reach[v].copy()
    row[v] = False
    return frozenset(int(u) for u in np.flatnonzero(row))
