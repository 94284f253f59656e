"""netfair network model."""

from .graph_core import (
    AttributedNetwork,
    DecisionVector,
    EgoNet,
    NodeLabel,
    neighborhood,
    ego_network,
    connected_components,
    to_networkx,
    is_connected,
    eccentricity_bound,
    degrees,
)
from .matrix_oracle import neighborhood_by_matrix_power

__all__ = [
    'AttributedNetwork',
    'DecisionVector',
    'EgoNet',
    'NodeLabel',
    'neighborhood',
    'neighborhood_by_matrix_power',
    'ego_network',
    'connected_components',
    'to_networkx',
    'is_connected',
    'eccentricity_bound',
    'degrees',
]
