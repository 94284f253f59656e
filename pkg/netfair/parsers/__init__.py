"""netfair input parsers and interchange I/O."""

from .review_parser import load_review_dataset, build_review_network, ReviewDataset
from .network_io import export_network, load_network, load_decisions

__all__ = [
    'load_review_dataset',
    'build_review_network',
    'ReviewDataset',
    'export_network',
    'load_network',
    'load_decisions',
]
