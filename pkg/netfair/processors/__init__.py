"""netfair audit processors."""

from .base_processor import BaseProcessor
from .metrics_processor import MetricsProcessor, ConfusionCounts, confusion, tpr, fpr
from .visibility_processor import (
    VisibilityProcessor,
    GroupPartition,
    fairness_visibility,
    visibility_parity_gap,
    acceptance_probability,
    demographic_parity_gap,
    visibility_sweep,
    convergence_check,
)

__all__ = [
    'BaseProcessor',
    'MetricsProcessor',
    'ConfusionCounts',
    'confusion',
    'tpr',
    'fpr',
    'VisibilityProcessor',
    'GroupPartition',
    'fairness_visibility',
    'visibility_parity_gap',
    'acceptance_probability',
    'demographic_parity_gap',
    'visibility_sweep',
    'convergence_check',
]
