"""
Confusion-matrix statistics per protected group.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Hashable, Iterable, List, Optional

import pandas as pd

from ..exceptions import UndefinedRateError
from ..network.graph_core import AttributedNetwork, DecisionVector
from ..utils.helpers import format_percent, ratio
from .base_processor import BaseProcessor


@dataclass(frozen=True)
class ConfusionCounts:
    """TP/FP/TN/FN tallies of (y, h) over a node set."""
    tp: int = 0
    fp: int = 0
    tn: int = 0
    fn: int = 0

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn

    @property
    def positives(self) -> int:
        return self.tp + self.fn

    @property
    def negatives(self) -> int:
        return self.fp + self.tn

    @property
    def accepted(self) -> int:
        return self.tp + self.fp

    def __add__(self, other: 'ConfusionCounts') -> 'ConfusionCounts':
        return ConfusionCounts(
            tp=self.tp + other.tp,
            fp=self.fp + other.fp,
            tn=self.tn + other.tn,
            fn=self.fn + other.fn,
        )


def confusion(net: AttributedNetwork, h: DecisionVector, group: Optional[Iterable[int]] = None) -> ConfusionCounts:
    """
    Exact tallies of the four (y, h) cells over a group.

    Args:
        net: Network carrying outcomes y
        h: Decision vector
        group: Node ids (defaults to every node)

    Returns:
        ConfusionCounts
    """
    h.check_for(net)
    nodes = net.nodes if group is None else group
    tp = fp = tn = fn = 0
    for v in nodes:
        net.check_node(v)
        y, d = net.outcome[v], h[v]
        if d == 1 and y == 1:
            tp += 1
        elif d == 1:
            fp += 1
        elif y == 1:
            fn += 1
        else:
            tn += 1
    return ConfusionCounts(tp=tp, fp=fp, tn=tn, fn=fn)


def tpr(counts: ConfusionCounts) -> Fraction:
    """
    True positive rate tp / (tp + fn).

    Raises:
        UndefinedRateError: If there are no positives
    """
    if counts.positives == 0:
        raise UndefinedRateError("true positive rate undefined: group has no y = 1 nodes")
    return Fraction(counts.tp, counts.positives)


def fpr(counts: ConfusionCounts) -> Fraction:
    """
    False positive rate fp / (fp + tn).

    The denominator is the number of negatives; the quoted case-study rates
    (7.8%, 6.3%, 9.4%, 5.6%) only match this form.

    Raises:
        UndefinedRateError: If there are no negatives
    """
    if counts.negatives == 0:
        raise UndefinedRateError("false positive rate undefined: group has no y = 0 nodes")
    return Fraction(counts.fp, counts.negatives)


def acceptance_rate(counts: ConfusionCounts) -> Optional[Fraction]:
    """Share of the group with h = 1 (None for an empty group)."""
    return ratio(counts.accepted, counts.total)


def confusion_table(counts: ConfusionCounts) -> pd.DataFrame:
    """
    Two-by-two confusion table in the case-study layout.

    Rows are the decision (h=1, h=0), columns the acceptability (y=1, y=0).
    """
    return pd.DataFrame(
        [[counts.tp, counts.fp], [counts.fn, counts.tn]],
        index=pd.Index(['h=1', 'h=0'], name='decision'),
        columns=pd.Index(['y=1', 'y=0'], name='outcome'),
    )


def format_confusion(counts: ConfusionCounts, title: str = '') -> str:
    """Plain-text rendering of confusion_table with TPR/FPR underneath."""
    lines = [title] if title else []
    lines.append(f"{'':8}{'y=1':>8}{'y=0':>8}")
    lines.append(f"{'h=1':8}{counts.tp:>8}{counts.fp:>8}")
    lines.append(f"{'h=0':8}{counts.fn:>8}{counts.tn:>8}")
    tpr_value = tpr(counts) if counts.positives else None
    fpr_value = fpr(counts) if counts.negatives else None
    lines.append(f"TPR {format_percent(tpr_value)}  FPR {format_percent(fpr_value)}  n={counts.total}")
    return '\n'.join(lines)


class MetricsProcessor(BaseProcessor):
    """Confusion statistics of a decision vector per protected group."""

    def group_confusions(self) -> Dict[Hashable, ConfusionCounts]:
        """ConfusionCounts per protected value."""
        return {
            key: confusion(self.net, self.decisions, group)
            for key, group in self.protected_groups().items()
        }

    def overall(self) -> ConfusionCounts:
        return confusion(self.net, self.decisions)

    def confusion_frame(self) -> pd.DataFrame:
        """One row per group plus an 'all' row: counts, TPR, FPR, acceptance rate."""
        rows: List[Dict] = []
        entries = list(self.group_confusions().items()) + [('all', self.overall())]
        for key, counts in entries:
            rows.append({
                'group': key,
                'tp': counts.tp,
                'fp': counts.fp,
                'fn': counts.fn,
                'tn': counts.tn,
                'size': counts.total,
                'tpr': float(tpr(counts)) if counts.positives else None,
                'fpr': float(fpr(counts)) if counts.negatives else None,
                'acceptance_probability': float(acceptance_rate(counts)) if counts.total else None,
            })
        return self.create_dataframe(rows, columns=[
            'group', 'tp', 'fp', 'fn', 'tn', 'size', 'tpr', 'fpr', 'acceptance_probability',
        ])

    def render_tables(self) -> str:
        """Every group's confusion table as text, then the whole network."""
        blocks = [
            format_confusion(counts, title=f"group {key}")
            for key, counts in self.group_confusions().items()
        ]
        blocks.append(format_confusion(self.overall(), title='all nodes'))
        return '\n\n'.join(blocks)
