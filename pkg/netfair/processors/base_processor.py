"""
Base processor class for audits of a decision vector on an attributed network.
"""

from typing import Any, Dict, FrozenSet, Hashable, List, Optional

import pandas as pd

from ..network.graph_core import AttributedNetwork, DecisionVector
from ..utils.helpers import sort_group_keys


class BaseProcessor:
    """Base class for processors that tabulate a network audit."""

    def __init__(self, net: AttributedNetwork, decisions: DecisionVector):
        """
        Initialize processor with a network and the decisions under audit.

        Args:
            net: Attributed network
            decisions: Decision vector sized to net
        """
        decisions.check_for(net)
        self.net = net
        self.decisions = decisions
        self.node_count = net.node_count

    def create_dataframe(self, rows: List[Dict[str, Any]], columns: Optional[List[str]] = None) -> pd.DataFrame:
        """
        Create a DataFrame from rows with optional column ordering.

        Args:
            rows: List of row dictionaries
            columns: Optional list of column names for ordering

        Returns:
            pandas DataFrame (with the given columns even when there are no rows)
        """
        if not rows:
            return pd.DataFrame(columns=columns or [])

        df = pd.DataFrame(rows)

        if columns:
            existing_cols = [c for c in columns if c in df.columns]
            extra_cols = [c for c in df.columns if c not in columns]
            df = df[existing_cols + extra_cols]

        return df

    def protected_groups(self) -> Dict[Hashable, FrozenSet[int]]:
        """
        Node sets keyed by protected value, in sorted key order.

        Returns:
            Dict mapping protected value to its node set
        """
        groups: Dict[Hashable, List[int]] = {}
        for v in self.net.nodes:
            groups.setdefault(self.net.protected[v], []).append(v)
        return {key: frozenset(groups[key]) for key in sort_group_keys(groups)}

    def accepted(self, group: FrozenSet[int]) -> int:
        """Number of group members with h(v) = 1."""
        return sum(self.decisions[v] for v in group)

    def outcome_cell(self, v: int) -> str:
        """Confusion cell of v: 'TP', 'FP', 'FN', or 'TN'."""
        y, h = self.net.outcome[v], self.decisions[v]
        if h == 1:
            return 'TP' if y == 1 else 'FP'
        return 'FN' if y == 1 else 'TN'
