"""
Group fairness visibility, parity gaps, and neighborhood-size sweeps.

Fairness visibility FV(V_c) is the mean perception over a protected group.
On a connected network whose decisions have non-zero true and false positive
rates, FV(V_c) at the saturation radius equals the group's acceptance
probability P(h = 1 | V_c); visibility_sweep and convergence_check exhibit
that limit.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Any, Dict, FrozenSet, Hashable, Iterable, List, Optional, Tuple

import numpy as np
import pandas as pd

from ..engines.perception_engine import (
    ExpectationPolicy, PerceptionEngine, PerceptionRecord
)
from ..exceptions import ArgumentError, UndefinedRateError
from ..network.graph_core import (
    AttributedNetwork, DecisionVector, connected_components, degrees, eccentricity_bound
)
from ..utils import log
from ..utils.constants import DEFAULT_EPSILON, EXPECTATION_BINS, NEAR_ZERO_EXPECTATION
from ..utils.helpers import sort_group_keys, to_float
from .base_processor import BaseProcessor
from .metrics_processor import confusion, fpr, tpr


@dataclass(frozen=True)
class GroupPartition:
    """Node sets V_c keyed by protected value c."""
    groups: Dict[Hashable, FrozenSet[int]]

    def __post_init__(self):
        ordered = {key: frozenset(self.groups[key]) for key in sort_group_keys(self.groups)}
        seen: set = set()
        for key, members in ordered.items():
            if not members:
                raise ArgumentError(f"group {key!r} is empty")
            if seen & members:
                raise ArgumentError(f"group {key!r} overlaps another group")
            seen |= members
        object.__setattr__(self, 'groups', ordered)

    @classmethod
    def from_network(cls, net: AttributedNetwork) -> 'GroupPartition':
        """Partition by each node's protected value."""
        groups: Dict[Hashable, set] = {}
        for v in net.nodes:
            groups.setdefault(net.protected[v], set()).add(v)
        return cls({key: frozenset(members) for key, members in groups.items()})

    def check_for(self, net: AttributedNetwork) -> None:
        """Raise ArgumentError unless the groups cover exactly the network's nodes."""
        covered = set().union(*self.groups.values()) if self.groups else set()
        if covered != set(net.nodes):
            raise ArgumentError("partition does not cover the network's nodes exactly")

    def keys(self) -> List[Hashable]:
        return list(self.groups)

    def items(self):
        return self.groups.items()

    def __len__(self) -> int:
        return len(self.groups)


@dataclass(frozen=True)
class VisibilityResult:
    """FV of one group with its disclosed denominator."""
    value: Optional[Fraction]     # None when every member was excluded
    fair: int
    denominator: int
    group_size: int

    @property
    def excluded(self) -> int:
        return self.group_size - self.denominator


def _index_records(records: Iterable[PerceptionRecord]) -> Dict[int, PerceptionRecord]:
    return {r.node: r for r in records}


def visibility_detail(records: Iterable[PerceptionRecord], group: Iterable[int]) -> VisibilityResult:
    """
    Fairness visibility of a group with its counts.

    Records whose expectation is absent (marked ineligible) are excluded and
    the denominator shrinks accordingly; zero-expectation records count with
    their assigned perception.

    Raises:
        ArgumentError: If the group is empty or not covered by the records
    """
    members = list(group)
    if not members:
        raise ArgumentError("fairness visibility of an empty group")
    by_node = _index_records(records)
    missing = [v for v in members if v not in by_node]
    if missing:
        raise ArgumentError(f"no perception record for nodes {missing[:5]}")
    counted = [by_node[v] for v in members if by_node[v].expectation is not None]
    fair = sum(r.fair for r in counted)
    value = Fraction(fair, len(counted)) if counted else None
    return VisibilityResult(value=value, fair=fair, denominator=len(counted), group_size=len(members))


def fairness_visibility(records: Iterable[PerceptionRecord], group: Iterable[int]) -> Optional[Fraction]:
    """FV(group): mean perception over the group (None if every member was excluded)."""
    return visibility_detail(records, group).value


def _max_pairwise_gap(values: Iterable[Optional[Fraction]]) -> Optional[Fraction]:
    defined = [v for v in values if v is not None]
    if len(defined) < 2:
        return None
    return max(abs(a - b) for a, b in combinations(defined, 2))


def _require_two_groups(partition: GroupPartition) -> None:
    if len(partition) < 2:
        raise ArgumentError(f"parity needs at least 2 groups, got {len(partition)}")


def visibility_parity_gap(records: Iterable[PerceptionRecord], partition: GroupPartition) -> Optional[Fraction]:
    """
    Largest pairwise |FV(V_c) - FV(V_c')|.

    Returns:
        The gap, or None when fewer than two groups have a defined FV
    """
    _require_two_groups(partition)
    records = list(records)
    return _max_pairwise_gap(fairness_visibility(records, group) for group in partition.groups.values())


def acceptance_probability(net: AttributedNetwork, h: DecisionVector, group: Iterable[int]) -> Fraction:
    """P(h(v) = 1 | v in group)."""
    h.check_for(net)
    members = list(group)
    if not members:
        raise ArgumentError("acceptance probability of an empty group")
    return Fraction(sum(h[v] for v in members), len(members))


def demographic_parity_gap(net: AttributedNetwork, h: DecisionVector, partition: GroupPartition) -> Fraction:
    """Largest pairwise difference in acceptance probability between groups."""
    _require_two_groups(partition)
    gap = _max_pairwise_gap(acceptance_probability(net, h, group) for group in partition.groups.values())
    return Fraction(0) if gap is None else gap


def parity_holds(gap: Optional[Fraction], epsilon: float = DEFAULT_EPSILON) -> Optional[bool]:
    """Parity verdict: gap <= epsilon (None when the gap is undefined)."""
    if gap is None:
        return None
    return gap <= Fraction(epsilon)


@dataclass(frozen=True)
class SweepRow:
    delta: int
    group: Hashable
    fairness_visibility: Optional[Fraction]
    acceptance_probability: Fraction
    eligible: int
    group_size: int


@dataclass
class SweepTable:
    """
    FV per (delta, group) with the acceptance probability as reference line.

    Rows stop at min(delta_max, saturation_delta); every larger radius up to
    delta_max has the saturated values, which value() returns.
    """
    rows: List[SweepRow]
    delta_max: int
    saturation_delta: int

    @property
    def last_delta(self) -> int:
        return min(self.delta_max, self.saturation_delta)

    def to_dataframe(self) -> pd.DataFrame:
        return pd.DataFrame(
            [
                {
                    'delta': r.delta,
                    'group': r.group,
                    'fairness_visibility': to_float(r.fairness_visibility),
                    'acceptance_probability': float(r.acceptance_probability),
                    'eligible': r.eligible,
                    'group_size': r.group_size,
                }
                for r in self.rows
            ],
            columns=['delta', 'group', 'fairness_visibility', 'acceptance_probability', 'eligible', 'group_size'],
        )

    def value(self, delta: int, group: Hashable) -> Optional[Fraction]:
        if not 1 <= delta <= self.delta_max:
            raise KeyError((delta, group))
        stored = min(delta, self.last_delta)
        for r in self.rows:
            if r.delta == stored and r.group == group:
                return r.fairness_visibility
        raise KeyError((delta, group))

    def terminal(self) -> Dict[Hashable, SweepRow]:
        """Rows at the largest stored delta, by group."""
        return {r.group: r for r in self.rows if r.delta == self.last_delta}


def visibility_sweep(
    net: AttributedNetwork,
    h: DecisionVector,
    partition: GroupPartition,
    delta_max: int,
    policy: Optional[ExpectationPolicy] = None,
) -> SweepTable:
    """
    FV per group for every radius 1..delta_max, stored up to the saturation radius.

    Args:
        net: Network
        h: Decision vector
        partition: Protected groups
        delta_max: Largest radius (>= 1)
        policy: Degenerate rule source; its delta is ignored

    Returns:
        SweepTable ordered by (delta, group)
    """
    if isinstance(delta_max, bool) or not isinstance(delta_max, int) or delta_max < 1:
        raise ArgumentError(f"delta_max must be a positive integer, got {delta_max!r}")
    h.check_for(net)
    engine = PerceptionEngine(policy or ExpectationPolicy())
    by_delta = engine.perceive_profile(net, h, delta_max)
    acceptance = {key: acceptance_probability(net, h, group) for key, group in partition.items()}

    rows = []
    for delta, records in sorted(by_delta.items()):
        for key, group in partition.items():
            detail = visibility_detail(records, group)
            rows.append(SweepRow(
                delta=delta,
                group=key,
                fairness_visibility=detail.value,
                acceptance_probability=acceptance[key],
                eligible=detail.denominator,
                group_size=detail.group_size,
            ))
        log.debug(f"  sweep delta={delta}: " + ', '.join(
            f"{r.group}={to_float(r.fairness_visibility)}" for r in rows[-len(partition):]))
    return SweepTable(rows=rows, delta_max=delta_max, saturation_delta=max(1, eccentricity_bound(net)))


@dataclass
class ConvergenceReport:
    """Outcome of checking that FV reaches the acceptance probability at saturation."""
    components: int
    tpr_positive: bool
    fpr_positive: bool
    saturation_delta: int
    failures: List[str] = field(default_factory=list)
    terminal: Dict[Hashable, Tuple[Optional[Fraction], Fraction]] = field(default_factory=dict)
    mismatched_groups: List[Hashable] = field(default_factory=list)
    sweep: Optional[SweepTable] = None

    @property
    def connected(self) -> bool:
        return self.components == 1

    @property
    def hypotheses_hold(self) -> bool:
        return not self.failures

    @property
    def converged(self) -> Optional[bool]:
        """Terminal equality verdict; None when the hypotheses do not hold."""
        if not self.hypotheses_hold:
            return None
        return not self.mismatched_groups

    def to_text(self) -> str:
        lines = [
            f"components: {self.components}",
            f"tpr_positive: {self.tpr_positive}",
            f"fpr_positive: {self.fpr_positive}",
            f"saturation_delta: {self.saturation_delta}",
            f"hypotheses_hold: {self.hypotheses_hold}",
        ]
        for failure in self.failures:
            lines.append(f"hypothesis_failed: {failure}")
        for key, (fv, ap) in self.terminal.items():
            lines.append(f"group {key}: terminal_fv={to_float(fv)} acceptance_probability={float(ap)}")
        verdict = self.converged
        lines.append(f"converged: {'n/a' if verdict is None else verdict}")
        return '\n'.join(lines)


def convergence_check(
    net: AttributedNetwork,
    h: DecisionVector,
    partition: GroupPartition,
    policy: Optional[ExpectationPolicy] = None,
) -> ConvergenceReport:
    """
    Check the hypotheses of the saturation limit and the limit itself.

    Hypotheses: the network is connected, and h has non-zero true and false
    positive rates. The sweep always runs to the saturation radius
    (eccentricity_bound); equality of terminal FV and acceptance probability
    is only asserted when the hypotheses hold. Failures are report entries,
    never exceptions.
    """
    components = len(connected_components(net))
    overall = confusion(net, h)
    failures = []
    if components != 1:
        failures.append(f"connectivity: network has {components} components")

    def positive(rate_fn, name: str) -> bool:
        try:
            value = rate_fn(overall)
        except UndefinedRateError:
            failures.append(f"{name}: undefined")
            return False
        if value == 0:
            failures.append(f"{name}: zero")
            return False
        return True

    tpr_ok = positive(tpr, 'true_positive_rate')
    fpr_ok = positive(fpr, 'false_positive_rate')

    saturation = max(1, eccentricity_bound(net))
    report = ConvergenceReport(
        components=components,
        tpr_positive=tpr_ok,
        fpr_positive=fpr_ok,
        saturation_delta=saturation,
        failures=failures,
    )
    if net.node_count == 0:
        return report

    sweep = visibility_sweep(net, h, partition, saturation, policy)
    report.sweep = sweep
    for key, row in sweep.terminal().items():
        report.terminal[key] = (row.fairness_visibility, row.acceptance_probability)
        if row.fairness_visibility != row.acceptance_probability:
            report.mismatched_groups.append(key)

    if report.hypotheses_hold and report.mismatched_groups:
        log.warn(f"terminal visibility differs from acceptance probability for groups {report.mismatched_groups}")
    return report


class VisibilityProcessor(BaseProcessor):
    """Per-group perception tables for one network, decision vector, and policy."""

    def __init__(
        self,
        net: AttributedNetwork,
        decisions: DecisionVector,
        policy: Optional[ExpectationPolicy] = None,
        partition: Optional[GroupPartition] = None,
    ):
        super().__init__(net, decisions)
        self.policy = policy or ExpectationPolicy()
        self.partition = partition or GroupPartition.from_network(net)
        self.partition.check_for(net)
        self._records: Optional[List[PerceptionRecord]] = None

    @property
    def records(self) -> List[PerceptionRecord]:
        if self._records is None:
            self._records = PerceptionEngine(self.policy).perceive_all(self.net, self.decisions)
        return self._records

    def perception_frame(self) -> pd.DataFrame:
        """Per-node perception report."""
        return self.create_dataframe(
            [r.to_row() for r in self.records],
            columns=['node_id', 'protected_value', 'y', 'h', 'expectation', 'fair', 'eligible'],
        )

    def visibility(self) -> Dict[Hashable, VisibilityResult]:
        return {key: visibility_detail(self.records, group) for key, group in self.partition.items()}

    def breakdown_frame(self) -> pd.DataFrame:
        """
        Fair/unfair counts per group and confusion cell.

        Returns:
            DataFrame with group, cell, fair, unfair, ineligible, total
        """
        rows = []
        for key, group in self.partition.items():
            for cell in ('TP', 'FP', 'FN', 'TN'):
                members = [self.records[v] for v in sorted(group) if self.outcome_cell(v) == cell]
                fair = sum(r.fair for r in members)
                rows.append({
                    'group': key,
                    'cell': cell,
                    'fair': fair,
                    'unfair': len(members) - fair,
                    'ineligible': sum(1 for r in members if not r.eligible),
                    'total': len(members),
                })
        return self.create_dataframe(rows, columns=['group', 'cell', 'fair', 'unfair', 'ineligible', 'total'])

    def expectation_distribution(
        self,
        bins: int = EXPECTATION_BINS,
        near_zero: float = NEAR_ZERO_EXPECTATION,
    ) -> pd.DataFrame:
        """
        Histogram of E[h(v)] over rejected nodes (h = 0), per group.

        Returns:
            DataFrame with group, bin_low, bin_high, count, share, and
            near_zero_share (share of rejected nodes with E <= near_zero)
        """
        edges = np.linspace(0.0, 1.0, bins + 1)
        rows = []
        for key, group in self.partition.items():
            values = [
                float(self.records[v].expectation)
                for v in sorted(group)
                if self.decisions[v] == 0 and self.records[v].expectation is not None
            ]
            counts, _ = np.histogram(values, bins=edges)
            total = len(values)
            near = sum(1 for x in values if x <= near_zero)
            for i, count in enumerate(counts):
                rows.append({
                    'group': key,
                    'bin_low': round(float(edges[i]), 6),
                    'bin_high': round(float(edges[i + 1]), 6),
                    'count': int(count),
                    'share': float(count) / total if total else None,
                    'near_zero_share': near / total if total else None,
                })
        return self.create_dataframe(
            rows, columns=['group', 'bin_low', 'bin_high', 'count', 'share', 'near_zero_share'])

    def degree_distribution(self) -> pd.DataFrame:
        """Degree histogram per group (degree, count, share)."""
        degree = degrees(self.net)
        rows = []
        for key, group in self.partition.items():
            values = pd.Series([degree[v] for v in group], dtype='int64')
            counts = values.value_counts().sort_index()
            for d, count in counts.items():
                rows.append({
                    'group': key,
                    'degree': int(d),
                    'count': int(count),
                    'share': int(count) / len(group),
                })
        return self.create_dataframe(rows, columns=['group', 'degree', 'count', 'share'])

    def mean_degree(self) -> Dict[Hashable, float]:
        degree = degrees(self.net)
        return {key: float(np.mean([degree[v] for v in group])) for key, group in self.partition.items()}

    def parity_frame(self) -> pd.DataFrame:
        """FV, acceptance probability, TPR, FPR and sizes per group."""
        rows = []
        mean_degree = self.mean_degree()
        for key, group in self.partition.items():
            counts = confusion(self.net, self.decisions, group)
            detail = visibility_detail(self.records, group)
            rows.append({
                'group': key,
                'size': detail.group_size,
                'eligible': detail.denominator,
                'fairness_visibility': to_float(detail.value),
                'acceptance_probability': float(acceptance_probability(self.net, self.decisions, group)),
                'tpr': float(tpr(counts)) if counts.positives else None,
                'fpr': float(fpr(counts)) if counts.negatives else None,
                'mean_degree': mean_degree[key],
            })
        return self.create_dataframe(rows, columns=[
            'group', 'size', 'eligible', 'fairness_visibility', 'acceptance_probability',
            'tpr', 'fpr', 'mean_degree',
        ])

    def parity_gaps(self, epsilon: float = DEFAULT_EPSILON) -> Dict[str, Any]:
        """Visibility and demographic parity gaps with their verdicts at epsilon."""
        fv_gap = visibility_parity_gap(self.records, self.partition)
        dp_gap = demographic_parity_gap(self.net, self.decisions, self.partition)
        return {
            'visibility_parity_gap': to_float(fv_gap),
            'visibility_parity': parity_holds(fv_gap, epsilon),
            'demographic_parity_gap': float(dp_gap),
            'demographic_parity': parity_holds(dp_gap, epsilon),
            'epsilon': epsilon,
        }


def perception_breakdown(net: AttributedNetwork, h: DecisionVector,
                         policy: Optional[ExpectationPolicy] = None) -> pd.DataFrame:
    """Fair/unfair counts per protected group and confusion cell."""
    return VisibilityProcessor(net, h, policy).breakdown_frame()


def expectation_distribution(net: AttributedNetwork, h: DecisionVector,
                             policy: Optional[ExpectationPolicy] = None,
                             near_zero: float = NEAR_ZERO_EXPECTATION) -> pd.DataFrame:
    """Histogram of E[h(v)] over rejected nodes per group."""
    return VisibilityProcessor(net, h, policy).expectation_distribution(near_zero=near_zero)


def degree_distribution(net: AttributedNetwork) -> pd.DataFrame:
    """Degree histogram per protected group."""
    return VisibilityProcessor(net, DecisionVector.constant(net.node_count, 0)).degree_distribution()


def mean_degree_by_group(net: AttributedNetwork) -> Dict[Hashable, float]:
    return VisibilityProcessor(net, DecisionVector.constant(net.node_count, 0)).mean_degree()


def parity_report(net: AttributedNetwork, h: DecisionVector, partition: Optional[GroupPartition] = None,
                  policy: Optional[ExpectationPolicy] = None,
                  epsilon: float = DEFAULT_EPSILON) -> Tuple[pd.DataFrame, Dict[str, Any]]:
    """
    Per-group parity table with the two parity gaps.

    Returns:
        (table, gaps) where gaps holds both gap values and their verdicts at epsilon
    """
    processor = VisibilityProcessor(net, h, policy, partition)
    return processor.parity_frame(), processor.parity_gaps(epsilon)
