"""
Network-centric fairness perception.

A node v perceives decision h as fair when its expected decision E[h(v)] is at
most the decision it actually received. The expectation follows the
neighborhood peer approach: the mean decision over the delta-neighbors that
share v's target outcome.
"""

from dataclasses import dataclass, replace
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, Hashable, List, Optional, Tuple

from ..exceptions import ArgumentError
from ..network.graph_core import AttributedNetwork, DecisionVector, bfs_layers
from ..utils.constants import DEFAULT_DEGENERATE_RULE, DEFAULT_DELTA


class DegenerateRule(str, Enum):
    """What to do when a node has no same-outcome neighbor."""
    ZERO_EXPECTATION = 'zero_expectation'
    MARK_INELIGIBLE = 'mark_ineligible'


EXPECTATION_KINDS = ('neighborhood_peer',)


@dataclass(frozen=True)
class ExpectationPolicy:
    """How E[h(v)] is formed: expectation kind, neighborhood radius, degenerate rule."""
    delta: int = DEFAULT_DELTA
    degenerate_rule: DegenerateRule = DegenerateRule(DEFAULT_DEGENERATE_RULE)
    kind: str = 'neighborhood_peer'

    def __post_init__(self):
        if isinstance(self.delta, bool) or not isinstance(self.delta, int) or self.delta < 1:
            raise ArgumentError(f"delta must be a positive integer, got {self.delta!r}")
        if self.kind not in EXPECTATION_KINDS:
            raise ArgumentError(f"unknown expectation kind {self.kind!r}")
        try:
            rule = DegenerateRule(self.degenerate_rule)
        except ValueError:
            raise ArgumentError(f"unknown degenerate rule {self.degenerate_rule!r}") from None
        object.__setattr__(self, 'degenerate_rule', rule)

    def at_delta(self, delta: int) -> 'ExpectationPolicy':
        """Same policy with a different radius."""
        return replace(self, delta=delta)

    @property
    def excludes_ineligible(self) -> bool:
        return self.degenerate_rule is DegenerateRule.MARK_INELIGIBLE


@dataclass(frozen=True)
class PerceptionRecord:
    """Perception of one node under one decision vector and policy."""
    node: int
    protected: Hashable
    outcome: int
    decision: int
    expectation: Optional[Fraction]     # None when marked ineligible
    fair: int
    eligible: bool

    def to_row(self) -> Dict[str, Any]:
        return {
            'node_id': self.node,
            'protected_value': self.protected,
            'y': self.outcome,
            'h': self.decision,
            'expectation': None if self.expectation is None else float(self.expectation),
            'fair': self.fair,
            'eligible': int(self.eligible),
        }


@dataclass(frozen=True)
class PerceptionSummary:
    """Totals over a list of perception records."""
    total: int
    fair: int
    unfair: int
    ineligible: int


def peer_tally(net: AttributedNetwork, h: DecisionVector, v: int, delta: int) -> Tuple[int, int]:
    """
    Accepted and total counts among v's same-outcome delta-neighbors.

    Returns:
        (sum of h(u), number of u) over u in N(v) with y_u == y_v; the
        second value is k1 when y_v = 1 and k0 when y_v = 0
    """
    return expectation_profile(net, h, v, delta)[-1]


def expectation_profile(
    net: AttributedNetwork,
    h: DecisionVector,
    v: int,
    delta_max: int,
) -> List[Tuple[int, int]]:
    """
    Same-outcome peer tallies of v for radii 1, 2, ... from one BFS.

    The list stops at the depth where the BFS exhausts v's component (or at
    delta_max, whichever comes first), but always holds at least one entry.
    Every larger radius has the same tally as the last entry.

    Returns:
        tallies[d - 1] == peer_tally(net, h, v, d) for d <= len(tallies)
    """
    if isinstance(delta_max, bool) or not isinstance(delta_max, int) or delta_max < 1:
        raise ArgumentError(f"delta must be a positive integer, got {delta_max!r}")
    layers = bfs_layers(net, v, delta_max)
    target = net.outcome[v]
    accepted = 0
    peers = 0
    tallies = []
    for layer in layers[1:]:
        for u in layer:
            if net.outcome[u] == target:
                peers += 1
                accepted += h[u]
        tallies.append((accepted, peers))
    return tallies or [(0, 0)]


def profile_at(profile: Dict[int, List[PerceptionRecord]], delta: int) -> List[PerceptionRecord]:
    """Records of a perceive_profile result at any radius, saturated ones included."""
    if delta < 1:
        raise ArgumentError(f"delta must be a positive integer, got {delta!r}")
    return profile[min(delta, max(profile))]


class PerceptionEngine:
    """
    Evaluates E[h(v)] and f(v, h) for one ExpectationPolicy.

    Subclasses may override expectation() or is_fair() to study variants;
    the axiom suite accepts any engine.
    """

    def __init__(self, policy: Optional[ExpectationPolicy] = None):
        self.policy = policy or ExpectationPolicy()

    def with_policy(self, policy: ExpectationPolicy) -> 'PerceptionEngine':
        """Engine of the same class bound to another policy."""
        return type(self)(policy)

    def _resolve(self, accepted: int, peers: int) -> Tuple[Optional[Fraction], bool]:
        if peers > 0:
            return Fraction(accepted, peers), True
        if self.policy.degenerate_rule is DegenerateRule.ZERO_EXPECTATION:
            return Fraction(0), False
        return None, False

    def evaluate(self, net: AttributedNetwork, h: DecisionVector, v: int) -> Tuple[Optional[Fraction], bool]:
        """
        Expectation of h(v) together with the eligibility flag.

        Returns:
            (expectation, eligible); expectation is None when v has no
            same-outcome neighbor and the policy marks such nodes ineligible
        """
        accepted, peers = peer_tally(net, h, v, self.policy.delta)
        return self._resolve(accepted, peers)

    def expectation(self, net: AttributedNetwork, h: DecisionVector, v: int) -> Optional[Fraction]:
        """Neighborhood peer expectation of h(v), exact, in [0, 1] (None if ineligible)."""
        h.check_for(net)
        return self.evaluate(net, h, v)[0]

    def is_fair(self, expectation: Fraction, decision: int) -> bool:
        return expectation <= decision

    def _record(self, net: AttributedNetwork, h: DecisionVector, v: int,
                expectation: Optional[Fraction], eligible: bool) -> PerceptionRecord:
        compared = Fraction(0) if expectation is None else expectation
        return PerceptionRecord(
            node=v,
            protected=net.protected[v],
            outcome=net.outcome[v],
            decision=h[v],
            expectation=expectation,
            fair=int(self.is_fair(compared, h[v])),
            eligible=eligible,
        )

    def record(self, net: AttributedNetwork, h: DecisionVector, v: int) -> PerceptionRecord:
        """Full perception record for node v."""
        h.check_for(net)
        net.check_node(v)
        expectation, eligible = self.evaluate(net, h, v)
        return self._record(net, h, v, expectation, eligible)

    def perceive(self, net: AttributedNetwork, h: DecisionVector, v: int) -> int:
        """f(v, h): 1 if E[h(v)] <= h(v), else 0."""
        return self.record(net, h, v).fair

    def perceive_all(self, net: AttributedNetwork, h: DecisionVector) -> List[PerceptionRecord]:
        """One record per node, in node order."""
        h.check_for(net)
        return [self.record(net, h, v) for v in net.nodes]

    def perceive_profile(
        self,
        net: AttributedNetwork,
        h: DecisionVector,
        delta_max: int,
    ) -> Dict[int, List[PerceptionRecord]]:
        """
        Records for every radius 1..delta_max, one BFS per node.

        Radii past the network's saturation radius repeat the saturated
        records, so the result stops there; use profile_at() to read any
        radius up to delta_max.

        Returns:
            {delta: records in node order} for delta = 1..min(delta_max, saturation)
        """
        h.check_for(net)
        profiles = [expectation_profile(net, h, v, delta_max) for v in net.nodes]
        depth_cap = max((len(p) for p in profiles), default=1)
        by_delta: Dict[int, List[PerceptionRecord]] = {d: [] for d in range(1, depth_cap + 1)}
        for v, tallies in zip(net.nodes, profiles):
            for depth in range(1, depth_cap + 1):
                accepted, peers = tallies[min(depth, len(tallies)) - 1]
                expectation, eligible = self._resolve(accepted, peers)
                by_delta[depth].append(self._record(net, h, v, expectation, eligible))
        return by_delta


def peer_expectation(
    net: AttributedNetwork,
    h: DecisionVector,
    v: int,
    policy: Optional[ExpectationPolicy] = None,
) -> Optional[Fraction]:
    """E[h(v)] under the neighborhood peer policy; None means ineligible."""
    return PerceptionEngine(policy).expectation(net, h, v)


def fairness_perception(
    net: AttributedNetwork,
    h: DecisionVector,
    v: int,
    policy: Optional[ExpectationPolicy] = None,
) -> int:
    """f(v, h) under the given policy."""
    return PerceptionEngine(policy).perceive(net, h, v)


def perceive_all(
    net: AttributedNetwork,
    h: DecisionVector,
    policy: Optional[ExpectationPolicy] = None,
) -> List[PerceptionRecord]:
    """Perception records for every node."""
    return PerceptionEngine(policy).perceive_all(net, h)


def summarize(records: List[PerceptionRecord]) -> PerceptionSummary:
    """Count fair, unfair, and ineligible records."""
    fair = sum(r.fair for r in records)
    return PerceptionSummary(
        total=len(records),
        fair=fair,
        unfair=len(records) - fair,
        ineligible=sum(1 for r in records if not r.eligible),
    )
