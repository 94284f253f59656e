"""
Deterministic generators of attributed networks and decision vectors.

Networks come from a two-block model with degree skew: each node of group 0
carries weight `degree_skew`, every other node weight 1, and the pair (i, j)
is linked with probability min(1, p_block * w_i * w_j). With equal intra and
inter probabilities the expected mean-degree ratio of group 0 to the rest is
exactly the skew.
"""

import json
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path
from typing import Any, Dict, List, Sequence, Tuple, Union

import numpy as np

from ..exceptions import ArgumentError, PitfallConstructionError
from ..network.graph_core import AttributedNetwork, DecisionVector, eccentricity_bound, is_connected
from ..utils import log
from ..utils.helpers import round_half_up


def _broadcast(values: Sequence[float], groups: int, name: str) -> Tuple[float, ...]:
    values = tuple(float(v) for v in values)
    if len(values) == 1:
        return values * groups
    if len(values) != groups:
        raise ArgumentError(f"{name} needs 1 or {groups} values, got {len(values)}")
    return values


@dataclass(frozen=True)
class SynthConfig:
    """Parameters of the two-block generator and of the biased decision."""
    group_sizes: Tuple[int, ...] = (20, 20)
    intra_probability: float = 0.2
    inter_probability: float = 0.05
    degree_skew: float = 1.0
    outcome_rate: float = 0.3
    tpr_targets: Tuple[float, ...] = (0.9, 0.8)
    fpr_targets: Tuple[float, ...] = (0.1, 0.05)
    attribute_levels: int = 0
    seed: int = 0

    def __post_init__(self):
        sizes = tuple(int(n) for n in self.group_sizes)
        if not sizes or any(n < 1 for n in sizes):
            raise ArgumentError(f"group sizes must be >= 1, got {self.group_sizes}")
        object.__setattr__(self, 'group_sizes', sizes)
        for name in ('intra_probability', 'inter_probability', 'outcome_rate'):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ArgumentError(f"{name} must lie in [0, 1], got {value}")
        if self.degree_skew <= 0:
            raise ArgumentError(f"degree_skew must be positive, got {self.degree_skew}")
        for name in ('tpr_targets', 'fpr_targets'):
            targets = _broadcast(getattr(self, name), len(sizes), name)
            if any(not 0.0 <= t <= 1.0 for t in targets):
                raise ArgumentError(f"{name} must lie in [0, 1], got {targets}")
            object.__setattr__(self, name, targets)
        if self.attribute_levels < 0:
            raise ArgumentError(f"attribute_levels must be >= 0, got {self.attribute_levels}")

    @property
    def node_count(self) -> int:
        return sum(self.group_sizes)

    def with_seed(self, seed: int) -> 'SynthConfig':
        return replace(self, seed=int(seed))

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'SynthConfig':
        """Build from a mapping; unknown keys are rejected."""
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ArgumentError(f"unknown synth config keys: {unknown}")
        values = dict(data)
        for key in ('group_sizes', 'tpr_targets', 'fpr_targets'):
            if key in values:
                raw = values[key]
                values[key] = tuple(raw) if isinstance(raw, (list, tuple)) else (raw,)
        return cls(**values)

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        for key in ('group_sizes', 'tpr_targets', 'fpr_targets'):
            data[key] = list(data[key])
        return data


def load_synth_config(path: Union[str, Path]) -> SynthConfig:
    """Read a SynthConfig from a JSON file."""
    with open(path, 'r', encoding='utf-8') as f:
        return SynthConfig.from_dict(json.load(f))


def group_labels(config: SynthConfig) -> np.ndarray:
    """Group index of every node; groups occupy consecutive id ranges."""
    return np.repeat(np.arange(len(config.group_sizes)), config.group_sizes)


def random_attributed_graph(config: SynthConfig) -> AttributedNetwork:
    """
    Sample a network from the two-block model.

    Args:
        config: Generator parameters (the seed fixes the result)

    Returns:
        AttributedNetwork whose protected value is the group index
    """
    rng = np.random.default_rng(config.seed)
    groups = group_labels(config)
    n = len(groups)

    rows, cols = np.triu_indices(n, k=1)
    same = groups[rows] == groups[cols]
    base = np.where(same, config.intra_probability, config.inter_probability)
    weight = np.where(groups == 0, config.degree_skew, 1.0)
    probability = np.minimum(1.0, base * weight[rows] * weight[cols])
    keep = rng.random(len(rows)) < probability
    edges = list(zip(rows[keep].tolist(), cols[keep].tolist()))

    outcome = np.zeros(n, dtype=np.int64)
    start = 0
    for size in config.group_sizes:
        positives = round_half_up(config.outcome_rate * size)
        chosen = rng.permutation(size)[:positives] + start
        outcome[chosen] = 1
        start += size

    if config.attribute_levels > 0:
        levels = rng.integers(0, config.attribute_levels, size=n)
        attributes: List[Tuple[int, ...]] = [(int(x),) for x in levels]
    else:
        attributes = [() for _ in range(n)]

    return AttributedNetwork.build(
        node_count=n,
        edges=edges,
        protected=[int(g) for g in groups],
        outcome=outcome.tolist(),
        unprotected=attributes,
    )


def biased_decision(net: AttributedNetwork, config: SynthConfig) -> DecisionVector:
    """
    Decision vector whose per-group TPR/FPR match the config's targets.

    Starting from the oracle decision h = y, each group accepts exactly
    round_half_up(target * count) of its positives and of its negatives,
    chosen at random.

    Raises:
        ArgumentError: If a group's protected value is not a target index, or
            a positive target is requested for an outcome class the group lacks
    """
    rng = np.random.default_rng([config.seed, 1])
    decisions = [0] * net.node_count
    members: Dict[int, List[int]] = {}
    for v in net.nodes:
        key = net.protected[v]
        if not isinstance(key, (int, np.integer)) or not 0 <= key < len(config.tpr_targets):
            raise ArgumentError(f"node {v} has protected value {key!r}, expected a group index")
        members.setdefault(int(key), []).append(v)

    for group in sorted(members):
        for target, label, name in (
            (config.tpr_targets[group], 1, 'TPR'),
            (config.fpr_targets[group], 0, 'FPR'),
        ):
            pool = [v for v in members[group] if net.outcome[v] == label]
            if not pool:
                if target > 0:
                    raise ArgumentError(
                        f"{name} target {target} unattainable: group {group} has no y={label} nodes")
                continue
            count = round_half_up(target * len(pool))
            for v in rng.permutation(pool)[:count]:
                decisions[int(v)] = 1
    return DecisionVector(tuple(decisions))


def pitfall_instance(seed: int = 0) -> Tuple[AttributedNetwork, DecisionVector]:
    """
    Connected two-group network where local perception hides the bias.

    Group 0 is a dense core with high acceptance; group 1 is a periphery of
    degree-one nodes, each attached to a core node with the same (y, h) pair.
    At delta = 1 every peripheral node meets an expectation equal to its own
    decision and perceives fair, so FV(group 1) > FV(group 0) even though
    group 0 is accepted more often; at the saturation radius the ordering
    follows the acceptance probabilities.

    Raises:
        PitfallConstructionError: If the sampled instance fails validation
    """
    rng = np.random.default_rng(seed)
    core = int(rng.integers(10, 17))
    periphery = int(rng.integers(2 * core, 3 * core + 1))
    density = float(rng.uniform(0.6, 0.9))

    # core labels: half positive; all positives but one and 1-2 negatives accepted
    order = rng.permutation(core)
    core_positive = [int(v) for v in order[:core // 2]]
    core_negative = [int(v) for v in order[core // 2:]]
    accepted_negative_count = int(rng.integers(1, 3))
    anchors = {
        (1, 1): core_positive[1:],
        (1, 0): core_positive[:1],
        (0, 1): core_negative[:accepted_negative_count],
        (0, 0): core_negative[accepted_negative_count:],
    }

    outcome = [0] * (core + periphery)
    decision = [0] * (core + periphery)
    for (y, h), nodes in anchors.items():
        for v in nodes:
            outcome[v], decision[v] = y, h

    edges = {(v, (v + 1) % core) if v < (v + 1) % core else ((v + 1) % core, v) for v in range(core)}
    for a in range(core):
        for b in range(a + 1, core):
            if rng.random() < density:
                edges.add((a, b))
    # the rejected core positive always sees an accepted positive peer
    rejected, peer = core_positive[0], core_positive[1]
    edges.add((min(rejected, peer), max(rejected, peer)))

    # periphery: one accepted positive, a few accepted negatives, the rest rejected
    positives = max(2, periphery // 5)
    accepted = max(2, periphery // 8)
    cells = (
        [(1, 1)] + [(1, 0)] * (positives - 1)
        + [(0, 1)] * (accepted - 1) + [(0, 0)] * (periphery - positives - accepted + 1)
    )
    for offset, cell in enumerate(rng.permutation(len(cells))):
        v = core + offset
        y, h = cells[int(cell)]
        outcome[v], decision[v] = y, h
        pool = anchors[(y, h)]
        edges.add((int(pool[int(rng.integers(len(pool)))]), v))

    net = AttributedNetwork.build(
        node_count=core + periphery,
        edges=sorted(edges),
        protected=[0] * core + [1] * periphery,
        outcome=outcome,
    )
    h = DecisionVector(tuple(decision))
    _validate_pitfall(net, h, seed)
    log.debug(f"  pitfall seed={seed}: core={core} periphery={periphery} density={density:.2f}")
    return net, h


def _validate_pitfall(net: AttributedNetwork, h: DecisionVector, seed: int) -> None:
    from ..engines.perception_engine import ExpectationPolicy, perceive_all
    from ..processors.metrics_processor import confusion
    from ..processors.visibility_processor import (
        GroupPartition, acceptance_probability, fairness_visibility
    )

    partition = GroupPartition.from_network(net)
    low, high = partition.groups[0], partition.groups[1]
    saturation = max(1, eccentricity_bound(net))
    local = perceive_all(net, h, ExpectationPolicy(delta=1))
    wide = perceive_all(net, h, ExpectationPolicy(delta=saturation))
    counts = confusion(net, h)
    diagnostic = {
        'connected': is_connected(net),
        'tp': counts.tp,
        'fp': counts.fp,
        'ap0': float(acceptance_probability(net, h, low)),
        'ap1': float(acceptance_probability(net, h, high)),
        'fv0_local': float(fairness_visibility(local, low)),
        'fv1_local': float(fairness_visibility(local, high)),
        'fv0_saturated': float(fairness_visibility(wide, low)),
        'fv1_saturated': float(fairness_visibility(wide, high)),
    }
    valid = (
        diagnostic['connected']
        and counts.tp > 0 and counts.fp > 0
        and diagnostic['ap0'] > diagnostic['ap1']
        and diagnostic['fv1_local'] > diagnostic['fv0_local']
        and diagnostic['fv0_saturated'] > diagnostic['fv1_saturated']
    )
    if not valid:
        raise PitfallConstructionError(seed, diagnostic)
