"""
Randomized verification of the fairness-perception axioms.

Checks locality, monotonicity, neighborhood expectation, and homogeneity of
f(v, h), the three properties required of E[h(v)], and the all-reject
baseline (h = 0 everywhere makes every node perceive fair). Each trial is
constructed so that its precondition holds; the precondition is still
re-checked, and trials that fail it are counted as skipped.
"""

import json
import math
from dataclasses import dataclass, field, fields
from enum import Enum
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple, Union

import numpy as np
import pandas as pd

from ..exceptions import ArgumentError
from ..network.graph_core import AttributedNetwork, DecisionVector, ego_network, neighborhood
from ..synth.generator import SynthConfig, random_attributed_graph
from ..utils import log
from ..utils.constants import AXIOM_MIN_SATISFIED_FRACTION, AXIOM_MIN_SATISFIED_TRIALS
from .isomorphism import decision_isomorphic
from .perception_engine import DegenerateRule, ExpectationPolicy, PerceptionEngine

EngineFactory = Callable[[ExpectationPolicy], PerceptionEngine]


class Axiom(str, Enum):
    LOCALITY = 'locality'
    MONOTONICITY = 'monotonicity'
    NEIGHBORHOOD_EXPECTATION = 'neighborhood_expectation'
    HOMOGENEITY = 'homogeneity'
    EXPECTATION_INVARIANCE = 'expectation_prop_1'
    EXPECTATION_MONOTONICITY = 'expectation_prop_2'
    EXPECTATION_ISOMORPHISM = 'expectation_prop_3'
    ALL_REJECT_BASELINE = 'all_reject_baseline'


class CheckOutcome(str, Enum):
    HELD = 'held'
    VIOLATED = 'violated'
    SKIPPED = 'skipped'


@dataclass(frozen=True)
class Witness:
    """A counterexample: enough to rebuild the trial."""
    network_seed: int
    node: int
    h: Tuple[int, ...]
    h_prime: Tuple[int, ...]
    delta: int
    other_node: Optional[int] = None


@dataclass
class AxiomVerdict:
    """Accumulated results of one axiom over a campaign."""
    axiom: Axiom
    trials: int = 0
    satisfied: int = 0
    skipped: int = 0
    required: int = 0
    violations: List[Witness] = field(default_factory=list)

    @property
    def quota_met(self) -> bool:
        return self.satisfied >= self.required

    @property
    def passed(self) -> bool:
        return not self.violations and self.quota_met

    def add(self, outcome: CheckOutcome, witness: Optional[Witness] = None) -> None:
        self.trials += 1
        if outcome is CheckOutcome.SKIPPED:
            self.skipped += 1
            return
        self.satisfied += 1
        if outcome is CheckOutcome.VIOLATED and witness is not None:
            self.violations.append(witness)

    def to_row(self) -> Dict[str, Any]:
        return {
            'axiom': self.axiom.value,
            'trials': self.trials,
            'satisfied': self.satisfied,
            'skipped': self.skipped,
            'required': self.required,
            'violations': len(self.violations),
            'passed': self.passed,
        }


def _outcome(condition: bool) -> CheckOutcome:
    return CheckOutcome.HELD if condition else CheckOutcome.VIOLATED


def _engine(policy: ExpectationPolicy, engine: Optional[PerceptionEngine]) -> PerceptionEngine:
    return engine if engine is not None else PerceptionEngine(policy)


def _agree_on(h: DecisionVector, h_prime: DecisionVector, nodes) -> bool:
    return all(h[u] == h_prime[u] for u in nodes)


def check_locality(net: AttributedNetwork, v: int, h: DecisionVector, h_prime: DecisionVector,
                   policy: ExpectationPolicy, engine: Optional[PerceptionEngine] = None) -> CheckOutcome:
    """If h and h' agree on v and N(v), then f(v, h) = f(v, h')."""
    engine = _engine(policy, engine)
    if not _agree_on(h, h_prime, neighborhood(net, v, policy.delta) | {v}):
        return CheckOutcome.SKIPPED
    return _outcome(engine.perceive(net, h, v) == engine.perceive(net, h_prime, v))


def check_monotonicity(net: AttributedNetwork, v: int, h: DecisionVector, h_prime: DecisionVector,
                       policy: ExpectationPolicy, engine: Optional[PerceptionEngine] = None) -> CheckOutcome:
    """If h(v) = 0, h'(v) = 1 and they agree on N(v), then f(v, h) <= f(v, h')."""
    engine = _engine(policy, engine)
    if h[v] != 0 or h_prime[v] != 1 or not _agree_on(h, h_prime, neighborhood(net, v, policy.delta)):
        return CheckOutcome.SKIPPED
    return _outcome(engine.perceive(net, h, v) <= engine.perceive(net, h_prime, v))


def check_neighborhood_expectation(net: AttributedNetwork, v: int, h: DecisionVector, h_prime: DecisionVector,
                                   policy: ExpectationPolicy,
                                   engine: Optional[PerceptionEngine] = None) -> CheckOutcome:
    """If h(v) = h'(v) and h <= h' on N(v), then f(v, h) >= f(v, h')."""
    engine = _engine(policy, engine)
    if h[v] != h_prime[v]:
        return CheckOutcome.SKIPPED
    if any(h[u] > h_prime[u] for u in neighborhood(net, v, policy.delta)):
        return CheckOutcome.SKIPPED
    return _outcome(engine.perceive(net, h, v) >= engine.perceive(net, h_prime, v))


def check_homogeneity(net: AttributedNetwork, u: int, v: int, h: DecisionVector,
                      policy: ExpectationPolicy, engine: Optional[PerceptionEngine] = None) -> CheckOutcome:
    """If the ego networks of u and v are decision-isomorphic, f and E agree on u and v."""
    engine = _engine(policy, engine)
    if not decision_isomorphic(ego_network(net, u, policy.delta, h), ego_network(net, v, policy.delta, h)):
        return CheckOutcome.SKIPPED
    same_expectation = engine.expectation(net, h, u) == engine.expectation(net, h, v)
    return _outcome(same_expectation and engine.perceive(net, h, u) == engine.perceive(net, h, v))


def check_expectation_invariance(net: AttributedNetwork, v: int, h: DecisionVector, h_prime: DecisionVector,
                                 policy: ExpectationPolicy,
                                 engine: Optional[PerceptionEngine] = None) -> CheckOutcome:
    """If h and h' agree on N(v), then E[h(v)] = E[h'(v)]."""
    engine = _engine(policy, engine)
    if not _agree_on(h, h_prime, neighborhood(net, v, policy.delta)):
        return CheckOutcome.SKIPPED
    return _outcome(engine.expectation(net, h, v) == engine.expectation(net, h_prime, v))


def check_expectation_monotonicity(net: AttributedNetwork, v: int, h: DecisionVector, h_prime: DecisionVector,
                                   policy: ExpectationPolicy,
                                   engine: Optional[PerceptionEngine] = None) -> CheckOutcome:
    """If h <= h' on N(v), then E[h(v)] <= E[h'(v)]."""
    engine = _engine(policy, engine)
    if any(h[u] > h_prime[u] for u in neighborhood(net, v, policy.delta)):
        return CheckOutcome.SKIPPED
    before, after = engine.expectation(net, h, v), engine.expectation(net, h_prime, v)
    if before is None or after is None:
        return _outcome(before is None and after is None)
    return _outcome(before <= after)


def check_expectation_isomorphism(net: AttributedNetwork, u: int, v: int, h: DecisionVector,
                                  policy: ExpectationPolicy,
                                  engine: Optional[PerceptionEngine] = None) -> CheckOutcome:
    """If the ego networks of u and v are decision-isomorphic, E[h(u)] = E[h(v)]."""
    engine = _engine(policy, engine)
    if not decision_isomorphic(ego_network(net, u, policy.delta, h), ego_network(net, v, policy.delta, h)):
        return CheckOutcome.SKIPPED
    return _outcome(engine.expectation(net, h, u) == engine.expectation(net, h, v))


def check_all_reject_baseline(net: AttributedNetwork, v: int, policy: ExpectationPolicy,
                              engine: Optional[PerceptionEngine] = None) -> CheckOutcome:
    """Under h = 0 everywhere nobody is favored, so f(v, h) = 1."""
    engine = _engine(policy, engine)
    return _outcome(engine.perceive(net, DecisionVector.constant(net.node_count, 0), v) == 1)


@dataclass(frozen=True)
class AxiomSuiteConfig:
    """Ranges from which the campaign samples networks, decisions, and policies."""
    min_nodes: int = 2
    max_nodes: int = 30
    max_groups: int = 2
    edge_probability: Tuple[float, float] = (0.05, 0.5)
    max_degree_skew: float = 3.0
    max_delta: int = 3
    attribute_levels: int = 2
    degenerate_rules: Tuple[str, ...] = ('zero_expectation', 'mark_ineligible')
    min_satisfied_fraction: float = AXIOM_MIN_SATISFIED_FRACTION
    min_satisfied_trials: int = AXIOM_MIN_SATISFIED_TRIALS

    def __post_init__(self):
        if not 1 <= self.min_nodes <= self.max_nodes:
            raise ArgumentError(f"need 1 <= min_nodes <= max_nodes, got {self.min_nodes}, {self.max_nodes}")
        low, high = self.edge_probability
        if not 0.0 <= low <= high <= 1.0:
            raise ArgumentError(f"edge_probability must be an ordered pair in [0, 1], got {self.edge_probability}")
        if self.max_delta < 1 or self.max_groups < 1:
            raise ArgumentError("max_delta and max_groups must be >= 1")
        if not 0.0 <= self.min_satisfied_fraction <= 1.0 or self.min_satisfied_trials < 0:
            raise ArgumentError("min_satisfied_fraction must be in [0, 1] and min_satisfied_trials >= 0")
        rules = tuple(DegenerateRule(r).value for r in self.degenerate_rules)
        if not rules:
            raise ArgumentError("degenerate_rules must not be empty")
        object.__setattr__(self, 'degenerate_rules', rules)
        object.__setattr__(self, 'edge_probability', (float(low), float(high)))

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'AxiomSuiteConfig':
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ArgumentError(f"unknown axiom suite config keys: {unknown}")
        values = dict(data)
        for key in ('edge_probability', 'degenerate_rules'):
            if key in values:
                values[key] = tuple(values[key])
        return cls(**values)


def load_axiom_config(path: Union[str, Path]) -> AxiomSuiteConfig:
    """Read an AxiomSuiteConfig from a JSON file."""
    with open(path, 'r', encoding='utf-8') as f:
        return AxiomSuiteConfig.from_dict(json.load(f))


@dataclass
class _Trial:
    seed: int
    net: AttributedNetwork
    h: DecisionVector
    policy: ExpectationPolicy
    rng: np.random.Generator


class AxiomSuite:
    """Samples trials for each axiom and accumulates verdicts."""

    def __init__(self, config: Optional[AxiomSuiteConfig] = None,
                 engine_factory: EngineFactory = PerceptionEngine):
        self.config = config or AxiomSuiteConfig()
        self.engine_factory = engine_factory

    def sample_trial(self, rng: np.random.Generator) -> _Trial:
        """Draw a network, a decision vector, and a policy."""
        cfg = self.config
        seed = int(rng.integers(2 ** 32))
        trial_rng = np.random.default_rng(seed)
        n = int(trial_rng.integers(cfg.min_nodes, cfg.max_nodes + 1))
        groups = int(trial_rng.integers(1, min(cfg.max_groups, n) + 1))
        cuts = sorted(trial_rng.choice(np.arange(1, n), size=groups - 1, replace=False).tolist()) if groups > 1 else []
        bounds = [0] + cuts + [n]
        sizes = tuple(bounds[i + 1] - bounds[i] for i in range(groups))
        low, high = cfg.edge_probability
        synth = SynthConfig(
            group_sizes=sizes,
            intra_probability=float(trial_rng.uniform(low, high)),
            inter_probability=float(trial_rng.uniform(low, high)),
            degree_skew=float(trial_rng.uniform(1.0, cfg.max_degree_skew)),
            outcome_rate=float(trial_rng.uniform(0.1, 0.9)),
            tpr_targets=(1.0,),
            fpr_targets=(0.0,),
            attribute_levels=cfg.attribute_levels,
            seed=seed,
        )
        net = random_attributed_graph(synth)
        rate = float(trial_rng.uniform(0.0, 1.0))
        h = DecisionVector(tuple(int(x) for x in (trial_rng.random(n) < rate)))
        policy = ExpectationPolicy(
            delta=int(trial_rng.integers(1, cfg.max_delta + 1)),
            degenerate_rule=cfg.degenerate_rules[int(trial_rng.integers(len(cfg.degenerate_rules)))],
        )
        return _Trial(seed=seed, net=net, h=h, policy=policy, rng=trial_rng)

    @staticmethod
    def _perturb(trial: _Trial, frozen, raise_only=frozenset()) -> DecisionVector:
        """Random h': flips outside `frozen`, 0 -> 1 raises inside `raise_only`."""
        values = list(trial.h.decisions)
        for u in trial.net.nodes:
            if u in raise_only:
                if values[u] == 0 and trial.rng.random() < 0.5:
                    values[u] = 1
            elif u not in frozen and trial.rng.random() < 0.5:
                values[u] = 1 - values[u]
        return DecisionVector(tuple(values))

    @staticmethod
    def _twin(trial: _Trial) -> Tuple[AttributedNetwork, DecisionVector, Dict[int, int]]:
        """Disjoint union of the trial network with a relabelled copy of itself."""
        net, n = trial.net, trial.net.node_count
        perm = trial.rng.permutation(n)
        image = {v: n + int(perm[v]) for v in net.nodes}
        order = sorted(net.nodes, key=lambda v: image[v])
        edges = list(net.edges) + [(image[a], image[b]) for a, b in net.edges]
        twin = AttributedNetwork.build(
            node_count=2 * n,
            edges=edges,
            protected=list(net.protected) + [net.protected[v] for v in order],
            outcome=list(net.outcome) + [net.outcome[v] for v in order],
            unprotected=list(net.unprotected) + [net.unprotected[v] for v in order],
        )
        h = DecisionVector(tuple(trial.h.decisions) + tuple(trial.h[v] for v in order))
        return twin, h, image

    def run_trial(self, axiom: Axiom, trial: _Trial) -> Tuple[CheckOutcome, Witness]:
        """Construct the axiom's precondition on the trial and check it."""
        net, h, policy = trial.net, trial.h, trial.policy
        engine = self.engine_factory(policy)
        v = int(trial.rng.integers(net.node_count))
        around = neighborhood(net, v, policy.delta)

        if axiom in (Axiom.HOMOGENEITY, Axiom.EXPECTATION_ISOMORPHISM):
            twin, twin_h, image = self._twin(trial)
            check = check_homogeneity if axiom is Axiom.HOMOGENEITY else check_expectation_isomorphism
            outcome = check(twin, v, image[v], twin_h, policy, engine)
            return outcome, Witness(trial.seed, v, twin_h.decisions, twin_h.decisions, policy.delta, image[v])

        if axiom is Axiom.ALL_REJECT_BASELINE:
            zeros = DecisionVector.constant(net.node_count, 0)
            outcome = check_all_reject_baseline(net, v, policy, engine)
            return outcome, Witness(trial.seed, v, zeros.decisions, zeros.decisions, policy.delta)

        if axiom is Axiom.LOCALITY:
            h_prime = self._perturb(trial, around | {v})
            outcome = check_locality(net, v, h, h_prime, policy, engine)
        elif axiom is Axiom.MONOTONICITY:
            h = h.with_decision(v, 0)
            h_prime = self._perturb(_Trial(trial.seed, net, h, policy, trial.rng), around | {v}).with_decision(v, 1)
            outcome = check_monotonicity(net, v, h, h_prime, policy, engine)
        elif axiom is Axiom.NEIGHBORHOOD_EXPECTATION:
            h_prime = self._perturb(trial, around | {v}, raise_only=around)
            outcome = check_neighborhood_expectation(net, v, h, h_prime, policy, engine)
        elif axiom is Axiom.EXPECTATION_INVARIANCE:
            h_prime = self._perturb(trial, around)
            outcome = check_expectation_invariance(net, v, h, h_prime, policy, engine)
        else:
            h_prime = self._perturb(trial, around, raise_only=around)
            outcome = check_expectation_monotonicity(net, v, h, h_prime, policy, engine)
        return outcome, Witness(trial.seed, v, h.decisions, h_prime.decisions, policy.delta)

    def required_satisfied(self, trials: int) -> int:
        """
        Satisfied trials an axiom needs to pass.

        The larger of the fractional quota and min_satisfied_trials; runs
        shorter than min_satisfied_trials need every trial satisfied.
        """
        fractional = math.ceil(self.config.min_satisfied_fraction * trials)
        return max(fractional, min(trials, self.config.min_satisfied_trials))

    def run(self, trials: int, seed: int = 0, axioms: Optional[List[Axiom]] = None) -> List[AxiomVerdict]:
        """
        Run `trials` trials per axiom.

        Args:
            trials: Trials per axiom (>= 1)
            seed: Campaign seed; equal seeds give identical verdicts
            axioms: Subset to run (defaults to all, in declaration order)

        Returns:
            One AxiomVerdict per axiom
        """
        if isinstance(trials, bool) or not isinstance(trials, int) or trials < 1:
            raise ArgumentError(f"trials must be a positive integer, got {trials!r}")
        selected = list(axioms) if axioms else list(Axiom)
        required = self.required_satisfied(trials)
        verdicts = []
        for index, axiom in enumerate(Axiom):
            if axiom not in selected:
                continue
            rng = np.random.default_rng([seed, index])
            verdict = AxiomVerdict(axiom=axiom, required=required)
            for _ in range(trials):
                outcome, witness = self.run_trial(axiom, self.sample_trial(rng))
                verdict.add(outcome, witness)
            status = 'pass' if verdict.passed else 'FAIL'
            log.debug(f"  {axiom.value}: {verdict.satisfied}/{verdict.trials} satisfied, "
                      f"{len(verdict.violations)} violations ({status})")
            verdicts.append(verdict)
        return verdicts


def run_axiom_suite(
    config: Optional[AxiomSuiteConfig] = None,
    trials: int = 500,
    seed: int = 0,
    engine_factory: EngineFactory = PerceptionEngine,
) -> List[AxiomVerdict]:
    """Run the full randomized campaign; deterministic given the seed."""
    return AxiomSuite(config, engine_factory).run(trials, seed)


def verdicts_frame(verdicts: List[AxiomVerdict]) -> pd.DataFrame:
    """Machine-readable suite report."""
    return pd.DataFrame(
        [v.to_row() for v in verdicts],
        columns=['axiom', 'trials', 'satisfied', 'skipped', 'required', 'violations', 'passed'],
    )


def format_suite_report(verdicts: List[AxiomVerdict], max_witnesses: int = 3) -> str:
    """Structured text report: one line per axiom, then the first witnesses of each failure."""
    lines = []
    for verdict in verdicts:
        lines.append(
            f"{verdict.axiom.value}: trials={verdict.trials} satisfied={verdict.satisfied} "
            f"skipped={verdict.skipped} violations={len(verdict.violations)} "
            f"{'PASS' if verdict.passed else 'FAIL'}"
        )
        if not verdict.quota_met:
            lines.append(f"  satisfied trials below quota {verdict.required}")
        for witness in verdict.violations[:max_witnesses]:
            other = '' if witness.other_node is None else f" other_node={witness.other_node}"
            lines.append(f"  witness network_seed={witness.network_seed} node={witness.node}"
                         f"{other} delta={witness.delta}")
    passed = all(v.passed for v in verdicts)
    lines.append(f"overall: {'PASS' if passed else 'FAIL'}")
    return '\n'.join(lines)
