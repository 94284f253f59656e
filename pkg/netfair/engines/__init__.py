"""netfair perception and axiom engines."""

from .perception_engine import (
    DegenerateRule,
    ExpectationPolicy,
    PerceptionEngine,
    PerceptionRecord,
    peer_expectation,
    fairness_perception,
    perceive_all,
    expectation_profile,
    profile_at,
)
from .isomorphism import decision_isomorphic, find_decision_isomorphism
from .axiom_engine import (
    Axiom,
    AxiomSuite,
    AxiomSuiteConfig,
    AxiomVerdict,
    run_axiom_suite,
)

__all__ = [
    'DegenerateRule',
    'ExpectationPolicy',
    'PerceptionEngine',
    'PerceptionRecord',
    'peer_expectation',
    'fairness_perception',
    'perceive_all',
    'expectation_profile',
    'profile_at',
    'decision_isomorphic',
    'find_decision_isomorphism',
    'Axiom',
    'AxiomSuite',
    'AxiomSuiteConfig',
    'AxiomVerdict',
    'run_axiom_suite',
]
