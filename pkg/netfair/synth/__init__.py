"""netfair synthetic network generators."""

from .generator import SynthConfig, random_attributed_graph, biased_decision, pitfall_instance

__all__ = ['SynthConfig', 'random_attributed_graph', 'biased_decision', 'pitfall_instance']
