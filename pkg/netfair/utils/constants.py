"""
Defaults, file layout, and configuration for netfair.
"""

import os
from pathlib import Path


# === Directory and File Path Configuration ===
def _default_output_dir() -> Path:
    """Resolve the default output directory."""
    env_base = os.environ.get("NETFAIR_OUTPUT_DIR")
    if env_base:
        return Path(env_base).expanduser()
    return Path("netfair_output")


DEFAULT_OUTPUT_DIR = _default_output_dir()

# === Perception and Visibility Defaults ===
DEFAULT_DELTA = 1
DEFAULT_DEGENERATE_RULE = 'zero_expectation'
DEFAULT_EPSILON = 0
DEFAULT_DELTA_MAX = 6
NEAR_ZERO_EXPECTATION = 0.05        # "expected value close to 0" cutoff
EXPECTATION_BINS = 10

# CLI spelling of the degenerate rules
DEGENERATE_FLAG_VALUES = {
    'zero': 'zero_expectation',
    'exclude': 'mark_ineligible',
}

# === Ingest Defaults ===
DEFAULT_THRESHOLD = 6.0             # acceptable iff avg_rating > threshold - 1
DEFAULT_LIST_SEPARATOR = ';'
PROTECTED_ADVANTAGED = 0            # X_p = 0: famous author / top institution
PROTECTED_OTHER = 1

# === Graph Limits ===
MATRIX_ORACLE_MAX_NODES = 200

# === Interchange Format ===
NODES_FILE = 'nodes.csv'
EDGES_FILE = 'edges.csv'
DECISIONS_FILE = 'decisions.csv'

NODE_ID_COL = 'node_id'
PROTECTED_COL = 'protected_value'
OUTCOME_COL = 'outcome'
ATTRIBUTE_PREFIX = 'x_'
EDGE_A_COL = 'node_id_a'
EDGE_B_COL = 'node_id_b'
DECISION_COL = 'decision'

PAPER_COLUMNS = ['paper_id', 'author_ids', 'avg_rating', 'accepted']
AUTHOR_COLUMNS = ['author_id', 'affiliation', 'prior_collaborator_ids']

MANIFEST_PREFIX = '# '
COLUMN_TYPES_KEY = 'column_types'

# === Axiom Suite ===
AXIOM_MIN_SATISFIED_FRACTION = 0.9
AXIOM_MIN_SATISFIED_TRIALS = 500
DEFAULT_AXIOM_TRIALS = 500
DEFAULT_SEED = 0

# === Exit Codes ===
EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_VERIFICATION = 4

# === Excel Styling ===
EXCEL_COLORS = {
    'header_blue': '#17408B',
    'white': '#FFFFFF',
    'light_gray': '#F5F5F5',
    'alt_row': '#F0F8FF',
}

# Columns rendered with three decimals in workbooks
RATE_COLUMNS = [
    'expectation', 'fairness_visibility', 'acceptance_probability',
    'tpr', 'fpr', 'share', 'mean_degree',
]
