"""
Pytest configuration and shared fixtures for netfair tests.
"""
import pytest
import sys
from pathlib import Path

# Add the repository root to the path so 'from netfair.' finds the package
sys.path.insert(0, str(Path(__file__).parent.parent))

from netfair.network.graph_core import AttributedNetwork, DecisionVector


def build_network(node_count, edges, protected=None, outcome=None, unprotected=None):
    """Small builder with all-zero labels by default."""
    return AttributedNetwork.build(
        node_count=node_count,
        edges=edges,
        protected=protected if protected is not None else [0] * node_count,
        outcome=outcome if outcome is not None else [0] * node_count,
        unprotected=unprotected,
    )


def network_from_counts(cells_by_group):
    """
    Edgeless network whose confusion tallies are given per protected group.

    Args:
        cells_by_group: {protected_value: (tp, fp, fn, tn)}

    Returns:
        (network, decisions)
    """
    protected, outcome, decisions = [], [], []
    for key, (tp, fp, fn, tn) in cells_by_group.items():
        for count, y, h in ((tp, 1, 1), (fp, 0, 1), (fn, 1, 0), (tn, 0, 0)):
            protected += [key] * count
            outcome += [y] * count
            decisions += [h] * count
    net = AttributedNetwork.build(len(protected), [], protected, outcome)
    return net, DecisionVector(tuple(decisions))


# Case-study tallies (tp, fp, fn, tn); 0 is the advantaged group
FAMOUS_COUNTS = {0: (94, 13, 12, 153), 1: (495, 85, 105, 1255)}
INSTITUTION_COUNTS = {0: (190, 34, 21, 328), 1: (399, 64, 96, 1080)}


@pytest.fixture
def path_network():
    """Path 0-1-2-3-4, all labels zero."""
    return build_network(5, [(0, 1), (1, 2), (2, 3), (3, 4)])


@pytest.fixture
def star_network():
    """
    Star centered at 0 with leaves 1..4.

    Outcomes: 0,1,2 positive; 3,4 negative. Decisions: 1 and 3 accepted.
    """
    net = build_network(
        5,
        [(0, 1), (0, 2), (0, 3), (0, 4)],
        protected=[0, 0, 1, 1, 1],
        outcome=[1, 1, 1, 0, 0],
    )
    return net, DecisionVector((0, 1, 0, 1, 0))


@pytest.fixture
def isolated_network():
    """Four isolated nodes with mixed outcomes."""
    return build_network(4, [], protected=[0, 0, 1, 1], outcome=[1, 0, 1, 0])


@pytest.fixture
def famous_case():
    """Edgeless network with the famous-author confusion tallies."""
    return network_from_counts(FAMOUS_COUNTS)


@pytest.fixture
def institution_case():
    """Edgeless network with the top-institution confusion tallies."""
    return network_from_counts(INSTITUTION_COUNTS)


@pytest.fixture
def review_files(tmp_path):
    """
    Small review corpus on disk.

    Papers p1..p4: p1 and p2 share author a; p2 and p3 share b; p4 is by d,
    whose prior collaborator is c (author of p3). a is famous; d is at a
    top institution.
    """
    papers = tmp_path / 'papers.csv'
    papers.write_text(
        "paper_id,author_ids,avg_rating,accepted\n"
        "p1,a;x,6.2,true\n"
        "p2,a;b,5.0,false\n"
        "p3,b;c,7.5,1\n"
        "p4,d,4.0,reject\n",
        encoding='utf-8',
    )
    authors = tmp_path / 'authors.csv'
    authors.write_text(
        "author_id,affiliation,prior_collaborator_ids\n"
        "a,Uni A,\n"
        "b,Uni B,\n"
        "c,Uni C,\n"
        "d,Top U,c\n"
        "x,Uni A,\n",
        encoding='utf-8',
    )
    famous = tmp_path / 'famous.txt'
    famous.write_text("# famous authors\na\n", encoding='utf-8')
    top = tmp_path / 'top.txt'
    top.write_text("Top U\n", encoding='utf-8')
    return {'papers': papers, 'authors': authors, 'famous': famous, 'top': top}
