"""
Tests for review-data ingest and the network interchange tables.
"""
import pytest
import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).parent.parent))

from netfair.exceptions import ArgumentError, IngestError, NetworkConstructionError
from netfair.network.graph_core import AttributedNetwork, DecisionVector
from netfair.parsers.network_io import export_network, load_decisions, load_network
from netfair.parsers.review_parser import (
    AuthorRecord,
    LinkRule,
    PaperRecord,
    ProtectedAttribute,
    ProtectedSpec,
    acceptability_labels,
    assign_protected,
    build_review_network,
    load_review_dataset,
    read_authors,
    read_papers,
    read_roster,
    review_edges,
)
from netfair.reports.manifest import RunManifest
from netfair.synth.generator import SynthConfig, random_attributed_graph


def paper(paper_id, authors, rating=6.0, accepted=False):
    return PaperRecord(paper_id, tuple(authors), rating, accepted)


def author_table(*ids):
    return {a: AuthorRecord(a) for a in ids}


class TestReadPapers:
    """Tests for read_papers."""

    def test_reads_fixture(self, review_files):
        """Test ids, authors, ratings, and decisions of the fixture corpus."""
        papers = read_papers(review_files['papers'])
        assert [p.paper_id for p in papers] == ['p1', 'p2', 'p3', 'p4']
        assert papers[0].author_ids == ('a', 'x')
        assert papers[2].avg_rating == 7.5
        assert [p.accepted for p in papers] == [True, False, True, False]

    def test_empty_table(self, tmp_path):
        """Test that a header-only table is refused."""
        path = tmp_path / 'papers.csv'
        path.write_text("paper_id,author_ids,avg_rating,accepted\n", encoding='utf-8')
        with pytest.raises(IngestError):
            read_papers(path)

    def test_missing_column(self, tmp_path):
        """Test that a missing column is named."""
        path = tmp_path / 'papers.csv'
        path.write_text("paper_id,author_ids,accepted\np1,a,1\n", encoding='utf-8')
        with pytest.raises(IngestError, match='avg_rating'):
            read_papers(path)

    def test_bad_rating_names_row(self, tmp_path):
        """Test that a non-numeric rating reports its file row and paper."""
        path = tmp_path / 'papers.csv'
        path.write_text(
            "paper_id,author_ids,avg_rating,accepted\n"
            "p1,a,6.0,1\n"
            "p2,b,high,0\n",
            encoding='utf-8',
        )
        with pytest.raises(IngestError) as exc_info:
            read_papers(path)
        assert exc_info.value.row == 3
        assert exc_info.value.paper_id == 'p2'

    def test_duplicate_and_authorless(self, tmp_path):
        """Test duplicate ids and papers without authors."""
        path = tmp_path / 'papers.csv'
        path.write_text("paper_id,author_ids,avg_rating,accepted\np1,a,6,1\np1,b,6,1\n", encoding='utf-8')
        with pytest.raises(IngestError, match='duplicate'):
            read_papers(path)
        path.write_text("paper_id,author_ids,avg_rating,accepted\np1,,6,1\n", encoding='utf-8')
        with pytest.raises(IngestError, match='no authors'):
            read_papers(path)

    def test_non_binary_decision(self, tmp_path):
        """Test that an unrecognised accepted value is refused."""
        path = tmp_path / 'papers.csv'
        path.write_text("paper_id,author_ids,avg_rating,accepted\np1,a,6,maybe\n", encoding='utf-8')
        with pytest.raises(IngestError, match='boolean'):
            read_papers(path)

    def test_json_input(self, tmp_path):
        """Test JSON records with list-valued author ids."""
        path = tmp_path / 'papers.json'
        path.write_text(
            '[{"paper_id": "p1", "author_ids": ["a", "b"], "avg_rating": 6.5, "accepted": true}]',
            encoding='utf-8',
        )
        papers = read_papers(path)
        assert papers[0].author_ids == ('a', 'b')
        assert papers[0].accepted is True
        assert papers[0].avg_rating == 6.5
        assert papers[0].row == 1

    def test_json_must_be_records(self, tmp_path):
        """Test that a JSON scalar object is not accepted as a papers table."""
        path = tmp_path / 'papers.json'
        path.write_text('{"paper_id": "p1"}', encoding='utf-8')
        with pytest.raises(IngestError):
            read_papers(path)

    def test_normalized_ids(self, tmp_path):
        """Test case-folding of author ids."""
        path = tmp_path / 'papers.csv'
        path.write_text("paper_id,author_ids,avg_rating,accepted\np1,Jane  Doe;JANE DOE,6,1\n", encoding='utf-8')
        assert read_papers(path, normalize_ids=True)[0].author_ids == ('jane doe',)


class TestAuthorsAndRosters:
    """Tests for read_authors and read_roster."""

    def test_reads_authors(self, review_files):
        """Test affiliations and prior collaborators."""
        authors = read_authors(review_files['authors'])
        assert authors['d'].affiliation == 'Top U'
        assert authors['d'].prior_collaborator_ids == ('c',)
        assert authors['a'].prior_collaborator_ids == ()

    def test_roster_skips_comments(self, review_files):
        """Test that comment lines are ignored."""
        assert read_roster(review_files['famous']) == frozenset({'a'})

    def test_missing_roster(self, tmp_path):
        """Test that an unreadable roster is an ingest error."""
        with pytest.raises(IngestError):
            read_roster(tmp_path / 'missing.txt')

    def test_empty_roster_spec(self):
        """Test that the chosen attribute needs a non-empty roster."""
        with pytest.raises(ArgumentError):
            ProtectedSpec(ProtectedAttribute.FAMOUS)
        with pytest.raises(ArgumentError):
            ProtectedSpec('top_institution', famous_author_ids=frozenset({'a'}))


class TestEdges:
    """Tests for review_edges."""

    def test_shared_author_links(self):
        """Test that papers sharing an author are linked."""
        papers = [paper('p1', 'ab'), paper('p2', 'bc'), paper('p3', 'd')]
        assert review_edges(papers, author_table(*'abcd')) == {(0, 1)}

    def test_multiple_shared_authors_one_edge(self):
        """Test that several shared authors still give one edge."""
        papers = [paper('p1', 'abc'), paper('p2', 'abc'), paper('p3', 'c')]
        assert review_edges(papers, author_table(*'abc')) == {(0, 1), (0, 2), (1, 2)}

    def test_dangling_author(self):
        """Test that an author missing from the table names the paper."""
        with pytest.raises(IngestError) as exc_info:
            review_edges([paper('p1', 'az')], author_table('a'))
        assert exc_info.value.paper_id == 'p1'

    def test_collaboration_rule(self, review_files):
        """Test that prior collaborations add links."""
        papers = read_papers(review_files['papers'])
        authors = read_authors(review_files['authors'])
        assert review_edges(papers, authors) == {(0, 1), (1, 2)}
        assert review_edges(papers, authors, LinkRule.COLLABORATION) == {(0, 1), (1, 2), (2, 3)}


class TestLabels:
    """Tests for protected assignment and acceptability."""

    def test_famous_assignment(self, review_files):
        """Test that any famous author makes the paper advantaged."""
        papers = read_papers(review_files['papers'])
        spec = ProtectedSpec(famous_author_ids=frozenset({'a'}))
        assert assign_protected(papers, spec) == [0, 0, 1, 1]

    def test_institution_assignment(self, review_files):
        """Test that any top-institution affiliation makes the paper advantaged."""
        papers = read_papers(review_files['papers'])
        authors = read_authors(review_files['authors'])
        spec = ProtectedSpec('top_institution', top_institution_names=frozenset({'Top U'}))
        assert assign_protected(papers, spec, authors) == [1, 1, 1, 0]
        with pytest.raises(ArgumentError):
            assign_protected(papers, spec)

    def test_threshold(self):
        """Test that y = 1 iff the rating exceeds threshold - 1."""
        papers = [paper('p1', 'a', 5.0), paper('p2', 'a', 5.01), paper('p3', 'a', 7.0)]
        assert acceptability_labels(papers) == [0, 1, 1]
        assert acceptability_labels(papers, threshold=7.0) == [0, 0, 1]

    def test_missing_rating(self):
        """Test that a paper without a rating cannot be labelled."""
        with pytest.raises(IngestError, match='missing avg_rating'):
            acceptability_labels([paper('p1', 'a', None)])

    def test_missing_rating_names_row(self, review_files):
        """Test that an unrated paper is reported with its file and row."""
        path = review_files['papers']
        path.write_text(
            "paper_id,author_ids,avg_rating,accepted\n"
            "p1,a;x,6.2,true\n"
            "p2,a;b,,false\n",
            encoding='utf-8',
        )
        papers = read_papers(path)
        assert [p.row for p in papers] == [2, 3]
        with pytest.raises(IngestError) as exc_info:
            load_review_dataset(path, review_files['authors'], famous_path=review_files['famous'])
        assert exc_info.value.row == 3
        assert exc_info.value.paper_id == 'p2'
        assert exc_info.value.path == str(path)

    def test_default_protected(self):
        """Test that the builder defaults every paper to the other group."""
        net = build_review_network([paper('p1', 'a'), paper('p2', 'a')], author_table('a'))
        assert net.protected == (1, 1)
        assert net.edges == frozenset({(0, 1)})


class TestLoadReviewDataset:
    """Tests for the full ingest."""

    def test_famous_dataset(self, review_files):
        """Test network, labels, and decisions of the fixture corpus."""
        dataset = load_review_dataset(
            review_files['papers'], review_files['authors'], famous_path=review_files['famous'])
        net = dataset.network
        assert net.node_count == 4
        assert net.protected == (0, 0, 1, 1)
        assert net.outcome == (1, 0, 1, 0)
        assert dataset.decisions.decisions == (1, 0, 1, 0)
        assert dataset.paper_ids == ['p1', 'p2', 'p3', 'p4']

    def test_institution_collaboration_dataset(self, review_files):
        """Test the top-institution attribute with collaboration links."""
        dataset = load_review_dataset(
            review_files['papers'], review_files['authors'],
            top_institutions_path=review_files['top'],
            attribute='top_institution', link_rule='collaboration',
        )
        assert dataset.network.protected == (1, 1, 1, 0)
        assert len(dataset.network.edges) == 3

    def test_missing_roster_argument(self, review_files):
        """Test that the famous attribute without a roster is an argument error."""
        with pytest.raises(ArgumentError):
            load_review_dataset(review_files['papers'], review_files['authors'])


class TestInterchange:
    """Tests for export_network and load_network."""

    def test_round_trip_random_networks(self, tmp_path):
        """Test that 50 exported networks load back equal, decisions included."""
        rng = np.random.default_rng(21)
        for i in range(50):
            config = SynthConfig(
                group_sizes=(int(rng.integers(1, 15)), int(rng.integers(1, 15))),
                attribute_levels=int(rng.integers(0, 4)),
                seed=i,
            )
            net = random_attributed_graph(config)
            if i % 3 == 1:
                labels = ['famous' if p == 0 else 'other' for p in net.protected]
                net = AttributedNetwork.build(
                    net.node_count, net.edges, labels, net.outcome, net.unprotected)
            elif i % 3 == 2:
                labels = [0.1 * (p + 1) for p in net.protected]
                net = AttributedNetwork.build(
                    net.node_count, net.edges, labels, net.outcome, net.unprotected)
            h = DecisionVector(tuple(int(x) for x in rng.integers(0, 2, net.node_count)))
            directory = tmp_path / f"net{i}"
            export_network(net, directory, decisions=h)
            loaded = load_network(directory)
            assert loaded == net
            assert load_decisions(directory / 'decisions.csv', loaded) == h

    def test_empty_network(self, tmp_path):
        """Test that the empty network round-trips."""
        net = AttributedNetwork.build(0, [], [], [])
        export_network(net, tmp_path)
        assert load_network(tmp_path) == net

    def test_manifest_header(self, tmp_path):
        """Test that files start with the manifest and still load."""
        net = AttributedNetwork.build(2, [(0, 1)], [0, 1], [1, 0])
        export_network(net, tmp_path, manifest=RunManifest(command='ingest', seed=3))
        first = (tmp_path / 'nodes.csv').read_text(encoding='utf-8').splitlines()[0]
        assert first == '# command: ingest'
        assert load_network(tmp_path) == net

    def test_json_mirror(self, tmp_path):
        """Test that 'both' writes a JSON mirror next to each table."""
        net = AttributedNetwork.build(2, [(0, 1)], [0, 1], [1, 0])
        written = export_network(net, tmp_path, fmt='both')
        assert tmp_path / 'nodes.json' in written
        assert tmp_path / 'edges.json' in written

    def test_string_labels_keep_their_type(self, tmp_path):
        """Test that numeric-looking string labels load back as strings."""
        net = AttributedNetwork.build(
            3, [(0, 1)], ['1', '007', 'x'], [1, 0, 1],
            unprotected=[('2.50', 4, 0.5), ('a', 5, 1.0), ('3', 6, 2.0)],
        )
        export_network(net, tmp_path)
        header = (tmp_path / 'nodes.csv').read_text(encoding='utf-8')
        assert '# column_types: protected_value=str, x_0=str, x_1=int, x_2=float' in header
        loaded = load_network(tmp_path)
        assert loaded == net
        assert loaded.protected == ('1', '007', 'x')
        assert loaded.unprotected[0] == ('2.50', 4, 0.5)

    def test_mixed_and_boolean_labels(self, tmp_path):
        """Test that mixed-type and boolean columns round-trip exactly."""
        net = AttributedNetwork.build(
            4, [], [1, '1', 2.5, True], [0, 0, 1, 1],
            unprotected=[(False,), (True,), (False,), (True,)],
        )
        export_network(net, tmp_path)
        loaded = load_network(tmp_path)
        assert [type(p) for p in loaded.protected] == [int, str, float, bool]
        assert loaded == net

    def test_json_only_directory(self, tmp_path):
        """Test that a directory written with --format json loads like a CSV one."""
        net = AttributedNetwork.build(3, [(0, 1), (1, 2)], ['a', '2', 'b'], [1, 0, 1])
        h = DecisionVector((1, 0, 0))
        export_network(net, tmp_path, decisions=h, fmt='json')
        assert not (tmp_path / 'nodes.csv').exists()
        loaded = load_network(tmp_path)
        assert loaded == net
        assert load_decisions(tmp_path / 'decisions.csv', loaded) == h

    def test_bad_typed_label_names_row(self, tmp_path):
        """Test that a cell that does not match its declared type is reported with its row."""
        (tmp_path / 'nodes.csv').write_text(
            "# column_types: protected_value=int\nnode_id,protected_value,outcome\n0,1,1\n1,one,0\n",
            encoding='utf-8')
        (tmp_path / 'edges.csv').write_text("node_id_a,node_id_b\n", encoding='utf-8')
        with pytest.raises(IngestError) as exc_info:
            load_network(tmp_path)
        assert exc_info.value.row == 4

    def test_untyped_table_guesses_labels(self, tmp_path):
        """Test that hand-written tables without column types still parse numbers."""
        self._write_raw(tmp_path, "0,1\n")
        assert load_network(tmp_path).protected == (0, 0, 1)

    def test_unsupported_label_type(self, tmp_path):
        """Test that labels which cannot be stored are refused on export."""
        net = AttributedNetwork.build(1, [], [(0, 1)], [0])
        with pytest.raises(NetworkConstructionError):
            export_network(net, tmp_path)

    def _write_raw(self, directory, edges_body):
        (directory / 'nodes.csv').write_text(
            "node_id,protected_value,outcome\n0,0,1\n1,0,0\n2,1,1\n", encoding='utf-8')
        (directory / 'edges.csv').write_text("node_id_a,node_id_b\n" + edges_body, encoding='utf-8')

    def test_invalid_edges(self, tmp_path):
        """Test that self-loops and duplicates fail unless normalized."""
        self._write_raw(tmp_path, "0,1\n1,0\n2,2\n")
        with pytest.raises(NetworkConstructionError):
            load_network(tmp_path)
        net = load_network(tmp_path, normalize=True)
        assert net.edges == frozenset({(0, 1)})

    def test_bad_node_ids(self, tmp_path):
        """Test that node ids must be 0..n-1."""
        (tmp_path / 'nodes.csv').write_text(
            "node_id,protected_value,outcome\n0,0,1\n5,0,0\n", encoding='utf-8')
        (tmp_path / 'edges.csv').write_text("node_id_a,node_id_b\n", encoding='utf-8')
        with pytest.raises(IngestError) as exc_info:
            load_network(tmp_path)
        assert exc_info.value.row == 3

    def test_missing_decisions(self, tmp_path):
        """Test that every node needs a decision."""
        self._write_raw(tmp_path, "0,1\n")
        net = load_network(tmp_path)
        path = tmp_path / 'decisions.csv'
        path.write_text("node_id,decision\n0,1\n1,0\n", encoding='utf-8')
        with pytest.raises(IngestError, match='no decision'):
            load_decisions(path, net)
