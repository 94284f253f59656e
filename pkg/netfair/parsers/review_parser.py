"""
Peer-review data ingest: papers, authors, and rosters into an AttributedNetwork.

One node per reviewed paper. Two papers are linked when they share an author,
or (with the collaboration rule) when an author of one lists an author of the
other as a prior collaborator.
"""

from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
from pathlib import Path
from typing import Dict, FrozenSet, List, Optional, Sequence, Set, Tuple, Union

import pandas as pd

from ..exceptions import ArgumentError, IngestError
from ..network.graph_core import AttributedNetwork, DecisionVector, Edge
from ..utils import log
from ..utils.constants import (
    AUTHOR_COLUMNS, DEFAULT_LIST_SEPARATOR, DEFAULT_THRESHOLD, PAPER_COLUMNS,
    PROTECTED_ADVANTAGED, PROTECTED_OTHER,
)
from ..utils.helpers import normalize_identifier, parse_binary, safe_float, split_list_field

PathLike = Union[str, Path]


class ProtectedAttribute(str, Enum):
    FAMOUS = 'famous'
    TOP_INSTITUTION = 'top_institution'


class LinkRule(str, Enum):
    SHARED_AUTHOR = 'shared'
    COLLABORATION = 'collaboration'


@dataclass(frozen=True)
class PaperRecord:
    paper_id: str
    author_ids: Tuple[str, ...]
    avg_rating: Optional[float]
    accepted: bool
    row: Optional[int] = field(default=None, compare=False)


@dataclass(frozen=True)
class AuthorRecord:
    author_id: str
    affiliation: str = ''
    prior_collaborator_ids: Tuple[str, ...] = ()


@dataclass(frozen=True)
class ProtectedSpec:
    """Which attribute defines X_p = 0, with its roster."""
    attribute: ProtectedAttribute = ProtectedAttribute.FAMOUS
    famous_author_ids: FrozenSet[str] = frozenset()
    top_institution_names: FrozenSet[str] = frozenset()

    def __post_init__(self):
        try:
            attribute = ProtectedAttribute(self.attribute)
        except ValueError:
            raise ArgumentError(f"unknown protected attribute {self.attribute!r}") from None
        object.__setattr__(self, 'attribute', attribute)
        if attribute is ProtectedAttribute.FAMOUS and not self.famous_author_ids:
            raise ArgumentError("famous-author roster is empty")
        if attribute is ProtectedAttribute.TOP_INSTITUTION and not self.top_institution_names:
            raise ArgumentError("top-institution roster is empty")


def _read_frame(path: PathLike, required: Sequence[str]) -> Tuple[pd.DataFrame, int]:
    """
    Load a delimiter-separated or JSON table as strings.

    Returns:
        (frame, offset) where offset turns a 0-based frame index into the
        row number users see in the file
    """
    path = Path(path)
    try:
        if path.suffix.lower() == '.json':
            df = pd.read_json(path, orient='records', dtype=False, convert_dates=False)
            offset = 1
        else:
            df = pd.read_csv(path, dtype=str, keep_default_na=False)
            offset = 2
    except (OSError, ValueError, pd.errors.ParserError) as e:
        raise IngestError(f"cannot read table: {e}", path=str(path)) from e

    missing = [c for c in required if c not in df.columns]
    if missing:
        raise IngestError(f"missing columns {missing}", path=str(path))
    return df, offset


def _identifier(value, normalize: bool) -> str:
    text = '' if value is None else str(value).strip()
    return normalize_identifier(text) if normalize else text


def read_papers(
    path: PathLike,
    separator: str = DEFAULT_LIST_SEPARATOR,
    normalize_ids: bool = False,
) -> List[PaperRecord]:
    """
    Read the papers table.

    Args:
        path: CSV (author_ids as a separated list field) or JSON records
        separator: List-field separator
        normalize_ids: Case-fold and collapse whitespace in author ids

    Returns:
        PaperRecords in file order

    Raises:
        IngestError: On schema violations, naming the row
    """
    df, offset = _read_frame(path, PAPER_COLUMNS)
    if df.empty:
        raise IngestError("papers table has no rows", path=str(path))

    papers = []
    seen: Set[str] = set()
    for index, row in enumerate(df.to_dict('records')):
        line = index + offset
        paper_id = str(row['paper_id']).strip()
        if not paper_id:
            raise IngestError("empty paper_id", path=str(path), row=line)
        if paper_id in seen:
            raise IngestError("duplicate paper_id", path=str(path), row=line, paper_id=paper_id)
        seen.add(paper_id)

        authors = tuple(_identifier(a, normalize_ids) for a in split_list_field(row['author_ids'], separator))
        if not authors:
            raise IngestError("paper has no authors", path=str(path), row=line, paper_id=paper_id)

        raw_rating = row['avg_rating']
        rating = safe_float(raw_rating, default=None)
        if rating is None and isinstance(raw_rating, str) and raw_rating.strip():
            raise IngestError(f"avg_rating {raw_rating!r} is not a number",
                              path=str(path), row=line, paper_id=paper_id)

        accepted = parse_binary(row['accepted'])
        if accepted is None:
            raise IngestError(f"accepted {row['accepted']!r} is not a boolean",
                              path=str(path), row=line, paper_id=paper_id)

        papers.append(PaperRecord(
            paper_id=paper_id,
            author_ids=tuple(dict.fromkeys(authors)),
            avg_rating=rating,
            accepted=bool(accepted),
            row=line,
        ))
    log.debug(f"  Read {len(papers)} papers from {path}")
    return papers


def read_authors(
    path: PathLike,
    separator: str = DEFAULT_LIST_SEPARATOR,
    normalize_ids: bool = False,
) -> Dict[str, AuthorRecord]:
    """
    Read the authors table.

    Returns:
        AuthorRecords keyed by author_id

    Raises:
        IngestError: On missing columns, empty or duplicate author ids
    """
    df, offset = _read_frame(path, AUTHOR_COLUMNS)
    authors: Dict[str, AuthorRecord] = {}
    for index, row in enumerate(df.to_dict('records')):
        line = index + offset
        author_id = _identifier(row['author_id'], normalize_ids)
        if not author_id:
            raise IngestError("empty author_id", path=str(path), row=line)
        if author_id in authors:
            raise IngestError(f"duplicate author_id {author_id!r}", path=str(path), row=line)
        affiliation = row['affiliation']
        authors[author_id] = AuthorRecord(
            author_id=author_id,
            affiliation=_identifier(affiliation, normalize_ids) if isinstance(affiliation, str) else '',
            prior_collaborator_ids=tuple(
                _identifier(c, normalize_ids) for c in split_list_field(row['prior_collaborator_ids'], separator)
            ),
        )
    log.debug(f"  Read {len(authors)} authors from {path}")
    return authors


def read_roster(path: PathLike, normalize_ids: bool = False) -> FrozenSet[str]:
    """One entry per line; blank lines and '#' comments are ignored."""
    try:
        with open(path, 'r', encoding='utf-8') as f:
            lines = f.read().splitlines()
    except OSError as e:
        raise IngestError(f"cannot read roster: {e}", path=str(path)) from e
    entries = (line.strip() for line in lines)
    return frozenset(_identifier(e, normalize_ids) for e in entries if e and not e.startswith('#'))


def _check_authors(papers: Sequence[PaperRecord], authors: Dict[str, AuthorRecord]) -> None:
    for paper in papers:
        for author_id in paper.author_ids:
            if author_id not in authors:
                raise IngestError(f"unknown author {author_id!r}", paper_id=paper.paper_id)


def review_edges(
    papers: Sequence[PaperRecord],
    authors: Dict[str, AuthorRecord],
    link_rule: LinkRule = LinkRule.SHARED_AUTHOR,
) -> Set[Edge]:
    """
    Paper-index edges under the link rule.

    Raises:
        IngestError: If a paper names an author missing from the authors table
    """
    link_rule = LinkRule(link_rule)
    _check_authors(papers, authors)

    papers_by_author: Dict[str, List[int]] = {}
    for index, paper in enumerate(papers):
        for author_id in paper.author_ids:
            papers_by_author.setdefault(author_id, []).append(index)

    edges: Set[Edge] = set()
    for indices in papers_by_author.values():
        edges.update(combinations(sorted(indices), 2))

    if link_rule is LinkRule.COLLABORATION:
        for author_id, indices in papers_by_author.items():
            for other in authors[author_id].prior_collaborator_ids:
                for a in indices:
                    for b in papers_by_author.get(other, ()):
                        if a != b:
                            edges.add((min(a, b), max(a, b)))
    return edges


def assign_protected(
    papers: Sequence[PaperRecord],
    spec: ProtectedSpec,
    authors: Optional[Dict[str, AuthorRecord]] = None,
) -> List[int]:
    """
    X_p = 0 when any author is famous (or any affiliation is a top institution).

    Raises:
        ArgumentError: If the top-institution attribute is chosen without authors
    """
    if spec.attribute is ProtectedAttribute.FAMOUS:
        return [
            PROTECTED_ADVANTAGED if any(a in spec.famous_author_ids for a in paper.author_ids)
            else PROTECTED_OTHER
            for paper in papers
        ]
    if authors is None:
        raise ArgumentError("top-institution attribute needs the authors table")
    _check_authors(papers, authors)
    return [
        PROTECTED_ADVANTAGED
        if any(authors[a].affiliation in spec.top_institution_names for a in paper.author_ids)
        else PROTECTED_OTHER
        for paper in papers
    ]


def acceptability_labels(
    papers: Sequence[PaperRecord],
    threshold: float = DEFAULT_THRESHOLD,
    path: Optional[PathLike] = None,
) -> List[int]:
    """
    y = 1 iff avg_rating > threshold - 1 (threshold 6 means "larger than 5").

    Raises:
        IngestError: If a paper has no rating
    """
    labels = []
    for paper in papers:
        if paper.avg_rating is None:
            raise IngestError("missing avg_rating", path=None if path is None else str(path),
                              row=paper.row, paper_id=paper.paper_id)
        labels.append(int(paper.avg_rating > threshold - 1))
    return labels


def review_decisions(papers: Sequence[PaperRecord]) -> DecisionVector:
    """The venue's accept/reject decisions as h."""
    return DecisionVector(tuple(int(p.accepted) for p in papers))


def build_review_network(
    papers: Sequence[PaperRecord],
    authors: Dict[str, AuthorRecord],
    link_rule: LinkRule = LinkRule.SHARED_AUTHOR,
    protected: Optional[Sequence[int]] = None,
    outcome: Optional[Sequence[int]] = None,
    threshold: float = DEFAULT_THRESHOLD,
) -> AttributedNetwork:
    """
    Build the paper network.

    Args:
        papers: Reviewed papers; node i is papers[i]
        authors: Author table keyed by id
        link_rule: shared-author links only, or also prior collaborations
        protected: X_p per paper (defaults to PROTECTED_OTHER everywhere)
        outcome: y per paper (defaults to acceptability_labels at threshold)
        threshold: Acceptability threshold used when outcome is omitted

    Returns:
        AttributedNetwork without unprotected attributes
    """
    edges = review_edges(papers, authors, link_rule)
    if protected is None:
        protected = [PROTECTED_OTHER] * len(papers)
    if outcome is None:
        outcome = acceptability_labels(papers, threshold)
    return AttributedNetwork.build(
        node_count=len(papers),
        edges=sorted(edges),
        protected=list(protected),
        outcome=list(outcome),
    )


@dataclass
class ReviewDataset:
    """Everything the ingest command produces for one corpus."""
    papers: List[PaperRecord]
    authors: Dict[str, AuthorRecord]
    spec: ProtectedSpec
    network: AttributedNetwork
    decisions: DecisionVector
    threshold: float = DEFAULT_THRESHOLD
    link_rule: LinkRule = LinkRule.SHARED_AUTHOR
    paper_ids: List[str] = field(default_factory=list)


def load_review_dataset(
    papers_path: PathLike,
    authors_path: PathLike,
    famous_path: Optional[PathLike] = None,
    top_institutions_path: Optional[PathLike] = None,
    attribute: Union[str, ProtectedAttribute] = ProtectedAttribute.FAMOUS,
    link_rule: Union[str, LinkRule] = LinkRule.SHARED_AUTHOR,
    threshold: float = DEFAULT_THRESHOLD,
    separator: str = DEFAULT_LIST_SEPARATOR,
    normalize_ids: bool = False,
) -> ReviewDataset:
    """
    Read every input file and build the review network with labels and decisions.

    Raises:
        IngestError: On unreadable or malformed inputs
        ArgumentError: If the chosen attribute's roster is missing or empty
    """
    log.info(f"Reading papers from {papers_path}...")
    papers = read_papers(papers_path, separator, normalize_ids)
    authors = read_authors(authors_path, separator, normalize_ids)

    famous = read_roster(famous_path, normalize_ids) if famous_path else frozenset()
    top = read_roster(top_institutions_path, normalize_ids) if top_institutions_path else frozenset()
    spec = ProtectedSpec(attribute=attribute, famous_author_ids=famous, top_institution_names=top)

    protected = assign_protected(papers, spec, authors)
    outcome = acceptability_labels(papers, threshold, papers_path)
    network = build_review_network(papers, authors, LinkRule(link_rule), protected, outcome)
    log.info(f"Built network: {network.node_count} papers, {len(network.edges)} links")

    return ReviewDataset(
        papers=list(papers),
        authors=authors,
        spec=spec,
        network=network,
        decisions=review_decisions(papers),
        threshold=threshold,
        link_rule=LinkRule(link_rule),
        paper_ids=[p.paper_id for p in papers],
    )
