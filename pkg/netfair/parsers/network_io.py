"""
Interchange tables for attributed networks and decision vectors.

A network directory holds nodes.csv (node_id, protected_value, outcome,
x_0..x_{k-1}), edges.csv (node_id_a, node_id_b) and optionally decisions.csv
(node_id, decision). Label columns carry their type in the header, so loading
restores ints, floats and strings exactly. Any table may be present only as its
.json mirror.
"""

from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

import pandas as pd

from ..exceptions import IngestError, NetworkConstructionError
from ..network.graph_core import AttributedNetwork, DecisionVector, normalize_edge
from ..reports.manifest import (
    RunManifest, count_manifest_lines, read_column_types, read_table, resolve_table, write_table
)
from ..utils import log
from ..utils.constants import (
    ATTRIBUTE_PREFIX, DECISION_COL, DECISIONS_FILE, EDGE_A_COL, EDGE_B_COL, EDGES_FILE,
    NODE_ID_COL, NODES_FILE, OUTCOME_COL, PROTECTED_COL,
)
from ..utils.helpers import decode_scalar, encode_scalar, parse_binary, parse_scalar, scalar_kind

PathLike = Union[str, Path]


def node_column_types(net: AttributedNetwork) -> Dict[str, str]:
    """Stored type of the protected and x_i columns, chosen from the labels themselves."""
    arity = len(net.unprotected[0]) if net.node_count else 0
    try:
        types = {PROTECTED_COL: scalar_kind(net.protected)}
        for i in range(arity):
            types[f"{ATTRIBUTE_PREFIX}{i}"] = scalar_kind(x[i] for x in net.unprotected if len(x) == arity)
    except ValueError as e:
        raise NetworkConstructionError(str(e)) from e
    return types


def nodes_frame(net: AttributedNetwork) -> pd.DataFrame:
    """Node table with labels encoded per node_column_types()."""
    arity = len(net.unprotected[0]) if net.node_count else 0
    types = node_column_types(net)
    attribute_columns = [f"{ATTRIBUTE_PREFIX}{i}" for i in range(arity)]
    columns = [NODE_ID_COL, PROTECTED_COL, OUTCOME_COL] + attribute_columns
    rows = []
    for v in net.nodes:
        if len(net.unprotected[v]) != arity:
            raise NetworkConstructionError(f"node {v} has {len(net.unprotected[v])} attributes, expected {arity}")
        rows.append(
            [str(v), encode_scalar(net.protected[v], types[PROTECTED_COL]), str(net.outcome[v])]
            + [encode_scalar(x, types[c]) for x, c in zip(net.unprotected[v], attribute_columns)]
        )
    return pd.DataFrame(rows, columns=columns)


def edges_frame(net: AttributedNetwork) -> pd.DataFrame:
    return pd.DataFrame(sorted(net.edges), columns=[EDGE_A_COL, EDGE_B_COL])


def decisions_frame(h: DecisionVector) -> pd.DataFrame:
    return pd.DataFrame(
        {NODE_ID_COL: list(range(len(h))), DECISION_COL: list(h.decisions)},
        columns=[NODE_ID_COL, DECISION_COL],
    )


def export_network(
    net: AttributedNetwork,
    directory: PathLike,
    decisions: Optional[DecisionVector] = None,
    manifest: Optional[RunManifest] = None,
    fmt: str = 'csv',
) -> List[Path]:
    """
    Write a network (and optionally h) as interchange tables.

    Args:
        net: Network to export
        directory: Target directory (created if needed)
        decisions: Decision vector to store next to the network
        manifest: Header for each file (defaults to an 'export' manifest)
        fmt: 'csv', 'json', or 'both'

    Returns:
        Paths written

    Raises:
        IngestError: If the directory cannot be written
    """
    directory = Path(directory)
    manifest = manifest or RunManifest(command='export')
    if decisions is not None:
        decisions.check_for(net)
    try:
        written = write_table(nodes_frame(net), directory / NODES_FILE, manifest, fmt,
                              column_types=node_column_types(net))
        written += write_table(edges_frame(net), directory / EDGES_FILE, manifest, fmt)
        if decisions is not None:
            written += write_decisions(decisions, directory / DECISIONS_FILE, manifest, fmt)
    except OSError as e:
        raise IngestError(f"cannot write network: {e}", path=str(directory)) from e
    log.debug(f"  Exported {net.node_count} nodes, {len(net.edges)} edges to {directory}")
    return written


def write_decisions(
    decisions: DecisionVector,
    path: PathLike,
    manifest: Optional[RunManifest] = None,
    fmt: str = 'csv',
) -> List[Path]:
    return write_table(decisions_frame(decisions), path, manifest or RunManifest(command='export'), fmt)


def _read(path: Path) -> Tuple[pd.DataFrame, int, Dict[str, str], Path]:
    """
    Table, the line (or record) number of its first row, its column types,
    and the file actually read (the JSON mirror when no CSV exists).
    """
    source = resolve_table(path)
    try:
        df = read_table(source)
        types = read_column_types(source)
        offset = 1 if source.suffix == '.json' else count_manifest_lines(source) + 2
    except (OSError, ValueError, pd.errors.ParserError) as e:
        raise IngestError(f"cannot read table: {e}", path=str(source)) from e
    return df, offset, types, source


def _label(text: str, column: str, types: Dict[str, str], path: Path, row: int):
    try:
        return decode_scalar(text, types.get(column))
    except ValueError as e:
        raise IngestError(f"cannot decode {column} value {text!r}: {e}", path=str(path), row=row) from e


def _node_id(value: str, path: Path, row: int) -> int:
    parsed = parse_scalar(value)
    if not isinstance(parsed, int):
        raise IngestError(f"node id {value!r} is not an integer", path=str(path), row=row)
    return parsed


def load_network(directory: PathLike, normalize: bool = False) -> AttributedNetwork:
    """
    Load a network directory written by export_network.

    Args:
        directory: Directory holding nodes and edges tables (.csv or .json)
        normalize: Drop self-loops and duplicate edges with a warning
            instead of failing

    Returns:
        AttributedNetwork

    Raises:
        IngestError: On unreadable files, bad node ids, or unparsable labels
        NetworkConstructionError: On invalid edges when normalize is off
    """
    directory = Path(directory)
    nodes, nodes_offset, types, nodes_path = _read(directory / NODES_FILE)
    edges, edges_offset, _, edges_path = _read(directory / EDGES_FILE)

    for column in (NODE_ID_COL, PROTECTED_COL, OUTCOME_COL):
        if column not in nodes.columns:
            raise IngestError(f"missing column {column!r}", path=str(nodes_path))
    for column in (EDGE_A_COL, EDGE_B_COL):
        if column not in edges.columns:
            raise IngestError(f"missing column {column!r}", path=str(edges_path))
    attribute_columns = sorted(
        (c for c in nodes.columns if c.startswith(ATTRIBUTE_PREFIX)),
        key=lambda c: int(c[len(ATTRIBUTE_PREFIX):]) if c[len(ATTRIBUTE_PREFIX):].isdigit() else -1,
    )

    count = len(nodes)
    protected: List = [None] * count
    outcome: List[int] = [0] * count
    attributes: List = [()] * count
    seen = set()
    for index, row in enumerate(nodes.to_dict('records')):
        line = index + nodes_offset
        v = _node_id(row[NODE_ID_COL], nodes_path, line)
        if not 0 <= v < count or v in seen:
            raise IngestError(f"node ids must be 0..{count - 1} without repeats, got {v}",
                              path=str(nodes_path), row=line)
        seen.add(v)
        y = parse_binary(row[OUTCOME_COL])
        if y is None:
            raise IngestError(f"outcome {row[OUTCOME_COL]!r} is not binary", path=str(nodes_path), row=line)
        protected[v] = _label(row[PROTECTED_COL], PROTECTED_COL, types, nodes_path, line)
        outcome[v] = y
        attributes[v] = tuple(_label(row[c], c, types, nodes_path, line) for c in attribute_columns)

    pairs = []
    kept = set()
    dropped = 0
    for index, row in enumerate(edges.to_dict('records')):
        line = index + edges_offset
        a = _node_id(row[EDGE_A_COL], edges_path, line)
        b = _node_id(row[EDGE_B_COL], edges_path, line)
        if normalize:
            edge = normalize_edge(a, b)
            if a == b or edge in kept:
                dropped += 1
                continue
            kept.add(edge)
        pairs.append((a, b))
    if dropped:
        log.warn(f"Dropped {dropped} self-loops or duplicate edges from {edges_path}")

    return AttributedNetwork.build(
        node_count=count,
        edges=pairs,
        protected=protected,
        outcome=outcome,
        unprotected=attributes,
    )


def load_decisions(path: PathLike, net: AttributedNetwork) -> DecisionVector:
    """
    Read decisions.csv (or its .json mirror) for a loaded network.

    Raises:
        IngestError: If a node is missing or repeated, or a decision is not binary
    """
    df, offset, _, path = _read(Path(path))
    for column in (NODE_ID_COL, DECISION_COL):
        if column not in df.columns:
            raise IngestError(f"missing column {column!r}", path=str(path))
    values: List[Optional[int]] = [None] * net.node_count
    for index, row in enumerate(df.to_dict('records')):
        line = index + offset
        v = _node_id(row[NODE_ID_COL], path, line)
        if not 0 <= v < net.node_count or values[v] is not None:
            raise IngestError(f"unknown or repeated node id {v}", path=str(path), row=line)
        decision = parse_binary(row[DECISION_COL])
        if decision is None:
            raise IngestError(f"decision {row[DECISION_COL]!r} is not binary", path=str(path), row=line)
        values[v] = decision
    missing = [v for v, d in enumerate(values) if d is None]
    if missing:
        raise IngestError(f"no decision for nodes {missing[:10]}", path=str(path))
    return DecisionVector(tuple(int(d) for d in values))
