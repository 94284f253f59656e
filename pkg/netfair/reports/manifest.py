"""
Run manifests and table writers.

Every result file starts with the manifest as '# key: value' lines so a run
can be reproduced from any of its outputs. Nothing time-dependent goes into
the manifest; rerunning the same command rewrites identical bytes.
"""

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import pandas as pd

from .. import __version__
from ..exceptions import NetfairError
from ..utils.constants import COLUMN_TYPES_KEY, MANIFEST_PREFIX

PathLike = Union[str, Path]

OUTPUT_FORMATS = ('csv', 'json', 'both')


@dataclass
class RunManifest:
    """Provenance of one CLI run."""
    command: str
    inputs: Dict[str, str] = field(default_factory=dict)
    delta: Optional[int] = None
    degenerate_rule: Optional[str] = None
    threshold: Optional[float] = None
    seed: Optional[int] = None
    outputs: List[str] = field(default_factory=list)
    parameters: Dict[str, Any] = field(default_factory=dict)
    version: str = __version__

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {'command': self.command, 'version': self.version}
        for key in sorted(self.inputs):
            data[f"input.{key}"] = self.inputs[key]
        for key in ('delta', 'degenerate_rule', 'threshold', 'seed'):
            value = getattr(self, key)
            if value is not None:
                data[key] = value
        for key in sorted(self.parameters):
            data[key] = self.parameters[key]
        if self.outputs:
            data['outputs'] = ', '.join(self.outputs)
        return data

    def header_lines(self) -> List[str]:
        return [f"{MANIFEST_PREFIX}{key}: {value}" for key, value in self.to_dict().items()]

    def header(self) -> str:
        return ''.join(line + '\n' for line in self.header_lines())


def count_manifest_lines(path: PathLike) -> int:
    """Number of leading manifest lines in a written table."""
    count = 0
    with open(path, 'r', encoding='utf-8') as f:
        for line in f:
            if not line.startswith(MANIFEST_PREFIX.rstrip()):
                break
            count += 1
    return count


def _json_value(value: Any) -> Any:
    if isinstance(value, float) and math.isnan(value):
        return None
    if hasattr(value, 'item'):
        return _json_value(value.item())
    return value


def frame_records(df: pd.DataFrame) -> List[Dict[str, Any]]:
    """DataFrame rows as plain JSON-ready dicts (NaN becomes null)."""
    return [
        {str(k): _json_value(v) for k, v in row.items()}
        for row in df.to_dict('records')
    ]


def write_table(
    df: pd.DataFrame,
    path: PathLike,
    manifest: RunManifest,
    fmt: str = 'csv',
    column_types: Optional[Dict[str, str]] = None,
) -> List[Path]:
    """
    Write a table with the manifest header.

    Args:
        df: Table to write
        path: Target path ending in .csv; the JSON mirror replaces the suffix
        manifest: Run manifest written above the header row
        fmt: 'csv', 'json', or 'both'
        column_types: Optional {column: kind} stored next to the manifest so
            readers can decode label columns exactly

    Returns:
        Paths written
    """
    if fmt not in OUTPUT_FORMATS:
        raise NetfairError(f"unknown output format {fmt!r}")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    written = []
    if fmt in ('csv', 'both'):
        with open(path, 'w', encoding='utf-8', newline='') as f:
            f.write(manifest.header())
            if column_types:
                rendered = ', '.join(f"{name}={kind}" for name, kind in column_types.items())
                f.write(f"{MANIFEST_PREFIX}{COLUMN_TYPES_KEY}: {rendered}\n")
            df.to_csv(f, index=False, lineterminator='\n')
        written.append(path)
    if fmt in ('json', 'both'):
        mirror = path.with_suffix('.json')
        document: Dict[str, Any] = {'manifest': manifest.to_dict(), 'columns': [str(c) for c in df.columns]}
        if column_types:
            document[COLUMN_TYPES_KEY] = dict(column_types)
        document['rows'] = frame_records(df)
        with open(mirror, 'w', encoding='utf-8') as f:
            json.dump(document, f, indent=2)
            f.write('\n')
        written.append(mirror)
    return written


def write_text(text: str, path: PathLike, manifest: RunManifest) -> Path:
    """Write a plain-text report with the manifest header."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', encoding='utf-8', newline='') as f:
        f.write(manifest.header())
        f.write(text.rstrip('\n') + '\n')
    return path


def resolve_table(path: PathLike) -> Path:
    """The CSV at path, or its JSON mirror when only the mirror exists."""
    path = Path(path)
    mirror = path.with_suffix('.json')
    if not path.exists() and mirror.exists():
        return mirror
    return path


def _cell_text(value: Any) -> str:
    if value is None:
        return ''
    if isinstance(value, str):
        return value
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _read_document(path: Path) -> Dict[str, Any]:
    with open(path, 'r', encoding='utf-8') as f:
        document = json.load(f)
    if not isinstance(document, dict) or not isinstance(document.get('rows'), list):
        raise ValueError("expected an object with a 'rows' list")
    return document


def read_table(path: PathLike) -> pd.DataFrame:
    """
    Read a table written by write_table (or a plain CSV) as strings.

    A missing .csv falls back to its .json mirror; JSON cells are turned
    into the same strings the CSV would hold.
    """
    path = resolve_table(path)
    if path.suffix != '.json':
        return pd.read_csv(path, skiprows=count_manifest_lines(path), dtype=str, keep_default_na=False)
    document = _read_document(path)
    rows = document['rows']
    columns = document.get('columns') or (list(rows[0]) if rows else [])
    return pd.DataFrame(
        [[_cell_text(row.get(c)) for c in columns] for row in rows],
        columns=columns,
        dtype=object,
    )


def read_column_types(path: PathLike) -> Dict[str, str]:
    """Column types stored by write_table; empty when the table has none."""
    path = resolve_table(path)
    if path.suffix == '.json':
        return dict(_read_document(path).get(COLUMN_TYPES_KEY) or {})
    marker = f"{MANIFEST_PREFIX}{COLUMN_TYPES_KEY}: "
    with open(path, 'r', encoding='utf-8') as f:
        for line in f:
            if not line.startswith(MANIFEST_PREFIX.rstrip()):
                break
            if line.startswith(marker):
                pairs = line[len(marker):].strip().split(', ')
                return dict(pair.split('=', 1) for pair in pairs if '=' in pair)
    return {}
