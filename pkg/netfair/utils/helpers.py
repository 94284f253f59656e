"""
Helper utilities for parsing and formatting netfair data.
"""

import json
import math
import numbers
import re
from fractions import Fraction
from typing import Any, Hashable, Iterable, List, Optional, Set, Tuple, Union

_INT_PATTERN = re.compile(r'^[+-]?\d+$')


def safe_float(value: Any, default: Optional[float] = 0.0) -> Optional[float]:
    """Safely convert a value to float; NaN and blanks become the default."""
    if value is None:
        return default
    if isinstance(value, bool):
        return float(value)
    if isinstance(value, (int, float)):
        if isinstance(value, float) and math.isnan(value):
            return default
        return float(value)
    if isinstance(value, str):
        try:
            result = float(value.strip())
        except (ValueError, AttributeError):
            return default
        return default if math.isnan(result) else result
    return default


def parse_binary(value: Any) -> Optional[int]:
    """Parse a 0/1 flag from ints, bools, or strings like 'true', 'accept', '1'.

    Returns:
        0 or 1, or None when the value is not recognisably binary
    """
    if isinstance(value, bool):
        return int(value)
    if isinstance(value, int):
        return value if value in (0, 1) else None
    if isinstance(value, float):
        if math.isnan(value):
            return None
        return int(value) if value in (0.0, 1.0) else None
    if isinstance(value, str):
        token = value.strip().lower()
        if token in ('1', '1.0', 'true', 't', 'yes', 'y', 'accept', 'accepted'):
            return 1
        if token in ('0', '0.0', 'false', 'f', 'no', 'n', 'reject', 'rejected'):
            return 0
    return None


def parse_scalar(value: Any) -> Hashable:
    """Turn a table cell into int, float, or str (in that order of preference)."""
    if not isinstance(value, str):
        return value
    token = value.strip()
    if _INT_PATTERN.match(token):
        return int(token)
    try:
        return float(token)
    except ValueError:
        return token


SCALAR_KINDS = ('int', 'float', 'str', 'json')


def scalar_kind(values: Iterable[Any]) -> str:
    """
    Narrowest column type that stores every value exactly.

    Returns:
        'int', 'float' or 'str' for a homogeneous column; 'json' for mixed
        columns and booleans; 'str' for an empty column

    Raises:
        ValueError: For values that are not int, float, str, or bool
    """
    kinds: Set[str] = set()
    for value in values:
        if isinstance(value, bool):
            kinds.add('json')
        elif isinstance(value, numbers.Integral):
            kinds.add('int')
        elif isinstance(value, float):
            kinds.add('float')
        elif isinstance(value, str):
            kinds.add('str')
        else:
            raise ValueError(f"cannot store label {value!r} of type {type(value).__name__}")
    if not kinds:
        return 'str'
    return kinds.pop() if len(kinds) == 1 else 'json'


def encode_scalar(value: Any, kind: str) -> str:
    """Render a label for a column of the given kind; decode_scalar restores it."""
    if kind == 'int':
        return str(int(value))
    if kind == 'float':
        return repr(float(value))
    if kind == 'str':
        return str(value)
    if kind == 'json':
        return json.dumps(value.item() if hasattr(value, 'item') else value)
    raise ValueError(f"unknown column type {kind!r}")


def decode_scalar(text: str, kind: Optional[str] = None) -> Hashable:
    """
    Inverse of encode_scalar.

    Without a kind (tables written by hand) the cell is guessed with parse_scalar.
    """
    if kind is None:
        return parse_scalar(text)
    if kind == 'int':
        return int(text)
    if kind == 'float':
        return float(text)
    if kind == 'str':
        return text
    if kind == 'json':
        value = json.loads(text)
        if isinstance(value, (list, dict)):
            raise ValueError(f"label {text!r} is not a scalar")
        return value
    raise ValueError(f"unknown column type {kind!r}")


def normalize_identifier(name: Optional[str]) -> str:
    """Normalize an author id or institution name: case-fold and collapse whitespace."""
    if not name:
        return ""
    return ' '.join(str(name).split()).casefold()


def split_list_field(value: Any, separator: str = ';') -> List[str]:
    """Split a delimiter-separated list cell into stripped, non-empty entries."""
    if value is None:
        return []
    if isinstance(value, (list, tuple)):
        return [str(v).strip() for v in value if str(v).strip()]
    if isinstance(value, float) and math.isnan(value):
        return []
    return [part.strip() for part in str(value).split(separator) if part.strip()]


def round_half_up(value: Union[float, Fraction]) -> int:
    """Round to the nearest integer with ties going up (0.5 -> 1)."""
    return int(math.floor(Fraction(value) + Fraction(1, 2)))


def ratio(numerator: int, denominator: int) -> Optional[Fraction]:
    """Exact ratio, or None for a zero denominator."""
    if denominator == 0:
        return None
    return Fraction(numerator, denominator)


def to_float(value: Optional[Fraction]) -> Optional[float]:
    """Convert an optional exact value to float for reporting."""
    return None if value is None else float(value)


def format_percent(value: Optional[Union[float, Fraction]], digits: int = 1) -> str:
    """Format a rate as a percentage string, e.g. 0.887 -> '88.7%'."""
    if value is None:
        return 'n/a'
    return f"{float(value) * 100:.{digits}f}%"


def sort_group_keys(keys: Iterable[Hashable]) -> List[Hashable]:
    """Sort protected-attribute values: numbers first in numeric order, then strings."""
    def key(value: Hashable) -> Tuple[int, Any]:
        if isinstance(value, (int, float)) and not isinstance(value, bool):
            return (0, value)
        return (1, str(value))
    return sorted(keys, key=key)
