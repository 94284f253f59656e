"""
Console logging for netfair runs.

Messages go to stdout (warnings and errors to stderr) and, when a log file is
set, are appended there too. Result tables never pass through here, so
logging does not affect the byte-reproducible outputs.
"""

import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Hashable, Optional

from .helpers import format_percent

# Global settings
_verbose = False
_log_file: Optional[Path] = None


def set_verbosity(verbose: bool) -> None:
    """Set verbosity level."""
    global _verbose
    _verbose = verbose


def set_log_file(path: Optional[str]) -> None:
    """Tee log lines into path (None disables the tee); parent directories are created."""
    global _log_file
    if path is None:
        _log_file = None
        return
    _log_file = Path(path)
    _log_file.parent.mkdir(parents=True, exist_ok=True)


def _log(message: str, prefix: str = "", file=None) -> None:
    output = f"{prefix}{message}" if prefix else message
    print(output, file=file if file is not None else sys.stdout)

    if _log_file is not None:
        with open(_log_file, 'a', encoding='utf-8') as f:
            f.write(output + '\n')


def render_value(value: Any) -> str:
    """Exact ratios as 'a/b (pct)', missing values as 'n/a'."""
    if value is None:
        return 'n/a'
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator} ({format_percent(value)})"
    if isinstance(value, float):
        return f"{value:.4f}"
    return str(value)


def info(message: str) -> None:
    _log(message)


def debug(message: str) -> None:
    """Log debug message (only if verbose)."""
    if _verbose:
        _log(message)


def warn(message: str) -> None:
    _log(message, "Warning: ", file=sys.stderr)


def error(message: str) -> None:
    _log(message, "Error: ", file=sys.stderr)


def success(message: str) -> None:
    _log(message)


def group_line(group: Hashable, **values: Any) -> None:
    """One indented line of per-group statistics, e.g. '  group 0: fv=1/2 (50.0%)'."""
    fields = ' '.join(f"{name}={render_value(value)}" for name, value in values.items())
    _log(f"  group {group}: {fields}")


def report(text: str, verbose_only: bool = False) -> None:
    """Log a multi-line text report, indented, one log line per report line."""
    if verbose_only and not _verbose:
        return
    for line in text.splitlines():
        _log(f"  {line}")


def exception(message: str, exc: BaseException) -> None:
    """Log exception with traceback (traceback only when verbose)."""
    import traceback
    error(f"{message}: {exc}")
    if _verbose:
        traceback.print_exc()
