"""
Exception types raised across netfair.
"""

from typing import Any, Dict, Optional


class NetfairError(Exception):
    """Base class for all netfair errors."""
    pass


class ArgumentError(NetfairError, ValueError):
    """Raised when an operation receives an invalid argument (bad node id, delta < 1, empty group...)."""
    pass


class NetworkConstructionError(ArgumentError):
    """Raised when an attributed network violates the model (self-loops, duplicate edges, bad labels)."""
    pass


class CapacityError(NetfairError):
    """Raised when an input exceeds a size guard."""
    pass


class UndefinedRateError(NetfairError, ValueError):
    """Raised when a rate has a zero denominator (TPR without positives, FPR without negatives)."""
    pass


class IngestError(NetfairError):
    """Raised when input data cannot be turned into a network."""

    def __init__(
        self,
        message: str,
        path: Optional[str] = None,
        row: Optional[int] = None,
        paper_id: Optional[str] = None,
    ):
        self.path = path
        self.row = row
        self.paper_id = paper_id
        context = []
        if path:
            context.append(str(path))
        if row is not None:
            context.append(f"row {row}")
        if paper_id:
            context.append(f"paper {paper_id}")
        full = f"{message} ({', '.join(context)})" if context else message
        super().__init__(full)


class PitfallConstructionError(NetfairError):
    """Raised when a generated pitfall instance fails validation; retry with another seed."""

    def __init__(self, seed: int, diagnostic: Dict[str, Any]):
        self.seed = seed
        self.diagnostic = diagnostic
        details = ', '.join(f"{k}={v}" for k, v in sorted(diagnostic.items()))
        super().__init__(f"pitfall construction failed for seed {seed}: {details}")
