"""Exception taxonomy.

``DataError`` covers everything wrong with user-supplied inputs (files,
graphs, generation specs); the CLI maps it to exit code 2.
``VerificationError`` marks a failed sparsifier check (exit code 3).
Programming errors (bad argument combinations) stay plain ``ValueError``.
"""

from __future__ import annotations


class DataError(Exception):
    """Invalid input data (file contents, graph references, specs)."""


class LinkFormatError(DataError):
    """Malformed line in a link file; carries 1-based line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class NodeFileError(DataError):
    """Malformed line or duplicate id in a node file."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class UnknownNodeError(DataError):
    """Node id not present in the graph's node table."""


class UnknownEdgeError(DataError):
    """Edge identity not present in the graph."""


class NonFiniteWeightError(DataError):
    """Edge weight is inf or -inf."""


class EmptyGraphError(DataError):
    """Operation requires at least one edge."""


class GenSpecError(DataError):
    """Malformed or inconsistent generation spec."""


class InfeasibleSpecError(DataError):
    """Generation spec asks for more simple edges than the populations allow."""


class RetryCapError(DataError):
    """Generator exceeded its duplicate-redraw budget."""


class DegenerateSplitError(DataError):
    """Holdout split would leave the train or test side empty."""


class NegativeSamplingError(DataError):
    """A positive edge has no type-compatible corruption candidate."""


class VerificationError(Exception):
    """Sparsifier output violates a structural guarantee."""
