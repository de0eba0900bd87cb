"""Exception types shared across the package.

Every error carries a machine-readable ``error_name`` and, where it makes
sense, the id of the offending element so that callers (CLI, HTTP service)
can report failures without string-parsing the message.
"""

from __future__ import annotations


class GridResponseError(Exception):
    """Base class for all validation and domain errors raised here."""

    error_name = "error"

    def __init__(self, detail: str, element: str | None = None):
        super().__init__(detail)
        self.element = element


class DocumentSyntaxError(GridResponseError):
    """Input document is not well-formed (bad JSON, wrong shape, wrong types)."""

    error_name = "syntax_error"


class UnknownReferenceError(GridResponseError):
    """A document refers to an id that does not exist."""

    error_name = "reference_error"


class InvariantError(GridResponseError):
    """A structural invariant is violated (cycle, stage regression, bad mass)."""

    error_name = "invariant_error"


class ValueRangeError(GridResponseError):
    """A numeric value lies outside its documented range."""

    error_name = "range_error"


class MissingCriterionError(GridResponseError):
    """A countermeasure record lacks one of the six criterion values."""

    error_name = "missing_criterion"


class UnknownTechniqueError(GridResponseError):
    """A technique id does not resolve against the loaded catalog."""

    error_name = "unknown_technique"


class UnknownStrategyError(GridResponseError):
    """A ranking strategy id is not registered."""

    error_name = "unknown_strategy"


class TotalConflictError(GridResponseError):
    """Two mass functions are in (near-)total conflict and cannot be combined."""

    error_name = "total_conflict"


class EmptyCandidateError(GridResponseError):
    """A decision was requested over an empty candidate set."""

    error_name = "empty_candidates"
