"""Exception types raised across the package."""


class TaniSearchError(Exception):
    """Base class for all tanisearch errors."""


class ParseError(TaniSearchError):
    """A CSV cell or row could not be parsed.

    Carries the physical line number and, when known, the 1-based data row
    and the attribute (column) name.
    """

    def __init__(self, message, *, line=None, row=None, column=None):
        super().__init__(message)
        self.line = line
        self.row = row
        self.column = column


class ValidationError(TaniSearchError):
    """Input violated a dataset invariant (duplicate id, empty id, no features...)."""


class MoleculeNotFoundError(TaniSearchError):
    """A requested molecule id is not in the dataset."""


class DimensionError(TaniSearchError):
    """Vector lengths disagree, or a vector is empty."""


class UndefinedScoreError(TaniSearchError):
    """The similarity is mathematically undefined (both vectors all-zero)."""


class ZeroVarianceError(TaniSearchError):
    """An attribute has zero variance where a nonzero one is required."""


class InvalidScoreError(TaniSearchError):
    """A score value cannot be classified (NaN)."""
