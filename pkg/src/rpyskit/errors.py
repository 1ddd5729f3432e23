"""Exception hierarchy shared across the toolkit.

Input problems (bad files, bad flags) raise ``InputError`` subclasses and map
to CLI exit code 2; violated internal invariants raise ``InvariantViolation``
and map to exit code 3.
"""


class RpysError(Exception):
    """Base class for all toolkit errors."""


class InputError(RpysError):
    """A problem with user-supplied data or parameters."""


class EmptyFileError(InputError):
    """An input file contains no record blocks at all."""


class MissingColumnError(InputError):
    """A CSV input lacks one of its required header columns."""


class EmptyCorpusError(InputError):
    """No records survived corpus filtering."""


class OverlappingBinsError(InputError):
    """Year bins in a bin set overlap or are out of order."""


class MissingIntervalsError(InputError):
    """Claim classification needs a time-binned matrix with intervals."""


class TooFewRowsError(InputError):
    """Clustering needs at least two rows."""


class BadKError(InputError):
    """Requested cluster count is outside 1..n_leaves."""


class BadRowOrderError(InputError):
    """A heatmap row order is not a permutation of the segment labels."""


class InvariantViolation(RpysError):
    """An internal consistency check failed; indicates a bug, not bad input."""
