"""Exception types shared across the package."""


class FsppError(Exception):
    """Base class for all package errors."""


class ConfigurationError(FsppError, ValueError):
    """Invalid granularity or distance-system parameters."""


class DegenerateConfigurationError(FsppError, ValueError):
    """A geometric quantity is undefined because points coincide."""


class UndefinedDirectionError(FsppError, ValueError):
    """The direction of a zero-length vector was requested."""


class GranularityMismatchError(FsppError, ValueError):
    """Two relations over different granularities were combined."""


class InvalidStartError(FsppError, ValueError):
    """A contour trace was started from a cell that cannot start a trace."""


class MissingConstraintError(FsppError, KeyError):
    """A path step has no stored constraint."""


class ScenarioError(FsppError, ValueError):
    """Malformed scenario or relation document.

    ``line`` and ``column`` are 1-based when known.
    """

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f" (line {line}, column {column})"
        super().__init__(message + where)
