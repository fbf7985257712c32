"""Exception types shared across the package."""

from __future__ import annotations


class CgeMineError(Exception):
    """Base class for all cgemine errors.

    ``version_label`` is attached when the error can be traced to one
    version of a series (set by the ingestion layer).
    """

    version_label: str | None = None


class GraphSyntaxError(CgeMineError):
    """A graph file contains a malformed line or statement."""

    def __init__(self, message: str, line_no: int | None = None):
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)
        self.line_no = line_no


class UnknownProcedureError(CgeMineError):
    """An edge references a procedure that was never declared."""


class ConflictingModuleError(CgeMineError):
    """The same procedure is declared with two different modules."""


class EmptyGraphError(CgeMineError):
    """A graph has no procedures."""


class MissingFileError(CgeMineError):
    """A manifest entry points at a file that does not exist."""


class ManifestError(CgeMineError):
    """A version-series manifest violates its schema."""


class MalformedInputError(CgeMineError):
    """Rule generation was handed a support table that is not downward closed."""


class InvalidThresholdError(CgeMineError):
    """A mining threshold is outside its documented range."""


class UnsupportedSizeError(CgeMineError):
    """A graphlet size outside the supported 2..4 range was requested."""


class InvalidParamsError(CgeMineError):
    """Synthetic-series generator parameters are out of range."""


def annotate_version(err: CgeMineError, version_label: str) -> CgeMineError:
    """Tag ``err`` with the version it occurred in and prefix its message."""
    if err.version_label is None:
        err.version_label = version_label
        err.args = (f"version {version_label!r}: {err.args[0] if err.args else ''}",)
    return err
