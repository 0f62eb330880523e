"""Exception hierarchy shared by the library, CLI, and HTTP API.

Every error type carries a stable machine-readable ``code`` (used verbatim in
API error payloads) and an ``exit_code`` for the CLI convention:
0 ok, 2 usage/invalid input, 3 data problem, 4 numeric failure.
"""
from __future__ import annotations


class ChromaInferError(Exception):
    """Base class for all library errors."""

    code = "internal_error"
    exit_code = 1

    def __init__(self, message: str, detail: str | None = None):
        super().__init__(message)
        self.message = message
        self.detail = detail

    def to_json(self) -> dict:
        return {"code": self.code, "message": self.message, "detail": self.detail}


class InvalidInputError(ChromaInferError):
    """A caller-supplied value is malformed or out of range."""

    code = "invalid_input"
    exit_code = 2


class OrderingError(InvalidInputError):
    """Scale endpoints are not ordered light-above-dark in lightness."""

    code = "ordering_error"


class ShapeError(InvalidInputError):
    """A matrix argument has the wrong shape (e.g. non-square merit matrix)."""

    code = "shape_error"


class DataError(ChromaInferError):
    """A data file or data collection is missing, malformed, or insufficient."""

    code = "data_error"
    exit_code = 3


class CsvFormatError(DataError):
    code = "csv_format"


class UnknownColorError(DataError):
    code = "unknown_color"


class UnknownConceptError(DataError):
    code = "unknown_concept"


class IncompleteDataError(DataError):
    """A participant or record set is missing required entries."""

    code = "incomplete_data"


class EmptyCohortError(DataError):
    """No participants survive filtering."""

    code = "empty_cohort"


class MissingDataError(DataError):
    code = "missing_data"


class AlignmentError(DataError):
    """Two keyed collections that must share keys do not."""

    code = "alignment_error"


class SplitError(DataError):
    """Too few participants to halve into train and test sets."""

    code = "split_error"


class NumericError(ChromaInferError):
    """A computation is numerically undefined for the given inputs."""

    code = "numeric_error"
    exit_code = 4


class SingularFitError(NumericError):
    """Rank-deficient regression design; names the dependent columns."""

    code = "singular_fit"


class UndefinedCorrelationError(NumericError):
    """Correlation requested on degenerate (constant or tiny) samples."""

    code = "undefined_correlation"


class PipelineStageError(ChromaInferError):
    """Wraps a failure inside a named pipeline stage."""

    code = "pipeline_stage"

    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"pipeline stage '{stage}' failed: {cause}", detail=stage)
        self.stage = stage
        self.cause = cause
        if isinstance(cause, ChromaInferError):
            self.exit_code = cause.exit_code
