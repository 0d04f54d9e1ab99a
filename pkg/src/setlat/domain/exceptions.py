"""Custom exceptions for the setlat domain layer."""

from typing import Optional


class SetLatError(Exception):
    """Base exception for all setlat errors."""

    def __init__(self, message: str, details: Optional[dict] = None):
        self.message = message
        self.details = details or {}
        super().__init__(self.message)


class ValidationError(SetLatError):
    """Raised when input validation fails."""
    pass


class DimensionError(SetLatError):
    """Raised when operands live in different spaces."""

    def __init__(self, message: str, expected: Optional[int] = None,
                 actual: Optional[int] = None, details: Optional[dict] = None):
        super().__init__(message, details)
        self.expected = expected
        self.actual = actual


class UnsupportedDimensionError(DimensionError):
    """Raised when an exact halfspace description is needed for d > 3."""
    pass


class ConeError(SetLatError):
    """Raised when an ordering cone is unusable."""
    pass


class TrivialDualError(ConeError):
    """Raised when the dual cone is {0}, i.e. the cone is the whole space."""

    def __init__(self, message: str = "trivial dual", details: Optional[dict] = None):
        super().__init__(message, details)


class DualVectorError(SetLatError):
    """Raised when a functional is zero or not in the dual cone."""
    pass


class EmptyCollectionError(SetLatError):
    """Raised when a lattice operation receives no operands."""
    pass


class DegenerateSegmentError(SetLatError):
    """Raised when a segment restriction gets a = b."""

    def __init__(self, message: str = "degenerate segment",
                 details: Optional[dict] = None):
        super().__init__(message, details)


class EvaluationError(SetLatError):
    """Raised when an expression cannot be evaluated at a point."""
    pass


class ExpressionParseError(SetLatError):
    """Raised when an expression or guard does not parse."""

    def __init__(self, message: str, source: str = "", position: int = 0,
                 details: Optional[dict] = None):
        super().__init__(message, details)
        self.source = source
        self.position = position

    @property
    def column(self) -> int:
        """1-based column of the offending token."""
        return self.position + 1


class DomainError(SetLatError):
    """Raised when a point that must lie in dom f does not."""
    pass


class NoSamplesError(SetLatError):
    """Raised when a lower-limit estimate receives an empty sequence."""

    def __init__(self, message: str = "no samples", details: Optional[dict] = None):
        super().__init__(message, details)


class WitnessNotFoundError(SetLatError):
    """Raised when a witness search exhausts its grid."""

    def __init__(self, message: str = "no witness at resolution",
                 details: Optional[dict] = None):
        super().__init__(message, details)


class ModeError(SetLatError):
    """Raised when a derivative result is used in the wrong mode."""
    pass


class ProblemFileError(SetLatError):
    """Raised when a problem file cannot be read."""

    def __init__(self, message: str, path: Optional[str] = None,
                 details: Optional[dict] = None):
        super().__init__(message, details)
        self.path = path


class ProblemSchemaError(ProblemFileError):
    """Raised when a problem file violates the schema."""

    def __init__(self, message: str, path: Optional[str] = None,
                 field: Optional[str] = None, line: Optional[int] = None,
                 column: Optional[int] = None, details: Optional[dict] = None):
        super().__init__(message, path, details)
        self.field = field
        self.line = line
        self.column = column


class ConfigurationError(SetLatError):
    """Raised when configuration is invalid or missing."""
    pass


USAGE_ERRORS = (
    ExpressionParseError,
    ProblemFileError,
    ConfigurationError,
    ValidationError,
    ConeError,
    DualVectorError,
    DimensionError,
    DegenerateSegmentError,
    EmptyCollectionError,
    DomainError,
)


def format_error_response(error: SetLatError) -> dict:
    """Format an error for CLI and log output."""
    response = {
        "error": {
            "type": type(error).__name__,
            "message": error.message,
        }
    }

    if error.details:
        response["error"]["details"] = error.details

    if isinstance(error, ExpressionParseError):
        response["error"]["column"] = error.column
        if error.source:
            response["error"]["source"] = error.source

    if isinstance(error, ProblemFileError) and error.path:
        response["error"]["path"] = error.path

    if isinstance(error, ProblemSchemaError):
        if error.field:
            response["error"]["field"] = error.field
        if error.line is not None:
            response["error"]["line"] = error.line
        if error.column is not None:
            response["error"]["column"] = error.column

    if isinstance(error, DimensionError) and error.expected is not None:
        response["error"]["expected_dimension"] = error.expected
        response["error"]["actual_dimension"] = error.actual

    return response


def exit_code_for(error: SetLatError) -> int:
    """Exit code the CLI uses for a library error."""
    return 2 if isinstance(error, USAGE_ERRORS) else 1
