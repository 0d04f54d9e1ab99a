"""Unit tests for exception hierarchy."""

import pytest
from setlat.domain.exceptions import (
    SetLatError,
    ValidationError,
    DimensionError,
    UnsupportedDimensionError,
    ConeError,
    TrivialDualError,
    DualVectorError,
    EmptyCollectionError,
    DegenerateSegmentError,
    EvaluationError,
    ExpressionParseError,
    DomainError,
    NoSamplesError,
    WitnessNotFoundError,
    ModeError,
    ProblemFileError,
    ProblemSchemaError,
    ConfigurationError,
    exit_code_for,
    format_error_response,
)


class TestExceptionHierarchy:
    """Test exception class hierarchy and initialization."""

    def test_base_exception_creation(self):
        """Test SetLatError base class."""
        error = SetLatError("Test message", {"code": "TEST"})

        assert error.message == "Test message"
        assert error.details == {"code": "TEST"}
        assert str(error) == "Test message"

    def test_base_exception_empty_details(self):
        """Test SetLatError with no details."""
        error = SetLatError("Test message")

        assert error.details == {}

    def test_dimension_error_fields(self):
        """Test DimensionError keeps expected and actual dimensions."""
        error = DimensionError("mismatch", expected=2, actual=3)

        assert isinstance(error, SetLatError)
        assert error.expected == 2
        assert error.actual == 3

    def test_unsupported_dimension_is_dimension_error(self):
        """Test UnsupportedDimensionError inheritance."""
        error = UnsupportedDimensionError("too big", expected=3, actual=4)

        assert isinstance(error, DimensionError)

    def test_trivial_dual_is_cone_error(self):
        """Test TrivialDualError default message and inheritance."""
        error = TrivialDualError()

        assert isinstance(error, ConeError)
        assert error.message == "trivial dual"

    @pytest.mark.parametrize("cls,message", [
        (DegenerateSegmentError, "degenerate segment"),
        (NoSamplesError, "no samples"),
        (WitnessNotFoundError, "no witness at resolution"),
    ])
    def test_default_messages(self, cls, message):
        """Test errors that come with a default message."""
        assert cls().message == message

    def test_parse_error_column_is_one_based(self):
        """Test ExpressionParseError reports a 1-based column."""
        error = ExpressionParseError("bad token", "x1 + $", 5)

        assert error.position == 5
        assert error.column == 6
        assert error.source == "x1 + $"

    def test_schema_error_is_problem_file_error(self):
        """Test ProblemSchemaError carries path, field and position."""
        error = ProblemSchemaError("bad", path="p.json", field="cone", line=3, column=7)

        assert isinstance(error, ProblemFileError)
        assert error.path == "p.json"
        assert error.field == "cone"
        assert (error.line, error.column) == (3, 7)


class TestExitCodes:
    """Test the exit code assigned to each error."""

    @pytest.mark.parametrize("error", [
        ExpressionParseError("bad", "x", 0),
        ProblemFileError("missing"),
        ProblemSchemaError("bad"),
        ConfigurationError("bad"),
        ValidationError("bad"),
        ConeError("bad"),
        DualVectorError("bad"),
        DimensionError("bad"),
        DegenerateSegmentError(),
        EmptyCollectionError("bad"),
        DomainError("bad"),
    ])
    def test_usage_errors_exit_two(self, error):
        """Test input problems map to exit code 2."""
        assert exit_code_for(error) == 2

    @pytest.mark.parametrize("error", [
        EvaluationError("nan"),
        NoSamplesError(),
        WitnessNotFoundError(),
        ModeError("wrong mode"),
        SetLatError("generic"),
    ])
    def test_other_errors_exit_one(self, error):
        """Test numeric and internal failures map to exit code 1."""
        assert exit_code_for(error) == 1


class TestErrorFormatting:
    """Test error response formatting."""

    def test_format_basic_error(self):
        """Test formatting a basic error without details."""
        response = format_error_response(ValidationError("Invalid input"))

        assert response == {"error": {"type": "ValidationError",
                                      "message": "Invalid input"}}

    def test_format_error_with_details(self):
        """Test details are included when present."""
        response = format_error_response(DualVectorError("outside", {"coeffs": [1, 0]}))

        assert response["error"]["details"] == {"coeffs": [1, 0]}

    def test_format_parse_error(self):
        """Test parse errors report column and source."""
        response = format_error_response(ExpressionParseError("bad", "x1 $", 3))

        assert response["error"]["column"] == 4
        assert response["error"]["source"] == "x1 $"

    def test_format_schema_error(self):
        """Test schema errors report path, field, line and column."""
        error = ProblemSchemaError("invalid JSON", path="p.json", line=2, column=5)

        response = format_error_response(error)

        assert response["error"]["path"] == "p.json"
        assert response["error"]["line"] == 2
        assert response["error"]["column"] == 5
        assert "field" not in response["error"]

    def test_format_dimension_error(self):
        """Test dimension errors report both dimensions."""
        response = format_error_response(DimensionError("bad", expected=2, actual=1))

        assert response["error"]["expected_dimension"] == 2
        assert response["error"]["actual_dimension"] == 1
