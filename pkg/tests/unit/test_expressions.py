"""Unit tests for the expression and guard parser."""

import pytest

from setlat.domain.exceptions import EvaluationError, ExpressionParseError
from setlat.domain.expressions import parse_expression, parse_guard


class TestArithmetic:
    """Test arithmetic expressions."""

    @pytest.mark.parametrize("text,x,expected", [
        ("1 + 2 * 3", (0.0,), 7.0),
        ("(1 + 2) * 3", (0.0,), 9.0),
        ("x1^2 - 1", (3.0,), 8.0),
        ("-x1^2", (3.0,), -9.0),
        ("2^-1", (0.0,), 0.5),
        ("x1 / x2", (1.0, 4.0), 0.25),
        ("max(1 - 2*x1, 0.5 - 0.5*x1)", (1.0,), 0.0),
        ("min(x1, x2, 3)", (5.0, 4.0), 3.0),
        ("abs(x1 - 5)", (2.0,), 3.0),
        ("1e-3 * x1", (2.0,), 0.002),
    ])
    def test_evaluate(self, text, x, expected):
        assert parse_expression(text).evaluate(x) == pytest.approx(expected)

    def test_parameter_t(self):
        expr = parse_expression("x1 + t")

        assert expr.evaluate((1.0,), t=0.5) == 1.5

    def test_variables(self):
        assert parse_expression("x1 * x3 + t").variables == frozenset({0, 2})

    def test_division_by_zero(self):
        with pytest.raises(EvaluationError):
            parse_expression("1 / x1").evaluate((0.0,))

    def test_missing_coordinate(self):
        with pytest.raises(EvaluationError):
            parse_expression("x2").evaluate((1.0,))


class TestParseErrors:
    """Test error positions."""

    def test_unknown_character(self):
        with pytest.raises(ExpressionParseError) as info:
            parse_expression("x1 + $")

        assert info.value.column == 6

    def test_variable_out_of_range(self):
        with pytest.raises(ExpressionParseError) as info:
            parse_expression("x1 + x3", n=2)

        assert info.value.column == 6

    def test_unknown_name(self):
        with pytest.raises(ExpressionParseError):
            parse_expression("sin(x1)")

    def test_non_integer_exponent(self):
        with pytest.raises(ExpressionParseError):
            parse_expression("x1^0.5")

    def test_trailing_input(self):
        with pytest.raises(ExpressionParseError):
            parse_expression("x1 x2")

    def test_abs_arity(self):
        with pytest.raises(ExpressionParseError):
            parse_expression("abs(x1, x2)")

    def test_max_arity(self):
        with pytest.raises(ExpressionParseError):
            parse_expression("max(x1)")


class TestGuards:
    """Test boolean guards."""

    def test_chained_comparison(self):
        guard = parse_guard("0 <= x1 <= 1")

        assert guard.holds((0.0,))
        assert guard.holds((1.0,))
        assert not guard.holds((1.5,))

    def test_and_or(self):
        guard = parse_guard("x1 < 0 or x1 > 1 and x1 < 2")

        assert guard.holds((-1.0,))
        assert guard.holds((1.5,))
        assert not guard.holds((0.5,))
        assert not guard.holds((3.0,))

    def test_parenthesized_guard(self):
        guard = parse_guard("(x1 < 0 or x1 > 1) and x2 == 0")

        assert guard.holds((2.0, 0.0))
        assert not guard.holds((2.0, 1.0))

    def test_literals(self):
        assert parse_guard("true").holds((0.0,))
        assert not parse_guard("false").holds((0.0,))

    def test_tolerance(self):
        """Comparisons absorb differences below the guard tolerance."""
        assert parse_guard("x1 == 0").holds((1e-13,))
        assert not parse_guard("x1 == 0").holds((1e-6,))
        assert not parse_guard("x1 < 0").holds((-1e-13,))

    def test_guard_needs_comparison(self):
        with pytest.raises(ExpressionParseError):
            parse_guard("x1 + 1")
