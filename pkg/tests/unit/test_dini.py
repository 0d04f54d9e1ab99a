"""Unit tests for lower Dini derivatives."""

import pytest

from setlat.domain.dini import (
    contains_zero,
    difference_quotients,
    extrapolate,
    interior_contains_zero,
    residual_dini,
    residual_dini_result,
    scalar_dini,
    scalar_dini_result,
    tail_estimate,
    zstar_dini,
)
from setlat.domain.exceptions import ModeError, ValidationError
from setlat.domain.expressions import parse_expression, parse_guard
from setlat.domain.funcmodel import VectorFn, VectorPiece, vector_extension
from setlat.domain.models import DiniConfig, DiniMode
from setlat.domain.polytope import DualVector, SetTag, scale, set_equal, translate
from setlat.domain.xreals import NEG_INF, POS_INF, liminf_tail


class TestScalarDini:
    """Test φ^↓(x, u) on closed forms."""

    def test_kink(self, fast_dini):
        assert scalar_dini(lambda x: abs(x[0]), (0.0,), (1.0,), fast_dini) == pytest.approx(1.0)
        assert scalar_dini(lambda x: abs(x[0]), (0.0,), (-1.0,), fast_dini) == pytest.approx(1.0)

    def test_smooth_with_extrapolation(self, fast_dini):
        """The O(t) term of x^2 at 1 is removed exactly."""
        value = scalar_dini(lambda x: x[0] ** 2, (1.0,), (1.0,), fast_dini)

        assert value == pytest.approx(2.0, abs=1e-9)

    def test_concave_kink(self, fast_dini):
        assert scalar_dini(lambda x: -abs(x[0]), (0.0,), (1.0,), fast_dini) == pytest.approx(-1.0)

    def test_leaving_the_domain(self, fast_dini):
        phi = lambda x: 0.0 if x[0] <= 0 else POS_INF  # noqa: E731

        assert scalar_dini(phi, (0.0,), (1.0,), fast_dini) == POS_INF
        assert scalar_dini(phi, (0.0,), (-1.0,), fast_dini) == 0.0

    def test_base_at_minus_infinity(self, fast_dini):
        phi = lambda x: NEG_INF if x[0] == 0 else 0.0  # noqa: E731

        assert scalar_dini(phi, (0.0,), (1.0,), fast_dini) == POS_INF

    def test_zero_direction_rejected(self, fast_dini):
        with pytest.raises(ValidationError):
            scalar_dini(lambda x: 0.0, (0.0,), (0.0,), fast_dini)

    def test_quotients_follow_steps(self, fast_dini):
        samples = difference_quotients(lambda x: 3 * x[0], (0.0,), (1.0,), fast_dini)

        assert [t for t, _ in samples] == fast_dini.steps()
        assert all(q == pytest.approx(3.0) for _, q in samples)

    def test_result_is_stable(self, fast_dini):
        result = scalar_dini_result(lambda x: abs(x[0]), (0.0,), (1.0,), fast_dini)

        assert result.mode == DiniMode.SCALAR
        assert result.stable


class TestTailEstimate:
    """Test the lower-limit estimator."""

    def test_extrapolate_keeps_infinities(self):
        series = extrapolate([(0.2, POS_INF), (0.1, 1.0), (0.05, 1.0)], 0.5)

        assert series == [(0.1, 1.0), (0.05, 1.0)]

    def test_disagreeing_windows_are_unstable(self):
        cfg = DiniConfig(K=7, window=2, extrapolate=False)
        samples = [(0.1 * 0.5**k, v) for k, v in enumerate([0, 0, 0, -5, 0, 0, 0])]

        value, stable = tail_estimate(samples, cfg)

        assert value == 0
        assert not stable

    def test_agreeing_windows_are_stable(self):
        cfg = DiniConfig(K=7, window=2, extrapolate=False)
        samples = [(0.1 * 0.5**k, 1.0) for k in range(7)]

        assert tail_estimate(samples, cfg) == (1.0, True)

    def test_raw_estimate_is_the_tail_minimum(self):
        cfg = DiniConfig(extrapolate=False)
        samples = difference_quotients(lambda x: x[0] ** 2, (1.0,), (1.0,), cfg)

        value, _ = tail_estimate(samples, cfg)

        assert value == liminf_tail(samples, cfg.window)
        assert value == pytest.approx(2.0 + cfg.steps()[-1])

    def test_extrapolation_recovers_an_exact_zero(self):
        """At the apex of -x^2 the raw quotients are -t_k."""
        apex = lambda x: -x[0] ** 2  # noqa: E731

        raw = scalar_dini(apex, (0.0,), (1.0,), DiniConfig(extrapolate=False))
        extrapolated = scalar_dini(apex, (0.0,), (1.0,), DiniConfig())

        assert raw == pytest.approx(-DiniConfig().steps()[-DiniConfig().window])
        assert raw < -1e-7
        assert extrapolated == pytest.approx(0.0, abs=1e-15)


class TestPositiveHomogeneity:
    """Test that every Dini derivative scales with the direction."""

    FACTORS = [0.5, 2.0, 10.0]

    @pytest.mark.parametrize("r", FACTORS)
    @pytest.mark.parametrize("phi,x,u", [
        (lambda x: abs(x[0]), (0.0,), (1.0,)),
        (lambda x: -abs(x[0]), (0.0,), (-1.0,)),
        (lambda x: x[0] ** 2, (1.0,), (1.0,)),
        (lambda x: x[0] ** 2 - 3 * x[0], (0.5,), (-1.0,)),
        (lambda x: max(x[0], 2 * x[0]), (0.0,), (-1.0,)),
    ])
    def test_scalar(self, phi, x, u, r, fast_dini):
        scaled = scalar_dini(phi, x, tuple(r * c for c in u), fast_dini)

        assert scaled == pytest.approx(r * scalar_dini(phi, x, u, fast_dini), abs=1e-9)

    def test_scalar_keeps_infinities(self, fast_dini):
        phi = lambda x: 0.0 if x[0] <= 0 else POS_INF  # noqa: E731

        for r in self.FACTORS:
            assert scalar_dini(phi, (0.0,), (r,), fast_dini) == POS_INF

    @pytest.mark.parametrize("r", FACTORS)
    def test_zstar(self, domination_problem, fast_dini, r):
        f = domination_problem.function()
        z = DualVector.of([-1.0, -1.0], f.cone)

        base = zstar_dini(f, z, (0.5,), (-1.0,), fast_dini)
        scaled = zstar_dini(f, z, (0.5,), (-r,), fast_dini)

        assert scaled.scalar_value == pytest.approx(r * base.scalar_value, abs=1e-9)

    @pytest.mark.parametrize("r", FACTORS)
    def test_residual(self, orthant2, fast_dini, r):
        F = VectorFn(1, 2, [VectorPiece(parse_guard("true"),
                                        (parse_expression("x1"),
                                         parse_expression("1 - x1")))])
        f = vector_extension(F, orthant2)

        base = residual_dini(f, (0.5,), (1.0,), fast_dini)
        scaled = residual_dini(f, (0.5,), (r,), fast_dini)

        assert set_equal(scaled, scale(base, r))


class TestSetDini:
    """Test z*-derivatives and residual derivatives of set-valued functions."""

    def test_zstar_dini(self, domination_problem, fast_dini):
        f = domination_problem.function()
        z = DualVector.of([-1.0, 0.0], f.cone)

        result = zstar_dini(f, z, (0.0,), (1.0,), fast_dini)

        assert result.mode == DiniMode.ZSTAR
        assert result.scalar_value == pytest.approx(0.0, abs=1e-9)
        assert result.set_value.contains([0.0, 0.0])
        assert contains_zero(result)
        assert not interior_contains_zero(result)

    def test_residual_dini_is_empty_under_strict_domination(self, domination_problem):
        result = residual_dini_result(domination_problem.function(), (0.0,), (1.0,))

        assert result.set_value.tag == SetTag.EMPTY
        assert result.scalar_value == POS_INF
        assert result.stable

    def test_residual_dini_of_a_line(self, orthant2, fast_dini):
        """F(x) = (x, 1 - x) moves by (1, -1) per unit of x."""
        F = VectorFn(1, 2, [VectorPiece(parse_guard("true"),
                                        (parse_expression("x1"),
                                         parse_expression("1 - x1")))])
        f = vector_extension(F, orthant2)

        value = residual_dini(f, (0.5,), (1.0,), fast_dini)

        assert set_equal(value, translate([1.0, -1.0], orthant2))

    def test_membership_tests_need_zstar_mode(self, orthant2, fast_dini):
        result = scalar_dini_result(lambda x: x[0], (0.0,), (1.0,), fast_dini)

        with pytest.raises(ModeError):
            contains_zero(result)
        with pytest.raises(ModeError):
            interior_contains_zero(result)
