"""Unit tests for infimizer, minimizer and solution checks."""

import math

import pytest

from setlat.application import optimality
from setlat.application.commands import CommandArgs, run_command
from setlat.application.corpus import load_corpus_problem
from setlat.application.optimality import (
    check_infimizer,
    check_minimizer,
    check_solution,
    domination_set,
    domination_star_shaped,
    grid_minimality,
    recheck_certificate,
    separating_dual,
)
from setlat.domain.dini import zstar_dini
from setlat.domain.exceptions import DimensionError, DomainError, EmptyCollectionError
from setlat.domain.funcmodel import SampleGrid
from setlat.domain.models import AssertedProperty, CheckMode, Verdict
from setlat.domain.polytope import DualVector, dual_cone_sample
from setlat.infrastructure.problem_loader import parse_problem_data

MINIMIZER_ASSERTIONS = [AssertedProperty.RADIAL_LSC,
                        AssertedProperty.RADIAL_SEMISTRICT_QUASICONVEX]


@pytest.fixture
def line(problem_json):
    """f(x) = (x, 1 - x) + R^2_+ on [0, 1]; every value is minimal."""
    return parse_problem_data(problem_json).function()


@pytest.fixture
def grid():
    return SampleGrid.parse("0:1:0.25")


def axis_duals(cone):
    return [DualVector.of([-1.0, 0.0], cone), DualVector.of([0.0, -1.0], cone)]


class TestDomination:
    """Test domination sets and separating duals."""

    def test_every_other_point_is_dominated(self, line, grid):
        dominated = domination_set(line, (0.5,), grid)

        assert dominated.members == [(0.0,), (0.25,), (0.75,), (1.0,)]
        assert len(dominated.certificates) == 4
        assert not dominated.uncertified

    def test_certificates_recheck(self, line, grid):
        dominated = domination_set(line, (0.5,), grid)

        assert all(recheck_certificate(line, c) for c in dominated.certificates)

    def test_separating_dual(self, line):
        duals = dual_cone_sample(line.cone, 1)

        z = separating_dual(line, (0.5,), (0.0,), duals)

        assert z.coeffs == pytest.approx((-1.0, 0.0))
        assert separating_dual(line, (0.5,), (0.5,), duals) is None

    def test_x0_outside_domain(self, line, grid):
        with pytest.raises(DomainError):
            domination_set(line, (2.0,), grid)

    def test_star_shaped(self, line, grid):
        assert domination_star_shaped(line, domination_set(line, (0.5,), grid)).holds

    def test_grid_minimality(self, line, grid, triangle_problem):
        assert grid_minimality(line, (0.5,), grid).verdict == Verdict.PASS

        report = grid_minimality(triangle_problem.function(), (0.8, 0.8),
                                 triangle_problem.grid)
        assert report.verdict == Verdict.FAIL


class TestMinimizer:
    """Test the sufficient and necessary minimizer conditions."""

    def test_axis_duals_certify_the_midpoint(self, line, grid, fast_dini):
        report = check_minimizer(line, (0.5,), axis_duals(line.cone), grid, fast_dini,
                                 asserted=MINIMIZER_ASSERTIONS)

        assert report.verdict == Verdict.PASS
        assert report.child("VARIATIONAL_INEQUALITY").verdict == Verdict.PASS
        assert report.child("DIRECT").verdict == Verdict.PASS

    def test_unasserted_hypotheses_give_conditional_pass(self, line, grid, fast_dini):
        report = check_minimizer(line, (0.5,), axis_duals(line.cone), grid, fast_dini)

        assert report.verdict == Verdict.CONDITIONAL_PASS
        assert report.hypotheses_unverified == ["radial_lsc",
                                                "radial_semistrict_quasiconvex"]

    def test_one_dual_misses_the_left_end(self, line, grid, fast_dini):
        Mstar = [DualVector.of([-1.0, 0.0], line.cone)]

        report = check_minimizer(line, (0.5,), Mstar, grid, fast_dini,
                                 asserted=MINIMIZER_ASSERTIONS)

        assert report.verdict == Verdict.FAIL
        condition = report.child("VARIATIONAL_INEQUALITY")
        assert condition.failures[0].witness["x"] == [0.0]

    def test_empty_Mstar(self, line, grid):
        with pytest.raises(EmptyCollectionError):
            check_minimizer(line, (0.5,), [], grid)

    def test_necessary_mode(self, line, grid, fast_dini):
        report = check_minimizer(line, (0.5,), [], grid, fast_dini,
                                 mode=CheckMode.NECESSARY)

        assert [c.check for c in report.children] == ["PREMISE", "CONCLUSION_A"]
        assert report.verdict == Verdict.PASS
        assert "qconvex_at_point" in report.hypotheses_unverified

    def test_corpus_counterexample(self, settings):
        """Seven of the defining duals miss strict descent next to x0."""
        problem = load_corpus_problem("countable_duals.json")
        result = run_command("check-minimizer", problem, settings=settings)

        assert result.verdict == Verdict.FAIL

    @pytest.mark.parametrize("k", range(7))
    def test_every_finite_family_of_duals_fails(self, k, fast_dini):
        """z*_0..z*_k leave the points of (0, 1/(k+1)) without strict descent."""
        problem = load_corpus_problem("countable_duals.json")
        f = problem.function()
        Mstar = [DualVector.of([-1.0, -float(i)], f.cone) for i in range(k + 1)]

        report = check_minimizer(f, problem.x0, Mstar, problem.grid, fast_dini)

        assert report.verdict == Verdict.FAIL
        witness = report.child("VARIATIONAL_INEQUALITY").failures[0].witness
        assert 0.0 < witness["x"][0] < 1.0 / (k + 1)
        assert all(value >= -1e-7 for value in witness["dini"].values())

    @pytest.mark.parametrize("i", range(1, 9))
    def test_strict_descent_beyond_the_kink(self, i, fast_dini):
        f = load_corpus_problem("countable_duals.json").function()
        z = DualVector.of([-1.0, -float(i)], f.cone)
        x = 0.5 * (1.0 / (i + 1) + 1.0)

        value = zstar_dini(f, z, (x,), (-x,), fast_dini).scalar_value

        assert value < 0
        assert value == pytest.approx(-(i + 1) ** 2 * x / math.sqrt(1 + i * i), rel=1e-6)


class TestInfimizer:
    """Test attainment and the variational inequality for inf-translations."""

    def test_single_end_misses_attainment(self, line, grid, fast_dini):
        report = check_infimizer(line, [(0.0,)], grid, cfg=fast_dini, hull=False)

        assert report.verdict == Verdict.FAIL
        assert report.child("ATTAINMENT").verdict == Verdict.FAIL

    def test_finite_translation_fails_the_inequality(self, line, grid, fast_dini):
        """Between the ends only the hull translation stays flat."""
        report = check_infimizer(line, [(0.0,), (1.0,)], grid, cfg=fast_dini, hull=False)

        assert report.child("ATTAINMENT").verdict == Verdict.PASS
        assert report.child("STRONG_VI").verdict == Verdict.FAIL

    def test_hull_translation(self, line, grid, fast_dini):
        report = check_infimizer(line, [(0.0,), (1.0,)], grid, cfg=fast_dini)

        assert report.child("STRONG_VI").verdict == Verdict.PASS
        assert report.child("HULL_CONSISTENCY").verdict == Verdict.PASS
        assert report.verdict == Verdict.CONDITIONAL_PASS
        assert report.hypotheses_unverified == ["uniform_lsc"]

    def test_reverse_not_applicable_without_assertion(self, line, grid, fast_dini):
        report = check_infimizer(line, [(0.0,), (1.0,)], grid, cfg=fast_dini)

        assert report.child("REVERSE").hypotheses_unverified == ["qconvex_at_point"]

    def test_input_errors(self, line, grid):
        with pytest.raises(EmptyCollectionError):
            check_infimizer(line, [], grid)
        with pytest.raises(DomainError):
            check_infimizer(line, [(3.0,)], grid)
        with pytest.raises(DimensionError):
            check_infimizer(line, [(0.0,)], SampleGrid.parse("0:1:0.5,0:1:0.5"))


class TestSolution:
    """Test the combined solution check on the triangle."""

    def test_hypotenuse(self, triangle_problem, settings):
        result = run_command("check-solution", triangle_problem, settings=settings)

        assert result.verdict == Verdict.PASS
        names = [c.check for c in result.report.children]
        assert names[0] == "INFIMIZER"
        assert names[-1] == "DIRECT"
        assert len(names) == 2 + len(triangle_problem.M)

    def test_interior_point(self, triangle_problem, settings):
        result = run_command("check-infimizer", triangle_problem,
                             CommandArgs(M=[[0.8, 0.8]]), settings)

        assert result.verdict == Verdict.FAIL


class TestSolutionVerdict:
    """Test which sub-reports decide the solution verdict."""

    M = [(0.0,), (1.0,)]

    def failing(self, monkeypatch, name):
        real = optimality.check_infimizer

        def patched(*args, **kwargs):
            report = real(*args, **kwargs)
            children = [c.model_copy(update={"verdict": Verdict.FAIL}) if c.check == name
                        else c for c in report.children]
            return report.model_copy(update={"children": children,
                                             "verdict": Verdict.FAIL})

        monkeypatch.setattr(optimality, "check_infimizer", patched)

    def run(self, line, grid, fast_dini):
        return check_solution(line, self.M, axis_duals(line.cone), grid, cfg=fast_dini,
                              asserted=[AssertedProperty.UNIFORM_LSC,
                                        *MINIMIZER_ASSERTIONS])

    def test_side_checks_are_informational(self, line, grid, fast_dini, monkeypatch):
        baseline = self.run(line, grid, fast_dini)
        self.failing(monkeypatch, "ATTAINMENT")

        report = self.run(line, grid, fast_dini)

        assert report.child("INFIMIZER").verdict == Verdict.FAIL
        assert report.child("INFIMIZER").child("ATTAINMENT").verdict == Verdict.FAIL
        assert report.child("INFIMIZER").child("STRONG_VI").verdict != Verdict.FAIL
        assert report.verdict == baseline.verdict
        assert report.verdict != Verdict.FAIL

    def test_strong_inequality_decides(self, line, grid, fast_dini, monkeypatch):
        self.failing(monkeypatch, "STRONG_VI")

        report = self.run(line, grid, fast_dini)

        assert report.verdict == Verdict.FAIL
        assert [c.check for c in report.children][0] == "INFIMIZER"
