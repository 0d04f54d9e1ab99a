"""Unit tests for problem files."""

import json

import pytest

from setlat.domain.exceptions import (DualVectorError, ExpressionParseError,
                                      ProblemFileError, ProblemSchemaError,
                                      ValidationError)
from setlat.domain.models import DiniConfig
from setlat.domain.polytope import set_equal, translate
from setlat.infrastructure.problem_loader import (parse_problem, parse_problem_data,
                                                  parse_problem_text)


class TestValidProblems:
    """Test construction of valid problems."""

    def test_vector_problem(self, problem_json, orthant2):
        problem = parse_problem_data(problem_json)

        assert problem.name == "line"
        assert problem.function().n == 1
        assert problem.grid.size == 5
        assert problem.M == [(0.0,), (1.0,)]
        assert problem.x0 == (0.5,)
        assert problem.Mstar == []
        assert problem.asserted == []
        assert set_equal(problem.function().evaluate((0.25,)),
                         translate([0.25, 0.75], orthant2))

    def test_dual_refinement_levels(self, problem_json):
        problem = parse_problem_data(problem_json)

        assert len(problem.duals()) == 3
        assert len(problem.duals(0)) == 2

        problem_json["dual_refinement"] = 0
        assert len(parse_problem_data(problem_json).duals()) == 2

    def test_dini_overrides(self, problem_json):
        problem_json["dini"] = {"K": 8, "window": 2}
        cfg = parse_problem_data(problem_json).dini_config(DiniConfig())

        assert cfg.K == 8
        assert cfg.window == 2
        assert cfg.t0 == DiniConfig().t0

    def test_infinite_vector_value(self, problem_json):
        problem_json["vector_function"]["pieces"].append({"guard": "x1 > 1",
                                                          "value": "-inf"})
        f = parse_problem_data(problem_json).function()

        assert f.evaluate((2.0,)).is_whole

    def test_scalar_functions_only(self):
        problem = parse_problem_data({
            "name": "s",
            "space": {"n": 1, "d": 1},
            "cone": {"generators": [[1]]},
            "scalar_functions": {"sq": {"pieces": [{"value": "x1^2"}]}},
            "grids": {"domain": "-1:1:0.5"},
        })

        assert problem.scalar("sq")((2.0,)) == 4.0
        with pytest.raises(ValidationError):
            problem.function()
        with pytest.raises(ValidationError):
            problem.scalar("cube")

    def test_read_from_disk(self, tmp_path, problem_json):
        path = tmp_path / "line.json"
        path.write_text(json.dumps(problem_json), encoding="utf-8")

        problem = parse_problem(path)

        assert problem.path == path
        assert problem.name == "line"


class TestSchemaErrors:
    """Test that schema violations name the offending field."""

    def test_missing_file(self, tmp_path):
        with pytest.raises(ProblemFileError) as info:
            parse_problem(tmp_path / "missing.json")

        assert not isinstance(info.value, ProblemSchemaError)

    def test_malformed_json_position(self):
        with pytest.raises(ProblemSchemaError) as info:
            parse_problem_text('{\n  "name": }')

        assert info.value.line == 2
        assert info.value.column == 11

    def test_missing_section(self, problem_json):
        del problem_json["grids"]

        with pytest.raises(ProblemSchemaError) as info:
            parse_problem_data(problem_json)

        assert info.value.field == "grids"

    def test_unknown_key(self, problem_json):
        problem_json["bogus"] = 1

        with pytest.raises(ProblemSchemaError) as info:
            parse_problem_data(problem_json)

        assert info.value.field == "bogus"

    def test_two_functions(self, problem_json):
        problem_json["function"] = {"pieces": [{"vertices": [["0", "0"]]}]}

        with pytest.raises(ProblemSchemaError) as info:
            parse_problem_data(problem_json)

        assert "either function or vector_function" in str(info.value)

    def test_cone_dimension(self, problem_json):
        problem_json["cone"] = {"generators": [[1, 0, 0]]}

        with pytest.raises(ProblemSchemaError):
            parse_problem_data(problem_json)

    def test_grid_axes(self, problem_json):
        problem_json["grids"]["domain"] = "0:1:0.5,0:1:0.5"

        with pytest.raises(ProblemSchemaError) as info:
            parse_problem_data(problem_json)

        assert info.value.field == "grids.domain"

    def test_point_dimension(self, problem_json):
        problem_json["x0"] = [0.5, 0.5]

        with pytest.raises(ProblemSchemaError) as info:
            parse_problem_data(problem_json)

        assert info.value.field == "x0"

    def test_bad_vector_literal(self, problem_json):
        problem_json["vector_function"]["pieces"][0]["value"] = "huge"

        with pytest.raises(ProblemSchemaError) as info:
            parse_problem_data(problem_json)

        assert info.value.field == "vector_function.pieces.0.value"

    def test_guard_parse_error_names_field(self, problem_json):
        problem_json["vector_function"]["pieces"][0]["guard"] = "0 <= x1 <="

        with pytest.raises(ExpressionParseError) as info:
            parse_problem_data(problem_json)

        assert info.value.details["field"] == "vector_function.pieces.0.guard"

    def test_dual_outside_cone(self, problem_json):
        problem_json["M_star"] = [[1, 0]]

        with pytest.raises(DualVectorError):
            parse_problem_data(problem_json)
