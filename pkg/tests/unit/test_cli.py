"""Unit tests for the command line."""

import json

import pytest
from typer.testing import CliRunner

from setlat.application.commands import CommandResult
from setlat.domain.exceptions import ValidationError
from setlat.domain.models import CheckReport, Verdict
from setlat.main import app, exit_code, parse_vector, parse_vectors

runner = CliRunner()
QUIET = ["--log-level", "ERROR"]


@pytest.fixture
def line_file(tmp_path, problem_json):
    path = tmp_path / "line.json"
    path.write_text(json.dumps(problem_json), encoding="utf-8")
    return path


@pytest.fixture
def spike_file(tmp_path):
    path = tmp_path / "spike.json"
    path.write_text(json.dumps({
        "name": "spike",
        "space": {"n": 1, "d": 1},
        "cone": {"generators": [[1]]},
        "scalar_functions": {"spike": {"pieces": [{"guard": "x1 == 0", "value": "1"},
                                                  {"value": "0"}]}},
        "grids": {"domain": "-1:1:0.5"},
    }), encoding="utf-8")
    return path


class TestArgumentParsing:
    """Test vector arguments."""

    def test_vector(self):
        assert parse_vector("0.5,-1", "x") == [0.5, -1.0]
        assert parse_vector(None, "x") is None

    def test_vectors(self):
        assert parse_vectors("1,0;0,1", "M") == [[1.0, 0.0], [0.0, 1.0]]

    def test_bad_number(self):
        with pytest.raises(ValidationError):
            parse_vector("1,a", "x")


class TestExitCodes:
    """Test the verdict to exit code mapping."""

    @pytest.mark.parametrize("verdict,strict,code", [
        (Verdict.PASS, False, 0),
        (Verdict.CONDITIONAL_PASS, True, 0),
        (Verdict.LOW_CONFIDENCE, False, 0),
        (Verdict.LOW_CONFIDENCE, True, 3),
        (Verdict.INCONSISTENT_NUMERICS, False, 1),
        (Verdict.FAIL, True, 1),
    ])
    def test_mapping(self, verdict, strict, code):
        assert exit_code(CommandResult("dini", "p", verdict), strict) == code

    def test_nested_low_confidence(self):
        report = CheckReport(check="MINIMIZER", verdict=Verdict.PASS, children=[
            CheckReport(check="VARIATIONAL_INEQUALITY", verdict=Verdict.LOW_CONFIDENCE)])
        result = CommandResult("check-minimizer", "p", Verdict.PASS, report=report)

        assert exit_code(result, strict=True) == 3
        assert exit_code(result, strict=False) == 0


class TestCommands:
    """Test invocations end to end."""

    def test_eval_csv(self, line_file):
        result = runner.invoke(app, QUIET + ["eval", str(line_file), "--x", "0.25",
                                             "--zstar=-1,0", "--format", "csv"])

        assert result.exit_code == 0
        lines = result.stdout.splitlines()
        assert lines[0] == "key,value"
        assert "phi,0.25" in lines

    def test_eval_text(self, line_file):
        result = runner.invoke(app, QUIET + ["eval", str(line_file), "--x", "0.25"])

        assert result.exit_code == 0
        assert "verdict: PASS" in result.stdout

    def test_failed_property_exits_one(self, spike_file):
        result = runner.invoke(app, QUIET + ["classify", str(spike_file), "--scalar",
                                             "spike", "--a=-1", "--b", "1",
                                             "--property", "quasi"])

        assert result.exit_code == 1

    def test_holding_property_exits_zero(self, spike_file):
        result = runner.invoke(app, QUIET + ["classify", str(spike_file), "--scalar",
                                             "spike", "--a=-1", "--b", "1",
                                             "--property", "SEMISTRICT_QUASI"])

        assert result.exit_code == 0

    def test_missing_file_exits_two(self, tmp_path):
        result = runner.invoke(app, QUIET + ["eval", str(tmp_path / "nope.json"),
                                             "--x", "0"])

        assert result.exit_code == 2

    def test_malformed_file_exits_two(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{", encoding="utf-8")

        result = runner.invoke(app, QUIET + ["eval", str(path), "--x", "0"])

        assert result.exit_code == 2

    def test_bad_vector_exits_two(self, line_file):
        result = runner.invoke(app, QUIET + ["eval", str(line_file), "--x", "a"])

        assert result.exit_code == 2

    def test_invalid_dini_steps_exit_two(self, line_file):
        result = runner.invoke(app, QUIET + ["dini", str(line_file), "--x", "0.5",
                                             "--u", "1", "--rho", "2"])

        assert result.exit_code == 2

    def test_unknown_property_exits_two(self, spike_file):
        result = runner.invoke(app, QUIET + ["classify", str(spike_file),
                                             "--property", "convex"])

        assert result.exit_code == 2

    def test_bad_log_level(self):
        result = runner.invoke(app, ["--log-level", "LOUD", "corpus", "--list"])

        assert result.exit_code == 2


class TestCorpusCommand:
    """Test the corpus command."""

    def test_list(self):
        result = runner.invoke(app, QUIET + ["corpus", "--list"])

        assert result.exit_code == 0
        assert "triangle" in result.stdout.split()

    def test_selected_problem_csv(self):
        result = runner.invoke(app, QUIET + ["corpus", "--name", "staircase",
                                             "--format", "csv"])

        assert result.exit_code == 0
        lines = result.stdout.splitlines()
        assert lines[0] == "problem,expectation,verb,expected,actual,status"
        assert all(line.endswith(",ok") for line in lines[1:])

    def test_whole_corpus_is_byte_stable(self):
        first = runner.invoke(app, QUIET + ["corpus"])
        second = runner.invoke(app, QUIET + ["corpus"])

        assert first.exit_code == 0
        assert second.exit_code == 0
        assert first.stdout_bytes == second.stdout_bytes
