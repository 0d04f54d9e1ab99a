"""Bundled regression corpus: problem files plus expected verdicts.

Each ``<name>.expected.json`` names a problem file in the same package
directory and lists commands with the verdict (and optionally values)
they must produce.
"""

import json
import math
from importlib import resources
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator
from pydantic import ValidationError as PydanticValidationError

from ..domain.exceptions import ProblemFileError, ProblemSchemaError, SetLatError
from ..domain.models import Verdict
from ..infrastructure.logging import get_logger
from ..infrastructure.problem_loader import Problem, parse_problem_text
from .commands import VERBS, CommandArgs, CommandResult, RunSettings, run_command

logger = get_logger(__name__)

CORPUS_PACKAGE = "setlat.corpus"
EXPECTED_SUFFIX = ".expected.json"
VALUE_TOL = 1e-6


class Expectation(BaseModel):
    """One command and the verdict it must produce."""

    model_config = ConfigDict(extra="forbid")

    name: str
    verb: str
    args: Dict[str, Any] = Field(default_factory=dict)
    child: Optional[str] = None
    verdict: Verdict
    values: Dict[str, Any] = Field(default_factory=dict)

    @field_validator("verb")
    @classmethod
    def validate_verb(cls, v: str) -> str:
        if v not in VERBS:
            raise ValueError(f"unknown verb {v!r}")
        return v


class ExpectationFile(BaseModel):
    model_config = ConfigDict(extra="forbid")

    problem: str
    expectations: List[Expectation] = Field(min_length=1)


class ExpectationResult(BaseModel):
    problem: str
    name: str
    verb: str
    expected: Verdict
    actual: Optional[Verdict] = None
    passed: bool
    message: str = ""


class CorpusReport(BaseModel):
    results: List[ExpectationResult] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def failed(self) -> List[ExpectationResult]:
        return [r for r in self.results if not r.passed]


def _read(filename: str) -> str:
    try:
        return resources.files(CORPUS_PACKAGE).joinpath(filename).read_text("utf-8")
    except (FileNotFoundError, OSError) as e:
        raise ProblemFileError(f"corpus file not found: {filename}",
                               path=filename) from e


def list_corpus() -> List[str]:
    """Names of all bundled problems that carry expectations, sorted."""
    names = [entry.name[:-len(EXPECTED_SUFFIX)]
             for entry in resources.files(CORPUS_PACKAGE).iterdir()
             if entry.name.endswith(EXPECTED_SUFFIX)]
    return sorted(names)


def load_expectations(name: str) -> ExpectationFile:
    filename = name + EXPECTED_SUFFIX
    try:
        return ExpectationFile.model_validate(json.loads(_read(filename)))
    except json.JSONDecodeError as e:
        raise ProblemSchemaError(f"invalid JSON: {e.msg}", path=filename,
                                 line=e.lineno, column=e.colno) from e
    except PydanticValidationError as e:
        first = e.errors()[0]
        where = ".".join(str(part) for part in first["loc"])
        raise ProblemSchemaError(f"{where}: {first['msg']}", path=filename,
                                 field=where) from e


def load_corpus_problem(filename: str) -> Problem:
    return parse_problem_text(_read(filename), None)


def _lookup(values: Dict[str, Any], key: str) -> Any:
    current: Any = values
    for part in key.split("."):
        if not isinstance(current, dict) or part not in current:
            raise KeyError(key)
        current = current[part]
    return current


def _matches(expected: Any, actual: Any) -> bool:
    if isinstance(expected, bool) or isinstance(actual, bool):
        return expected == actual
    if isinstance(expected, (int, float)) and isinstance(actual, (int, float)):
        if math.isinf(expected) or math.isinf(actual):
            return expected == actual
        return abs(expected - actual) <= VALUE_TOL * max(1.0, abs(expected))
    if isinstance(expected, str) and isinstance(actual, (int, float)):
        token = expected.strip().lower()
        if token in ("+inf", "inf"):
            return actual == math.inf
        if token == "-inf":
            return actual == -math.inf
    if isinstance(expected, list) and isinstance(actual, (list, tuple)):
        return len(expected) == len(actual) and all(
            _matches(e, a) for e, a in zip(expected, actual))
    return expected == actual


def _actual_verdict(result: CommandResult, child: Optional[str]) -> Verdict:
    if child is None:
        return result.verdict
    if result.report is None:
        raise KeyError(child)
    report = result.report
    for name in child.split("/"):
        report = report.child(name)
    return report.verdict


def check_expectation(problem: Problem, expectation: Expectation,
                      settings: RunSettings) -> ExpectationResult:
    base = dict(problem=problem.name, name=expectation.name, verb=expectation.verb,
                expected=expectation.verdict)
    try:
        args = CommandArgs.model_validate(expectation.args)
        result = run_command(expectation.verb, problem, args, settings)
        actual = _actual_verdict(result, expectation.child)
    except (SetLatError, KeyError, PydanticValidationError) as e:
        logger.warning("corpus expectation errored", expectation=expectation.name,
                       error=str(e))
        return ExpectationResult(**base, passed=False,
                                 message=f"{type(e).__name__}: {e}")

    if actual != expectation.verdict:
        return ExpectationResult(**base, actual=actual, passed=False,
                                 message=f"verdict {actual.value}")
    for key, want in expectation.values.items():
        try:
            got = _lookup(result.values, key)
        except KeyError:
            return ExpectationResult(**base, actual=actual, passed=False,
                                     message=f"missing value {key}")
        if not _matches(want, got):
            return ExpectationResult(**base, actual=actual, passed=False,
                                     message=f"{key} = {got!r}, expected {want!r}")
    return ExpectationResult(**base, actual=actual, passed=True)


def run_corpus(names: Optional[List[str]] = None,
               settings: Optional[RunSettings] = None) -> CorpusReport:
    """Run the expectations of the named (default: all) bundled problems."""
    settings = settings or RunSettings()
    report = CorpusReport()
    for name in names or list_corpus():
        expectations = load_expectations(name)
        problem = load_corpus_problem(expectations.problem)
        for expectation in expectations.expectations:
            outcome = check_expectation(problem, expectation, settings)
            if not outcome.passed:
                logger.warning("corpus mismatch", problem=name,
                               expectation=expectation.name, message=outcome.message)
            report.results.append(outcome)
    return report
