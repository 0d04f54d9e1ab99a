"""Command-line entry point for setlat."""

import json
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

import typer
from pydantic import ValidationError as PydanticValidationError
from rich.console import Console

from .application.commands import CommandArgs, CommandResult, RunSettings, run_command
from .application.corpus import list_corpus, run_corpus
from .cli.reports import (OutputFormat, make_console, render_corpus_csv,
                          render_corpus_list, render_corpus_text, render_csv,
                          render_text)
from .config import get_application_config, get_logging_config, load_config
from .domain.exceptions import SetLatError, ValidationError, exit_code_for, format_error_response
from .domain.models import CheckMode, ConvexityProperty, DiniMode, Verdict
from .infrastructure.logging import configure_logging, get_logger
from .infrastructure.problem_loader import parse_problem

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_LOW_CONFIDENCE = 3

app = typer.Typer(
    name="setlat",
    help="Lattice calculus of closed convex upper sets and Minty-type optimality checks.",
    rich_markup_mode="rich",
    no_args_is_help=True,
)

# shared options
PROBLEM = typer.Argument(..., help="Problem file (JSON)")
GRID = typer.Option(None, "--grid", help="Sampling grid lo:hi:step[,lo:hi:step...]")
TGRID = typer.Option(None, "--tgrid", help="Segment parameter grid in [0, 1]")
DUAL_REFINE = typer.Option(None, "--dual-refine", min=0, help="Dual-cone refinement level")
T0 = typer.Option(None, "--t0", help="First Dini step")
RHO = typer.Option(None, "--rho", help="Dini step ratio in (0, 1)")
K = typer.Option(None, "--K", help="Number of Dini steps")
WINDOW = typer.Option(None, "--window", help="Dini tail window")
ZSTAR = typer.Option(None, "--zstar", help="Dual vector, comma separated")
SCALAR = typer.Option(None, "--scalar", help="Named scalar function of the problem")
STRICT = typer.Option(False, "--strict", help="Exit 3 when a result has low confidence")
FORMAT = typer.Option(OutputFormat.TEXT, "--format", case_sensitive=False,
                      help="Output format")
M_POINTS = typer.Option(None, "--M", help="Points of M: '1,0;0,1'")
MSTAR = typer.Option(None, "--Mstar", help="Dual vectors of M*: '-1,0;0,-1'")


def _stderr() -> Console:
    return Console(stderr=True, highlight=False, emoji=False)


def _fail(error: SetLatError) -> None:
    _stderr().print_json(json.dumps(format_error_response(error), default=str))
    raise typer.Exit(exit_code_for(error))


def parse_vector(text: Optional[str], name: str) -> Optional[List[float]]:
    """'0.5,-1' -> [0.5, -1.0]."""
    if text is None:
        return None
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise ValidationError(f"--{name} must be a comma separated list of numbers",
                              {"value": text}) from e


def parse_vectors(text: Optional[str], name: str) -> Optional[List[List[float]]]:
    """'1,0;0,1' -> [[1.0, 0.0], [0.0, 1.0]]."""
    if text is None:
        return None
    vectors = [parse_vector(part, name) for part in text.split(";") if part.strip()]
    return [v for v in vectors if v is not None]


def exit_code(result: CommandResult, strict: bool) -> int:
    if result.verdict in (Verdict.FAIL, Verdict.INCONSISTENT_NUMERICS):
        return EXIT_FAIL
    if strict:
        verdicts = [result.verdict]
        if result.report is not None:
            verdicts += [r.verdict for r in result.report.iter_reports()]
        if Verdict.LOW_CONFIDENCE in verdicts:
            return EXIT_LOW_CONFIDENCE
    return EXIT_OK


def _execute(verb: str, problem: Path, args: Dict[str, Any],
             output: OutputFormat, strict: bool) -> None:
    try:
        settings = RunSettings.from_config(get_application_config())
        loaded = parse_problem(problem, settings.tolerances)
        command = CommandArgs.model_validate(
            {k: v for k, v in args.items() if v is not None})
        result = run_command(verb, loaded, command, settings)
    except SetLatError as e:
        _fail(e)
        return
    except PydanticValidationError as e:
        first = e.errors()[0]
        where = ".".join(str(part) for part in first["loc"])
        _fail(ValidationError(f"--{where}: {first['msg']}"))
        return

    logger.debug("command finished", verb=verb, verdict=result.verdict.value)
    if output == OutputFormat.CSV:
        sys.stdout.write(render_csv(result))
    else:
        render_text(make_console(), result)
    raise typer.Exit(exit_code(result, strict))


@app.callback()
def main(
    log_level: Optional[str] = typer.Option(None, "--log-level",
                                            help="DEBUG, INFO, WARNING or ERROR"),
    log_format: Optional[str] = typer.Option(None, "--log-format", help="text or json"),
):
    """Evaluate, differentiate and classify set-valued functions from problem files."""
    try:
        config = load_config({"log_level": log_level, "log_format": log_format})
        configure_logging(**get_logging_config(config))
    except SetLatError as e:
        _fail(e)


@app.command("eval")
def eval_command(
    problem: Path = PROBLEM,
    x: str = typer.Option(..., "--x", help="Point, comma separated"),
    zstar: Optional[str] = ZSTAR,
    scalar: Optional[str] = SCALAR,
    output: OutputFormat = FORMAT,
    strict: bool = STRICT,
):
    """Evaluate f(x), and its scalarization when --zstar is given."""
    try:
        args = {"x": parse_vector(x, "x"), "zstar": parse_vector(zstar, "zstar"),
                "scalar": scalar}
    except SetLatError as e:
        _fail(e)
        return
    _execute("eval", problem, args, output, strict)


@app.command()
def scalarize(
    problem: Path = PROBLEM,
    zstar: Optional[str] = ZSTAR,
    scalar: Optional[str] = SCALAR,
    grid: Optional[str] = GRID,
    output: OutputFormat = FORMAT,
    strict: bool = STRICT,
):
    """Tabulate a scalarization over the grid."""
    try:
        args = {"zstar": parse_vector(zstar, "zstar"), "scalar": scalar, "grid": grid}
    except SetLatError as e:
        _fail(e)
        return
    _execute("scalarize", problem, args, output, strict)


@app.command()
def dini(
    problem: Path = PROBLEM,
    x: str = typer.Option(..., "--x", help="Base point"),
    u: str = typer.Option(..., "--u", help="Direction"),
    zstar: Optional[str] = ZSTAR,
    scalar: Optional[str] = SCALAR,
    mode: Optional[DiniMode] = typer.Option(None, "--mode", case_sensitive=False,
                                            help="SCALAR, ZSTAR or RESIDUAL"),
    dual_refine: Optional[int] = DUAL_REFINE,
    t0: Optional[float] = T0,
    rho: Optional[float] = RHO,
    steps: Optional[int] = K,
    window: Optional[int] = WINDOW,
    output: OutputFormat = FORMAT,
    strict: bool = STRICT,
):
    """Lower Dini directional derivative at x along u."""
    try:
        args = {"x": parse_vector(x, "x"), "u": parse_vector(u, "u"),
                "zstar": parse_vector(zstar, "zstar"), "scalar": scalar,
                "dini_mode": mode, "dual_refine": dual_refine, "t0": t0, "rho": rho,
                "K": steps, "window": window}
    except SetLatError as e:
        _fail(e)
        return
    _execute("dini", problem, args, output, strict)


@app.command()
def classify(
    problem: Path = PROBLEM,
    prop: Optional[ConvexityProperty] = typer.Option(
        None, "--property", case_sensitive=False, help="Property to decide"),
    a: Optional[str] = typer.Option(None, "--a", help="Segment start"),
    b: Optional[str] = typer.Option(None, "--b", help="Segment end"),
    zstar: Optional[str] = ZSTAR,
    scalar: Optional[str] = SCALAR,
    grid: Optional[str] = GRID,
    tgrid: Optional[str] = TGRID,
    segment_points: Optional[int] = typer.Option(None, "--segment-points", min=33,
                                                 help="Points on the segment grid"),
    profile: bool = typer.Option(False, "--profile", help="Decrease/constant/increase split"),
    witness: bool = typer.Option(False, "--witness", help="Search a mean-value witness"),
    backward: bool = typer.Option(False, "--backward", help="Witness in the reverse direction"),
    t0: Optional[float] = T0,
    rho: Optional[float] = RHO,
    steps: Optional[int] = K,
    window: Optional[int] = WINDOW,
    output: OutputFormat = FORMAT,
    strict: bool = STRICT,
):
    """Generalized convexity of f or of a scalar function."""
    try:
        args = {"property": prop, "a": parse_vector(a, "a"), "b": parse_vector(b, "b"),
                "zstar": parse_vector(zstar, "zstar"), "scalar": scalar, "grid": grid,
                "tgrid": tgrid, "segment_points": segment_points, "profile": profile,
                "witness": witness, "backward": backward, "t0": t0, "rho": rho,
                "K": steps, "window": window}
    except SetLatError as e:
        _fail(e)
        return
    _execute("classify", problem, args, output, strict)


@app.command("check-infimizer")
def check_infimizer(
    problem: Path = PROBLEM,
    m_points: Optional[str] = M_POINTS,
    grid: Optional[str] = GRID,
    dual_refine: Optional[int] = DUAL_REFINE,
    finite: bool = typer.Option(False, "--finite", help="Translate by M instead of co M"),
    t0: Optional[float] = T0,
    rho: Optional[float] = RHO,
    steps: Optional[int] = K,
    window: Optional[int] = WINDOW,
    output: OutputFormat = FORMAT,
    strict: bool = STRICT,
):
    """Check that M is an infimizer."""
    try:
        args = {"M": parse_vectors(m_points, "M"), "grid": grid,
                "dual_refine": dual_refine, "finite": finite, "t0": t0, "rho": rho,
                "K": steps, "window": window}
    except SetLatError as e:
        _fail(e)
        return
    _execute("check-infimizer", problem, args, output, strict)


@app.command("check-minimizer")
def check_minimizer(
    problem: Path = PROBLEM,
    x0: Optional[str] = typer.Option(None, "--x0", help="Candidate minimizer"),
    mstar: Optional[str] = MSTAR,
    mode: CheckMode = typer.Option(CheckMode.SUFFICIENT, "--mode", case_sensitive=False,
                                   help="SUFFICIENT or NECESSARY"),
    grid: Optional[str] = GRID,
    dual_refine: Optional[int] = DUAL_REFINE,
    t0: Optional[float] = T0,
    rho: Optional[float] = RHO,
    steps: Optional[int] = K,
    window: Optional[int] = WINDOW,
    output: OutputFormat = FORMAT,
    strict: bool = STRICT,
):
    """Check that f(x0) is a minimal value."""
    try:
        args = {"x0": parse_vector(x0, "x0"), "Mstar": parse_vectors(mstar, "Mstar"),
                "check_mode": mode, "grid": grid, "dual_refine": dual_refine,
                "t0": t0, "rho": rho, "K": steps, "window": window}
    except SetLatError as e:
        _fail(e)
        return
    _execute("check-minimizer", problem, args, output, strict)


@app.command("check-solution")
def check_solution(
    problem: Path = PROBLEM,
    m_points: Optional[str] = M_POINTS,
    mstar: Optional[str] = MSTAR,
    mode: CheckMode = typer.Option(CheckMode.SUFFICIENT, "--mode", case_sensitive=False,
                                   help="SUFFICIENT or NECESSARY"),
    grid: Optional[str] = GRID,
    dual_refine: Optional[int] = DUAL_REFINE,
    t0: Optional[float] = T0,
    rho: Optional[float] = RHO,
    steps: Optional[int] = K,
    window: Optional[int] = WINDOW,
    output: OutputFormat = FORMAT,
    strict: bool = STRICT,
):
    """Check that M is a solution: an infimizer made of minimizers."""
    try:
        args = {"M": parse_vectors(m_points, "M"), "Mstar": parse_vectors(mstar, "Mstar"),
                "check_mode": mode, "grid": grid, "dual_refine": dual_refine,
                "t0": t0, "rho": rho, "K": steps, "window": window}
    except SetLatError as e:
        _fail(e)
        return
    _execute("check-solution", problem, args, output, strict)


@app.command()
def corpus(
    show_list: bool = typer.Option(False, "--list", help="List bundled problems"),
    names: Optional[List[str]] = typer.Option(None, "--name",
                                              help="Run only this problem"),
    output: OutputFormat = FORMAT,
):
    """Run the bundled problems against their expected verdicts."""
    console = make_console()
    try:
        if show_list:
            render_corpus_list(console, list_corpus())
            raise typer.Exit(EXIT_OK)
        settings = RunSettings.from_config(get_application_config())
        report = run_corpus(names or None, settings)
    except SetLatError as e:
        _fail(e)
        return

    if output == OutputFormat.CSV:
        sys.stdout.write(render_corpus_csv(report))
    else:
        render_corpus_text(console, report)
    raise typer.Exit(EXIT_OK if report.passed else EXIT_FAIL)


if __name__ == "__main__":
    app()
