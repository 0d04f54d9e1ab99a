"""Verb dispatch shared by the command line and the corpus runner."""

from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence

from pydantic import BaseModel, ConfigDict, Field

from ..domain.dini import residual_dini_result, scalar_dini_result, zstar_dini
from ..domain.exceptions import EmptyCollectionError, ValidationError
from ..domain.funcmodel import SampleGrid, ScalarEvaluator, restrict_segment, scalarize
from ..domain.gencvx import (classify_radial, classify_segment, diewert_witness,
                             domain_star_shaped, qconvex_at_point, set_quasiconvex,
                             strict_monotone_check)
from ..domain.models import (DEFAULT_DINI, DEFAULT_TOLERANCES, CheckMode, CheckReport,
                             ConvexityProperty, DiniConfig, DiniMode, Point,
                             Tolerances, Verdict)
from ..domain.polytope import EXACT_MAX_DIM, DualVector
from ..infrastructure.logging import get_logger
from ..infrastructure.problem_loader import Problem
from .optimality import check_infimizer, check_minimizer, check_solution

logger = get_logger(__name__)

RADIAL_PROPERTIES = (
    ConvexityProperty.QUASI,
    ConvexityProperty.SEMISTRICT_QUASI,
    ConvexityProperty.PSEUDO,
    ConvexityProperty.LSC,
    ConvexityProperty.LEVEL_INTERVALS,
)


class CommandArgs(BaseModel):
    """Per-invocation inputs; anything left unset falls back to the problem file."""

    model_config = ConfigDict(extra="forbid")

    grid: Optional[str] = None
    tgrid: Optional[str] = None
    dual_refine: Optional[int] = Field(default=None, ge=0)
    t0: Optional[float] = Field(default=None, gt=0)
    rho: Optional[float] = Field(default=None, gt=0, lt=1)
    K: Optional[int] = Field(default=None, ge=2)
    window: Optional[int] = Field(default=None, ge=1)
    segment_points: Optional[int] = Field(default=None, ge=33)
    x: Optional[List[float]] = None
    u: Optional[List[float]] = None
    zstar: Optional[List[float]] = None
    a: Optional[List[float]] = None
    b: Optional[List[float]] = None
    x0: Optional[List[float]] = None
    M: Optional[List[List[float]]] = None
    Mstar: Optional[List[List[float]]] = None
    scalar: Optional[str] = None
    dini_mode: Optional[DiniMode] = None
    check_mode: Optional[CheckMode] = None
    property: Optional[ConvexityProperty] = None
    profile: bool = False
    witness: bool = False
    backward: bool = False
    finite: bool = False


@dataclass(frozen=True)
class RunSettings:
    """Configuration-level defaults every command starts from."""

    tolerances: Tolerances = DEFAULT_TOLERANCES
    dini: DiniConfig = DEFAULT_DINI
    segment_points: int = 129
    edge_samples: int = 9
    dual_refinement: int = 1

    @classmethod
    def from_config(cls, config: Dict[str, Any]) -> "RunSettings":
        """Build from ``get_application_config()`` output."""
        return cls(
            tolerances=config["tolerances"],
            dini=config["dini"],
            segment_points=config["segment_points"],
            edge_samples=config["hull_edge_samples"],
            dual_refinement=config["dual_refinement"],
        )


@dataclass
class CommandResult:
    """Outcome of one verb: a verdict, named values and optional table rows."""

    verb: str
    problem: str
    verdict: Verdict
    values: Dict[str, Any] = field(default_factory=dict)
    report: Optional[CheckReport] = None
    columns: List[str] = field(default_factory=list)
    rows: List[List[Any]] = field(default_factory=list)


# -- argument resolution ----------------------------------------------------------------

def _require(value: Optional[Any], name: str) -> Any:
    if value is None:
        raise ValidationError(f"--{name} is required for this command")
    return value


def _point(values: Sequence[float]) -> Point:
    return tuple(float(v) for v in values)


def _grid(problem: Problem, args: CommandArgs) -> SampleGrid:
    return SampleGrid.parse(args.grid) if args.grid else problem.grid


def _tgrid(problem: Problem, args: CommandArgs) -> Optional[SampleGrid]:
    return SampleGrid.parse(args.tgrid) if args.tgrid else problem.tgrid


def _segment_grid(args: CommandArgs, settings: RunSettings) -> SampleGrid:
    return SampleGrid.unit_interval(args.segment_points or settings.segment_points)


def _dini(problem: Problem, args: CommandArgs, settings: RunSettings) -> DiniConfig:
    cfg = problem.dini_config(settings.dini)
    flags = {k: getattr(args, k) for k in ("t0", "rho", "K", "window")
             if getattr(args, k) is not None}
    return DiniConfig(**{**cfg.model_dump(), **flags}) if flags else cfg


def _duals(problem: Problem, args: CommandArgs, settings: RunSettings) -> List[DualVector]:
    return problem.duals(args.dual_refine, settings.dual_refinement)


def _zstar(problem: Problem, args: CommandArgs) -> Optional[DualVector]:
    if args.zstar is None:
        return None
    return DualVector.of(args.zstar, problem.cone)


def _mstar(problem: Problem, args: CommandArgs) -> List[DualVector]:
    if args.Mstar is not None:
        return [DualVector.of(z, problem.cone) for z in args.Mstar]
    return list(problem.Mstar)


def _scalar_function(problem: Problem, args: CommandArgs) -> ScalarEvaluator:
    """A named scalar function of the problem, else the scalarization at --zstar."""
    if args.scalar:
        return problem.scalar(args.scalar)
    zstar = _zstar(problem, args)
    if zstar is None:
        raise ValidationError("give --scalar NAME or --zstar for a scalar command")
    return scalarize(problem.function(), zstar)


# -- verbs ----------------------------------------------------------------------------------

def run_eval(problem: Problem, args: CommandArgs, settings: RunSettings) -> CommandResult:
    x = _point(_require(args.x, "x"))
    if args.scalar:
        value = problem.scalar(args.scalar)(x)
        return CommandResult("eval", problem.name, Verdict.PASS,
                             {"x": x, "value": value})
    f = problem.function()
    A = f.evaluate(x)
    values: Dict[str, Any] = {"x": x, "tag": A.tag.value, "set": str(A)}
    zstar = _zstar(problem, args)
    if zstar is not None:
        values["zstar"] = zstar.coeffs
        values["phi"] = scalarize(f, zstar)(x)
    return CommandResult("eval", problem.name, Verdict.PASS, values)


def run_scalarize(problem: Problem, args: CommandArgs,
                  settings: RunSettings) -> CommandResult:
    phi = _scalar_function(problem, args)
    grid = _grid(problem, args)
    rows = [[*x, phi(x)] for x in grid.points()]
    columns = [f"x{i + 1}" for i in range(grid.dim)] + ["phi"]
    low = min((row[-1] for row in rows), default=float("inf"))
    return CommandResult("scalarize", problem.name, Verdict.PASS,
                         {"grid": grid.describe(), "points": len(rows), "min": low},
                         columns=columns, rows=rows)


def run_dini(problem: Problem, args: CommandArgs, settings: RunSettings) -> CommandResult:
    x = _point(_require(args.x, "x"))
    u = _point(_require(args.u, "u"))
    cfg = _dini(problem, args, settings)
    zstar = _zstar(problem, args)
    if args.scalar:
        result = scalar_dini_result(problem.scalar(args.scalar), x, u, cfg)
    else:
        f = problem.function()
        mode = args.dini_mode or (DiniMode.ZSTAR if zstar else DiniMode.RESIDUAL)
        if mode == DiniMode.RESIDUAL:
            duals = _duals(problem, args, settings) if f.d > EXACT_MAX_DIM else None
            result = residual_dini_result(f, x, u, cfg, duals)
        elif zstar is None:
            raise ValidationError(f"--zstar is required for {mode.value} mode")
        elif mode == DiniMode.ZSTAR:
            result = zstar_dini(f, zstar, x, u, cfg)
        else:
            result = scalar_dini_result(scalarize(f, zstar), x, u, cfg)

    values: Dict[str, Any] = {"mode": result.mode.value, "x": x, "u": u,
                              "scalar": result.scalar_value, "stable": result.stable}
    if result.set_value is not None:
        values["set"] = str(result.set_value)
        values["tag"] = result.set_value.tag.value
    if zstar is not None:
        values["zstar"] = zstar.coeffs
    verdict = Verdict.PASS if result.stable else Verdict.LOW_CONFIDENCE
    return CommandResult("dini", problem.name, verdict, values,
                         columns=["x", "u", "mode", "dini"],
                         rows=[[x, u, result.mode.value, result.scalar_value]])


def run_classify(problem: Problem, args: CommandArgs,
                 settings: RunSettings) -> CommandResult:
    cfg = _dini(problem, args, settings)
    tolerances = settings.tolerances
    segment = _segment_grid(args, settings)

    if args.property == ConvexityProperty.SET_QUASI:
        verdict = set_quasiconvex(problem.function(), _grid(problem, args),
                                  _tgrid(problem, args), tolerances.tau_h)
        return _verdict_result(problem, verdict)

    phi = _scalar_function(problem, args)
    a = _point(_require(args.a, "a"))
    if args.profile:
        profile = classify_segment(restrict_segment(phi, a, _require(args.b, "b")),
                                   segment, tolerances.tau_strict)
        return CommandResult("classify", problem.name, Verdict.PASS,
                             profile.model_dump(mode="json"))
    if args.witness:
        found = diewert_witness(phi, a, _require(args.b, "b"), segment, cfg,
                                args.backward, tolerances.tau_strict)
        return CommandResult("classify", problem.name, Verdict.PASS, found._asdict())

    prop = _require(args.property, "property")
    if prop == ConvexityProperty.QCONVEX_AT_POINT:
        verdict = qconvex_at_point(phi, a, _grid(problem, args), _tgrid(problem, args),
                                   tolerances.tau_strict)
    elif prop == ConvexityProperty.STAR_SHAPED:
        verdict = domain_star_shaped(phi, a, _grid(problem, args), _tgrid(problem, args))
    elif prop == ConvexityProperty.STRICT_MONOTONE:
        verdict = strict_monotone_check(phi, a, _require(args.b, "b"), cfg,
                                        tol=tolerances.tau_strict)
    elif prop in RADIAL_PROPERTIES:
        verdict = classify_radial(phi, a, _require(args.b, "b"), prop, segment, cfg,
                                  tolerances)
    else:
        raise ValidationError(f"cannot classify {prop.value} for a scalar function")
    return _verdict_result(problem, verdict)


def _verdict_result(problem: Problem, verdict: Any) -> CommandResult:
    values: Dict[str, Any] = {"property": verdict.property.value, "holds": verdict.holds,
                              "grid": verdict.grid, "samples": verdict.samples}
    if verdict.witness:
        values["witness"] = verdict.witness
    return CommandResult("classify", problem.name,
                         Verdict.PASS if verdict.holds else Verdict.FAIL, values)


def _report_result(verb: str, problem: Problem, report: CheckReport) -> CommandResult:
    return CommandResult(verb, problem.name, report.verdict,
                         {"check": report.check, "grid": report.grid,
                          "grid_points": report.grid_points},
                         report=report)


def _points(rows: Optional[List[List[float]]], fallback: List[Point],
            name: str) -> List[Point]:
    points = [_point(r) for r in rows] if rows is not None else list(fallback)
    if not points:
        raise EmptyCollectionError(f"{name} must not be empty")
    return points


def run_check_infimizer(problem: Problem, args: CommandArgs,
                        settings: RunSettings) -> CommandResult:
    report = check_infimizer(
        problem.function(), _points(args.M, problem.M, "M"), _grid(problem, args),
        _duals(problem, args, settings), _dini(problem, args, settings),
        settings.tolerances, problem.asserted, hull=not args.finite,
        edge_samples=settings.edge_samples,
    )
    return _report_result("check-infimizer", problem, report)


def run_check_minimizer(problem: Problem, args: CommandArgs,
                        settings: RunSettings) -> CommandResult:
    x0 = _point(args.x0) if args.x0 is not None else problem.x0
    report = check_minimizer(
        problem.function(), _require(x0, "x0"), _mstar(problem, args),
        _grid(problem, args), _dini(problem, args, settings),
        args.check_mode or CheckMode.SUFFICIENT, _duals(problem, args, settings),
        settings.tolerances, problem.asserted,
    )
    return _report_result("check-minimizer", problem, report)


def run_check_solution(problem: Problem, args: CommandArgs,
                       settings: RunSettings) -> CommandResult:
    report = check_solution(
        problem.function(), _points(args.M, problem.M, "M"), _mstar(problem, args),
        _grid(problem, args), _duals(problem, args, settings),
        _dini(problem, args, settings), args.check_mode or CheckMode.SUFFICIENT,
        settings.tolerances, problem.asserted, settings.edge_samples,
    )
    return _report_result("check-solution", problem, report)


VERBS: Dict[str, Callable[[Problem, CommandArgs, RunSettings], CommandResult]] = {
    "eval": run_eval,
    "scalarize": run_scalarize,
    "dini": run_dini,
    "classify": run_classify,
    "check-infimizer": run_check_infimizer,
    "check-minimizer": run_check_minimizer,
    "check-solution": run_check_solution,
}


def run_command(verb: str, problem: Problem, args: Optional[CommandArgs] = None,
                settings: Optional[RunSettings] = None) -> CommandResult:
    """Run ``verb`` on ``problem``; unknown verbs raise ValidationError."""
    try:
        handler = VERBS[verb]
    except KeyError as e:
        raise ValidationError(f"unknown verb {verb!r}", {"verbs": sorted(VERBS)}) from e
    logger.debug("running command", verb=verb, problem=problem.name)
    return handler(problem, args or CommandArgs(), settings or RunSettings())
