"""Problem files: JSON schema, validation and construction of domain objects.

A problem file names the spaces, the ordering cone, one set-valued or
vector function (and optionally extra scalar functions), the sampling grids
and the inputs of the checkers.
"""

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Sequence, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator
from pydantic import ValidationError as PydanticValidationError

from ..domain.exceptions import (ExpressionParseError, ProblemFileError,
                                 ProblemSchemaError, ValidationError)
from ..domain.expressions import Expr, parse_expression, parse_guard
from ..domain.funcmodel import (PieceKind, SampleGrid, ScalarFn, SetFn, SetPiece,
                                VectorFn, VectorPiece, parse_literal, scalar_piece,
                                vector_extension)
from ..domain.models import AssertedProperty, DiniConfig, Point, Tolerances
from ..domain.polytope import ConvexCone, DualVector, dual_cone_sample
from .logging import get_logger

logger = get_logger(__name__)

Scalar = Union[str, float]


# -- schema ------------------------------------------------------------------------

class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class SpaceSpec(_Strict):
    n: int = Field(ge=1, description="argument dimension")
    d: int = Field(ge=1, description="image dimension")


class ConeSpec(_Strict):
    generators: List[List[float]] = Field(min_length=1)


class PieceSpec(_Strict):
    guard: str = "true"
    kind: Literal["generators", "whole_space", "empty"] = "generators"
    vertices: List[List[Scalar]] = Field(default_factory=list)
    rays: List[List[Scalar]] = Field(default_factory=list)

    @model_validator(mode="after")
    def validate_generators(self) -> "PieceSpec":
        if self.kind == "generators" and not self.vertices:
            raise ValueError("a generators piece needs at least one vertex")
        return self


class FunctionSpec(_Strict):
    pieces: List[PieceSpec] = Field(min_length=1)


class VectorPieceSpec(_Strict):
    guard: str = "true"
    value: Union[List[Scalar], str]


class VectorFunctionSpec(_Strict):
    pieces: List[VectorPieceSpec] = Field(min_length=1)


class ScalarPieceSpec(_Strict):
    guard: str = "true"
    value: Scalar


class ScalarFunctionSpec(_Strict):
    n: int = Field(default=1, ge=1)
    pieces: List[ScalarPieceSpec] = Field(min_length=1)


class GridSpec(_Strict):
    domain: str
    t: Optional[str] = None


class DiniSpec(_Strict):
    t0: Optional[float] = Field(default=None, gt=0)
    rho: Optional[float] = Field(default=None, gt=0, lt=1)
    K: Optional[int] = Field(default=None, ge=2)
    window: Optional[int] = Field(default=None, ge=1)
    stability_tol: Optional[float] = Field(default=None, gt=0)
    extrapolate: Optional[bool] = None
    residual_depth: Optional[int] = Field(default=None, ge=2)


class ProblemSpec(_Strict):
    """Top-level problem file."""

    name: str
    description: str = ""
    space: SpaceSpec
    cone: ConeSpec
    function: Optional[FunctionSpec] = None
    vector_function: Optional[VectorFunctionSpec] = None
    scalar_functions: Dict[str, ScalarFunctionSpec] = Field(default_factory=dict)
    grids: GridSpec
    dual_refinement: Optional[int] = Field(default=None, ge=0)
    M: List[List[float]] = Field(default_factory=list)
    M_star: List[List[float]] = Field(default_factory=list)
    x0: Optional[List[float]] = None
    asserted_properties: List[AssertedProperty] = Field(default_factory=list)
    dini: Optional[DiniSpec] = None

    @model_validator(mode="after")
    def validate_function(self) -> "ProblemSpec":
        if self.function is not None and self.vector_function is not None:
            raise ValueError("give either function or vector_function, not both")
        if (self.function is None and self.vector_function is None
                and not self.scalar_functions):
            raise ValueError("a problem needs a function, a vector_function "
                             "or scalar_functions")
        for gen in self.cone.generators:
            if len(gen) != self.space.d:
                raise ValueError(f"cone generator {gen} is not of dimension "
                                 f"{self.space.d}")
        return self


# -- problem -----------------------------------------------------------------------------

@dataclass
class Problem:
    """A validated problem with its domain objects built."""

    spec: ProblemSpec
    cone: ConvexCone
    grid: SampleGrid
    f: Optional[SetFn] = None
    F: Optional[VectorFn] = None
    scalars: Dict[str, ScalarFn] = field(default_factory=dict)
    tgrid: Optional[SampleGrid] = None
    M: List[Point] = field(default_factory=list)
    Mstar: List[DualVector] = field(default_factory=list)
    x0: Optional[Point] = None
    path: Optional[Path] = None

    @property
    def name(self) -> str:
        return self.spec.name

    @property
    def asserted(self) -> List[AssertedProperty]:
        return list(self.spec.asserted_properties)

    def function(self) -> SetFn:
        """The set-valued objective; ValidationError if the file has none."""
        if self.f is None:
            raise ValidationError(f"problem {self.name!r} has no set-valued function")
        return self.f

    def scalar(self, name: str) -> ScalarFn:
        try:
            return self.scalars[name]
        except KeyError as e:
            raise ValidationError(f"problem {self.name!r} has no scalar function "
                                  f"{name!r}", {"known": sorted(self.scalars)}) from e

    def duals(self, refinement: Optional[int] = None, default: int = 1
              ) -> List[DualVector]:
        """Sample of C^-: explicit refinement, else the file's, else ``default``."""
        level = refinement
        if level is None:
            level = self.spec.dual_refinement
        if level is None:
            level = default
        return dual_cone_sample(self.cone, level)

    def dini_config(self, base: DiniConfig) -> DiniConfig:
        """``base`` with the file's overrides applied."""
        if self.spec.dini is None:
            return base
        overrides = self.spec.dini.model_dump(exclude_none=True)
        return DiniConfig(**{**base.model_dump(), **overrides})


# -- construction ----------------------------------------------------------------------------

def _expr(text: Scalar, n: int, where: str) -> Expr:
    try:
        return parse_expression(str(text), n)
    except ExpressionParseError as e:
        e.details.setdefault("field", where)
        raise


def _guard(text: str, n: int, where: str, tol: float) -> Expr:
    try:
        return parse_guard(text, n, tol)
    except ExpressionParseError as e:
        e.details.setdefault("field", where)
        raise


def _set_function(spec: FunctionSpec, n: int, cone: ConvexCone, tol: float) -> SetFn:
    pieces = []
    for i, piece in enumerate(spec.pieces):
        where = f"function.pieces.{i}"
        guard = _guard(piece.guard, n, f"{where}.guard", tol)
        vertices = tuple(tuple(_expr(v, n, f"{where}.vertices") for v in row)
                         for row in piece.vertices)
        rays = tuple(tuple(_expr(v, n, f"{where}.rays") for v in row)
                     for row in piece.rays)
        pieces.append(SetPiece(guard, PieceKind(piece.kind.upper()), vertices, rays))
    return SetFn(n, cone, pieces)


def _vector_function(spec: VectorFunctionSpec, n: int, d: int, tol: float) -> VectorFn:
    pieces = []
    for i, piece in enumerate(spec.pieces):
        where = f"vector_function.pieces.{i}"
        guard = _guard(piece.guard, n, f"{where}.guard", tol)
        if isinstance(piece.value, str):
            literal = parse_literal(piece.value)
            if literal is None or literal not in (float("inf"), float("-inf")):
                raise ProblemSchemaError("a vector value must be a list, '+inf' or "
                                         "'-inf'", field=f"{where}.value")
            pieces.append(VectorPiece(guard, None, literal))
        else:
            pieces.append(VectorPiece(guard, tuple(_expr(v, n, f"{where}.value")
                                                   for v in piece.value)))
    return VectorFn(n, d, pieces)


def _scalar_function(name: str, spec: ScalarFunctionSpec, tol: float) -> ScalarFn:
    pieces = []
    for i, piece in enumerate(spec.pieces):
        where = f"scalar_functions.{name}.pieces.{i}"
        guard = _guard(piece.guard, spec.n, f"{where}.guard", tol)
        try:
            pieces.append(scalar_piece(guard, piece.value, spec.n))
        except ExpressionParseError as e:
            e.details.setdefault("field", f"{where}.value")
            raise
    return ScalarFn(spec.n, pieces, name=name)


def _points(rows: Sequence[Sequence[float]], dim: int, where: str) -> List[Point]:
    points = []
    for row in rows:
        if len(row) != dim:
            raise ProblemSchemaError(f"{where} entries must have dimension {dim}",
                                     field=where)
        points.append(tuple(float(v) for v in row))
    return points


def build_problem(spec: ProblemSpec, path: Optional[Path] = None,
                  tolerances: Optional[Tolerances] = None) -> Problem:
    """Construct domain objects from a validated schema."""
    tol = (tolerances or Tolerances()).guard_tol
    n, d = spec.space.n, spec.space.d
    cone = ConvexCone.from_generators(spec.cone.generators, dim=d)
    cone.dual_generators()

    grid = SampleGrid.parse(spec.grids.domain)
    tgrid = SampleGrid.parse(spec.grids.t) if spec.grids.t else None

    f: Optional[SetFn] = None
    F: Optional[VectorFn] = None
    if spec.function is not None:
        f = _set_function(spec.function, n, cone, tol)
    elif spec.vector_function is not None:
        F = _vector_function(spec.vector_function, n, d, tol)
        f = vector_extension(F, cone)
    if f is not None and grid.dim != n:
        raise ProblemSchemaError(f"the domain grid must have {n} axes",
                                 path=str(path) if path else None, field="grids.domain")

    scalars = {name: _scalar_function(name, s, tol)
               for name, s in spec.scalar_functions.items()}

    Mstar = [DualVector.of(z, cone) for z in _points(spec.M_star, d, "M_star")]
    x0 = _points([spec.x0], n, "x0")[0] if spec.x0 is not None else None
    problem = Problem(spec=spec, cone=cone, grid=grid, f=f, F=F, scalars=scalars,
                      tgrid=tgrid, M=_points(spec.M, n, "M"), Mstar=Mstar, x0=x0,
                      path=path)
    logger.debug("problem built", name=spec.name, n=n, d=d, grid_points=grid.size)
    return problem


def parse_problem_data(data: Any, path: Optional[Path] = None,
                       tolerances: Optional[Tolerances] = None) -> Problem:
    """Validate a decoded JSON document and build the problem."""
    try:
        spec = ProblemSpec.model_validate(data)
    except PydanticValidationError as e:
        first = e.errors()[0]
        where = ".".join(str(part) for part in first["loc"]) or "<root>"
        raise ProblemSchemaError(
            f"{where}: {first['msg']}",
            path=str(path) if path else None,
            field=where,
            details={"errors": len(e.errors())},
        ) from e
    return build_problem(spec, path, tolerances)


def parse_problem(path: Union[str, Path],
                  tolerances: Optional[Tolerances] = None) -> Problem:
    """
    Load a problem file.

    Args:
        path: Location of the JSON problem file
        tolerances: Tolerances to use for guard comparisons

    Returns:
        The validated problem with its functions, grids and duals built

    Raises:
        ProblemFileError: If the file is missing or unreadable
        ProblemSchemaError: If the JSON is malformed or violates the schema
        ExpressionParseError: If a guard or expression does not parse
    """
    file_path = Path(path)
    try:
        text = file_path.read_text(encoding="utf-8")
    except FileNotFoundError as e:
        raise ProblemFileError(f"problem file not found: {file_path}",
                               path=str(file_path)) from e
    except OSError as e:
        raise ProblemFileError(f"cannot read problem file: {e}",
                               path=str(file_path)) from e
    return parse_problem_text(text, file_path, tolerances)


def parse_problem_text(text: str, path: Optional[Path] = None,
                       tolerances: Optional[Tolerances] = None) -> Problem:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ProblemSchemaError(f"invalid JSON: {e.msg}",
                                 path=str(path) if path else None,
                                 line=e.lineno, column=e.colno) from e
    return parse_problem_data(data, path, tolerances)
