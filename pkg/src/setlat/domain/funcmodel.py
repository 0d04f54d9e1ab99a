"""Piecewise set-valued and scalar functions.

Functions are declarative: an ordered list of pieces, each a guard plus
generator expressions.  The first piece whose guard holds is used; outside
every guard a set-valued function is EMPTY and a scalar function is +inf.
"""

import itertools
import math
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import (Callable, Dict, List, NamedTuple, Optional, Protocol, Sequence,
                    Tuple, Union)

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from ..infrastructure.logging import get_logger
from .exceptions import (DegenerateSegmentError, DimensionError,
                         EmptyCollectionError, EvaluationError, ValidationError)
from .expressions import Expr, parse_expression
from .geometry import empty_rows, support_values
from .models import DEFAULT_TOLERANCES, Point
from .polytope import (ConvexCone, DualVector, UpperSet, check_dual, empty_set,
                       halfspace_set, lattice_inf, lattice_sup, make_upper_set,
                       whole_set)
from .xreals import NEG_INF, POS_INF, XReal, xreal

logger = get_logger(__name__)

ScalarEvaluator = Callable[[Sequence[float]], XReal]


def as_point(x: Union[Sequence[float], np.ndarray, float]) -> Point:
    return tuple(float(v) for v in np.asarray(x, dtype=float).reshape(-1))


def parse_literal(value: Union[str, float, int]) -> Optional[XReal]:
    """``'+inf'``, ``'-inf'`` or a number; ``None`` for anything else."""
    if isinstance(value, (int, float)):
        return xreal(value)
    token = str(value).strip().lower()
    if token in ("+inf", "inf", "infinity", "+infinity"):
        return POS_INF
    if token in ("-inf", "-infinity"):
        return NEG_INF
    return None


# -- sample grids -----------------------------------------------------------------

@dataclass(frozen=True)
class SampleGrid:
    """Rectangular grid given per axis by (lo, hi, step)."""

    axes: Tuple[Tuple[float, float, float], ...]

    def __post_init__(self) -> None:
        if not self.axes:
            raise ValidationError("a grid needs at least one axis")
        for lo, hi, step in self.axes:
            if not all(math.isfinite(v) for v in (lo, hi, step)):
                raise ValidationError("grid bounds must be finite")
            if step <= 0 or hi < lo:
                raise ValidationError(
                    "grid axis needs lo <= hi and a positive step",
                    {"axis": [lo, hi, step]},
                )

    @classmethod
    def parse(cls, text: str) -> "SampleGrid":
        """``lo:hi:step[,lo:hi:step...]``"""
        axes = []
        for part in str(text).split(","):
            fields = part.strip().split(":")
            if len(fields) != 3:
                raise ValidationError(f"grid axis must be lo:hi:step, got {part!r}")
            try:
                axes.append(tuple(float(f) for f in fields))
            except ValueError as e:
                raise ValidationError(f"grid axis must be numeric, got {part!r}") from e
        return cls(tuple(axes))  # type: ignore[arg-type]

    @classmethod
    def unit_interval(cls, points: int = 129) -> "SampleGrid":
        if points < 2:
            raise ValidationError("a unit-interval grid needs at least two points")
        return cls(((0.0, 1.0, 1.0 / (points - 1)),))

    @property
    def dim(self) -> int:
        return len(self.axes)

    def axis_values(self, i: int) -> np.ndarray:
        lo, hi, step = self.axes[i]
        count = int(math.floor((hi - lo) / step + 1e-9)) + 1
        return np.round(lo + step * np.arange(count), 12)

    @cached_property
    def _points(self) -> Tuple[Point, ...]:
        axes = [self.axis_values(i) for i in range(self.dim)]
        return tuple(tuple(float(v) for v in p) for p in itertools.product(*axes))

    def points(self) -> List[Point]:
        return list(self._points)

    @property
    def size(self) -> int:
        return len(self._points)

    def on_boundary(self, x: Sequence[float]) -> bool:
        for value, i in zip(x, range(self.dim)):
            axis = self.axis_values(i)
            if value <= axis[0] or value >= axis[-1]:
                return True
        return False

    def describe(self) -> str:
        return ",".join(f"{lo:g}:{hi:g}:{step:g}" for lo, hi, step in self.axes)

    def __str__(self) -> str:
        return self.describe()


# -- set-valued functions --------------------------------------------------------

class PieceKind(str, Enum):
    GENERATORS = "GENERATORS"
    WHOLE_SPACE = "WHOLE_SPACE"
    EMPTY = "EMPTY"


@dataclass(frozen=True)
class SetPiece:
    guard: Expr
    kind: PieceKind = PieceKind.GENERATORS
    vertices: Tuple[Tuple[Expr, ...], ...] = ()
    rays: Tuple[Tuple[Expr, ...], ...] = ()


class RawValue(NamedTuple):
    """Unreduced generators of f(x) and the index of the piece that produced them."""

    piece: int
    kind: PieceKind
    vertices: np.ndarray
    rays: np.ndarray


class SetValued(Protocol):
    """What the derivative and checker layers need from a set-valued function."""

    n: int
    cone: ConvexCone

    @property
    def d(self) -> int: ...

    def evaluate(self, x: Sequence[float]) -> UpperSet: ...

    def support_values(self, x: Sequence[float], duals: np.ndarray) -> np.ndarray: ...

    def in_domain(self, x: Sequence[float]) -> bool: ...


class SetFn:
    """Piecewise-analytic f: R^n -> G(R^d, C), EMPTY outside all guards."""

    def __init__(self, n: int, cone: ConvexCone, pieces: Sequence[SetPiece],
                 name: str = "f"):
        if n < 1:
            raise ValidationError("argument dimension must be positive")
        self.n = n
        self.cone = cone
        self.pieces = tuple(pieces)
        self.name = name
        for i, piece in enumerate(self.pieces):
            for generator in piece.vertices + piece.rays:
                if len(generator) != cone.dim:
                    raise DimensionError(
                        f"piece {i} has a generator of dimension {len(generator)}",
                        expected=cone.dim, actual=len(generator),
                    )
        self._raw: Dict[Point, RawValue] = {}
        self._values: Dict[Point, UpperSet] = {}

    @property
    def d(self) -> int:
        return self.cone.dim

    def _key(self, x: Sequence[float]) -> Point:
        key = as_point(x)
        if len(key) != self.n:
            raise DimensionError(f"{self.name} takes points of dimension {self.n}",
                                 expected=self.n, actual=len(key))
        return key

    def raw(self, x: Sequence[float]) -> RawValue:
        key = self._key(x)
        cached = self._raw.get(key)
        if cached is not None:
            return cached
        value = RawValue(-1, PieceKind.EMPTY, empty_rows(self.d), empty_rows(self.d))
        for i, piece in enumerate(self.pieces):
            if not piece.guard.holds(key):
                continue
            V = _generator_rows(piece.vertices, key, self.d)
            R = _generator_rows(piece.rays, key, self.d)
            value = RawValue(i, piece.kind, V, R)
            break
        self._raw[key] = value
        return value

    def piece_index(self, x: Sequence[float]) -> int:
        return self.raw(x).piece

    def in_domain(self, x: Sequence[float]) -> bool:
        raw = self.raw(x)
        if raw.kind == PieceKind.EMPTY:
            return False
        return raw.kind == PieceKind.WHOLE_SPACE or raw.vertices.shape[0] > 0

    def evaluate(self, x: Sequence[float]) -> UpperSet:
        """f(x) canonicalized into G(R^d, C)."""
        key = self._key(x)
        cached = self._values.get(key)
        if cached is not None:
            return cached
        raw = self.raw(key)
        if raw.kind == PieceKind.EMPTY:
            value = empty_set(self.cone)
        elif raw.kind == PieceKind.WHOLE_SPACE:
            value = whole_set(self.cone)
        else:
            value = make_upper_set(raw.vertices, raw.rays, self.cone)
        self._values[key] = value
        return value

    __call__ = evaluate

    def support_values(self, x: Sequence[float], duals: np.ndarray) -> np.ndarray:
        """φ_{f,z*}(x) for every row z* of ``duals``, from the raw generators."""
        raw = self.raw(x)
        Z = np.atleast_2d(duals)
        if raw.kind == PieceKind.EMPTY:
            return np.full(Z.shape[0], POS_INF)
        if raw.kind == PieceKind.WHOLE_SPACE:
            return np.full(Z.shape[0], NEG_INF)
        rays = np.vstack([raw.rays, self.cone.generators])
        return support_values(raw.vertices, rays, Z)

    def __repr__(self) -> str:
        return f"SetFn({self.name!r}, n={self.n}, d={self.d}, pieces={len(self.pieces)})"


def _generator_rows(generators: Tuple[Tuple[Expr, ...], ...], x: Point,
                    d: int) -> np.ndarray:
    if not generators:
        return empty_rows(d)
    rows = np.array([[e.evaluate(x) for e in g] for g in generators], dtype=float)
    if np.any(np.isnan(rows)):
        raise EvaluationError("generator expression produced NaN", {"point": list(x)})
    if np.any(np.isinf(rows)):
        raise EvaluationError("generator expression is not finite", {"point": list(x)})
    return rows


# -- scalar functions ---------------------------------------------------------------

@dataclass(frozen=True)
class ScalarPiece:
    guard: Expr
    value: Optional[Expr] = None
    literal: XReal = POS_INF


class ScalarFn:
    """Piecewise extended-real function, +inf outside all guards."""

    def __init__(self, n: int, pieces: Sequence[ScalarPiece], name: str = "phi",
                 default: XReal = POS_INF):
        self.n = n
        self.pieces = tuple(pieces)
        self.name = name
        self.default = default

    def __call__(self, x: Union[Sequence[float], float]) -> XReal:
        point = as_point(x)
        if len(point) != self.n:
            raise DimensionError(f"{self.name} takes points of dimension {self.n}",
                                 expected=self.n, actual=len(point))
        for piece in self.pieces:
            if piece.guard.holds(point):
                if piece.value is None:
                    return piece.literal
                return xreal(piece.value.evaluate(point))
        return self.default

    def piece_index(self, x: Union[Sequence[float], float]) -> int:
        point = as_point(x)
        for i, piece in enumerate(self.pieces):
            if piece.guard.holds(point):
                return i
        return -1

    def __repr__(self) -> str:
        return f"ScalarFn({self.name!r}, n={self.n}, pieces={len(self.pieces)})"


def scalar_piece(guard: Expr, value: Union[str, float], n: Optional[int] = None
                 ) -> ScalarPiece:
    literal = parse_literal(value)
    if literal is not None:
        return ScalarPiece(guard, None, literal)
    return ScalarPiece(guard, parse_expression(str(value), n))


# -- vector functions and extensions -------------------------------------------------

@dataclass(frozen=True)
class VectorPiece:
    guard: Expr
    value: Optional[Tuple[Expr, ...]] = None
    literal: XReal = POS_INF


class VectorFn:
    """Piecewise F: R^n -> R^d with the sentinels +inf and -inf."""

    def __init__(self, n: int, d: int, pieces: Sequence[VectorPiece], name: str = "F"):
        self.n = n
        self.d = d
        self.pieces = tuple(pieces)
        self.name = name
        for piece in self.pieces:
            if piece.value is not None and len(piece.value) != d:
                raise DimensionError("vector piece has the wrong dimension",
                                     expected=d, actual=len(piece.value))

    def __call__(self, x: Sequence[float]) -> Union[np.ndarray, XReal]:
        point = as_point(x)
        for piece in self.pieces:
            if piece.guard.holds(point):
                if piece.value is None:
                    return piece.literal
                return np.array([e.evaluate(point) for e in piece.value])
        return POS_INF


def vector_extension(F: VectorFn, cone: ConvexCone) -> SetFn:
    """x -> F(x) + C, with +inf mapped to EMPTY and -inf to WHOLE_SPACE."""
    if F.d != cone.dim:
        raise DimensionError("vector function and cone differ in dimension",
                             expected=cone.dim, actual=F.d)
    pieces = []
    for piece in F.pieces:
        if piece.value is not None:
            pieces.append(SetPiece(piece.guard, PieceKind.GENERATORS, (piece.value,)))
        elif piece.literal == NEG_INF:
            pieces.append(SetPiece(piece.guard, PieceKind.WHOLE_SPACE))
        else:
            pieces.append(SetPiece(piece.guard, PieceKind.EMPTY))
    return SetFn(F.n, cone, pieces, name=F.name)


def scalar_extension(phi: ScalarFn) -> SetFn:
    """The G(R, R_+)-valued extension: r -> [r, +inf), -inf -> R, +inf -> EMPTY."""
    pieces = []
    for piece in phi.pieces:
        if piece.value is not None:
            pieces.append(SetPiece(piece.guard, PieceKind.GENERATORS, ((piece.value,),)))
        elif piece.literal == NEG_INF:
            pieces.append(SetPiece(piece.guard, PieceKind.WHOLE_SPACE))
        elif piece.literal == POS_INF:
            pieces.append(SetPiece(piece.guard, PieceKind.EMPTY))
        else:
            constant = parse_expression(repr(piece.literal))
            pieces.append(SetPiece(piece.guard, PieceKind.GENERATORS, ((constant,),)))
    return SetFn(phi.n, ConvexCone.orthant(1), pieces, name=phi.name)


# -- scalarizations ------------------------------------------------------------------

class Scalarization:
    """x -> φ_{f,z*}(x) = inf{-z* . z | z in f(x)}."""

    def __init__(self, f: SetValued, zstar: DualVector):
        check_dual(zstar, f.cone)
        self.f = f
        self.zstar = zstar
        self._row = zstar.vector[None, :]

    def __call__(self, x: Sequence[float]) -> XReal:
        return float(self.f.support_values(x, self._row)[0])


def scalarize(f: SetValued, zstar: DualVector) -> Scalarization:
    return Scalarization(f, zstar)


class SupportBank:
    """All sampled scalarizations of f, one function evaluation per point."""

    def __init__(self, f: SetValued, duals: Sequence[DualVector]):
        if not duals:
            raise EmptyCollectionError("a dual sample must not be empty")
        for zstar in duals:
            check_dual(zstar, f.cone)
        self.f = f
        self.duals = list(duals)
        self.matrix = np.array([z.vector for z in duals])
        self._cache: Dict[Point, np.ndarray] = {}

    def values(self, x: Sequence[float]) -> np.ndarray:
        key = as_point(x)
        cached = self._cache.get(key)
        if cached is None:
            cached = self.f.support_values(key, self.matrix)
            self._cache[key] = cached
        return cached

    def value(self, x: Sequence[float], i: int) -> XReal:
        return float(self.values(x)[i])

    def evaluator(self, i: int) -> ScalarEvaluator:
        return lambda x: self.value(x, i)


def reconstruct(f: SetValued, x: Sequence[float],
                duals: Sequence[DualVector]) -> UpperSet:
    """⋂ over z* of {z | φ_{f,z*}(x) <= -z* . z}."""
    if not duals:
        raise EmptyCollectionError("reconstruction needs at least one dual vector")
    values = f.support_values(x, np.array([z.vector for z in duals]))
    if np.any(values == POS_INF):
        return empty_set(f.cone)
    halfspaces = [halfspace_set(z, float(v)) for z, v in zip(duals, values)]
    return lattice_sup(halfspaces, duals=duals, cone=f.cone)


# -- segments --------------------------------------------------------------------------

class SegmentFn:
    """φ_{a,b}(t) = φ(a + t(b - a)) on [0, 1], +inf elsewhere."""

    def __init__(self, phi: ScalarEvaluator, a: Sequence[float], b: Sequence[float]):
        self.phi = phi
        self.a = np.asarray(a, dtype=float).reshape(-1)
        self.b = np.asarray(b, dtype=float).reshape(-1)
        if self.a.shape != self.b.shape:
            raise DimensionError("segment end points differ in dimension",
                                 expected=self.a.shape[0], actual=self.b.shape[0])
        if np.linalg.norm(self.b - self.a) <= DEFAULT_TOLERANCES.tau:
            raise DegenerateSegmentError(details={"a": self.a.tolist()})

    def point(self, t: float) -> Point:
        return as_point(self.a + t * (self.b - self.a))

    def __call__(self, t: Union[float, Sequence[float]]) -> XReal:
        s = float(np.asarray(t, dtype=float).reshape(-1)[0])
        if s < 0.0 or s > 1.0:
            return POS_INF
        return self.phi(self.point(s))


def restrict_segment(phi: ScalarEvaluator, a: Sequence[float],
                     b: Sequence[float]) -> SegmentFn:
    return SegmentFn(phi, a, b)


# -- inf-translations ----------------------------------------------------------------

class InfTranslation:
    """f̂(x; M) = inf over m in M of f(m + x), for a finite M."""

    def __init__(self, f: SetValued, M: Sequence[Sequence[float]]):
        points = [as_point(m) for m in M]
        if not points:
            raise EmptyCollectionError("inf-translation needs a nonempty M")
        for m in points:
            if len(m) != f.n:
                raise DimensionError("point of M has the wrong dimension",
                                     expected=f.n, actual=len(m))
        outside = [m for m in points if not f.in_domain(m)]
        if outside:
            logger.warning("points of M outside dom f", count=len(outside),
                           first=list(outside[0]))
        self.f = f
        self.M = points
        self.n = f.n
        self.cone = f.cone

    @property
    def d(self) -> int:
        return self.cone.dim

    def candidates(self, x: Sequence[float]) -> List[Point]:
        y = np.asarray(as_point(x))
        return [as_point(np.asarray(m) + y) for m in self.M]

    def evaluate(self, x: Sequence[float]) -> UpperSet:
        return lattice_inf([self.f.evaluate(c) for c in self.candidates(x)])

    __call__ = evaluate

    def support_values(self, x: Sequence[float], duals: np.ndarray) -> np.ndarray:
        stacked = np.vstack([self.f.support_values(c, duals)
                             for c in self.candidates(x)])
        return stacked.min(axis=0)

    def in_domain(self, x: Sequence[float]) -> bool:
        return any(self.f.in_domain(c) for c in self.candidates(x))


class HullTranslation(InfTranslation):
    """f̂(x; co M) realized on the vertices, edges and interior of co M.

    Edges are sampled at fixed fractions and bisected to every change of
    domain membership or active piece, so kinks and domain boundaries of
    f along co M + x are hit to machine precision.
    """

    MAX_BISECTIONS = 64

    def __init__(self, f: SetValued, M: Sequence[Sequence[float]],
                 edge_samples: int = 9):
        super().__init__(f, M)
        if edge_samples < 2:
            raise ValidationError("edge_samples must be at least 2")
        self.edge_samples = edge_samples
        self.vertices, self.edges, self.interior = hull_structure(self.M)

    def _key(self, point: Point) -> Tuple[bool, int]:
        piece = getattr(self.f, "piece_index", None)
        return (self.f.in_domain(point), piece(point) if piece else 0)

    def candidates(self, x: Sequence[float]) -> List[Point]:
        y = np.asarray(as_point(x))
        found = [as_point(v + y) for v in self.vertices]
        found += [as_point(p + y) for p in self.interior]
        fractions = np.linspace(0.0, 1.0, self.edge_samples)
        for p, q in self.edges:
            start = p + y
            step = q - p
            points = [as_point(start + s * step) for s in fractions]
            keys = [self._key(pt) for pt in points]
            found += points[1:-1]
            for i in range(len(points) - 1):
                if keys[i] != keys[i + 1]:
                    found += self._bisect(start, step, fractions[i], fractions[i + 1],
                                          keys[i])
        return found

    def _bisect(self, start: np.ndarray, step: np.ndarray, lo: float, hi: float,
                key_lo: Tuple[bool, int]) -> List[Point]:
        for _ in range(self.MAX_BISECTIONS):
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi:
                break
            if self._key(as_point(start + mid * step)) == key_lo:
                lo = mid
            else:
                hi = mid
        return [as_point(start + lo * step), as_point(start + hi * step)]


def hull_structure(points: Sequence[Point]
                   ) -> Tuple[List[np.ndarray], List[Tuple[np.ndarray, np.ndarray]],
                              List[np.ndarray]]:
    """Vertices, edges and a few interior points of co(points)."""
    P = np.unique(np.array(points, dtype=float), axis=0)
    if P.shape[0] == 1:
        return [P[0]], [], []
    centered = P - P.mean(axis=0)
    _, singular, vh = np.linalg.svd(centered, full_matrices=False)
    rank = int(np.sum(singular > 1e-9 * max(1.0, singular[0])))
    if rank == 1:
        direction = vh[0]
        proj = centered @ direction
        a, b = P[int(np.argmin(proj))], P[int(np.argmax(proj))]
        return [a, b], [(a, b)], []

    if rank == P.shape[1]:
        try:
            hull = ConvexHull(P)
            vertices = [P[i] for i in hull.vertices]
            edge_ids = set()
            for simplex in hull.simplices:
                for i, j in itertools.combinations(sorted(simplex), 2):
                    edge_ids.add((i, j))
            edges = [(P[i], P[j]) for i, j in sorted(edge_ids)]
        except QhullError:
            logger.debug("hull of M is degenerate; using all pairs", points=len(P))
            vertices = list(P)
            edges = [(P[i], P[j]) for i, j in itertools.combinations(range(len(P)), 2)]
    else:
        vertices = list(P)
        edges = [(P[i], P[j]) for i, j in itertools.combinations(range(len(P)), 2)]

    centroid = np.mean(vertices, axis=0)
    interior = [centroid] + [0.5 * (centroid + v) for v in vertices]
    return vertices, edges, interior


def inf_translate(f: SetValued, M: Sequence[Sequence[float]]) -> InfTranslation:
    """Inf-translation of f by the finite set M."""
    return InfTranslation(f, M)


def inf_translate_hull(f: SetValued, M: Sequence[Sequence[float]],
                       edge_samples: int = 9) -> HullTranslation:
    """Inf-translation of f by co M."""
    return HullTranslation(f, M, edge_samples)
