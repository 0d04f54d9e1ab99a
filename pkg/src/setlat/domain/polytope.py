"""Closed convex upper sets G(R^d, C) and their lattice calculus.

An ``UpperSet`` is generator-first: vertices plus recession rays, with the
ordering cone C always part of the recession cone.  The halfspace
description is derived on demand and cached.  EMPTY and WHOLE_SPACE are
explicit tags.

Ordering is by inclusion reversed: A is "below" B when A contains B, so the
lattice infimum is the closed convex hull of the union and the supremum is
the intersection.
"""

from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator

from .exceptions import (
    DimensionError,
    DualVectorError,
    EmptyCollectionError,
    TrivialDualError,
    UnsupportedDimensionError,
    ValidationError,
)
from .geometry import (
    cone_is_whole_space,
    empty_rows,
    generators_to_hrep,
    hrep_to_generators,
    lp_cone_contains,
    lp_contains,
    lp_prune,
    polar_generators,
    prefilter_points,
    support_values,
    unique_directions,
    unique_points,
    unit_rows,
)
from .models import DEFAULT_TOLERANCES
from .xreals import NEG_INF, POS_INF, XReal, inf_residual

EXACT_MAX_DIM = 3
TAU = DEFAULT_TOLERANCES.tau
TAU_H = DEFAULT_TOLERANCES.tau_h

ArrayLike = Union[np.ndarray, Sequence[Sequence[float]], Sequence[float]]


def as_rows(values: ArrayLike, d: int) -> np.ndarray:
    """Coerce a point or direction collection into a (k, d) float array."""
    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        return empty_rows(d)
    arr = np.atleast_2d(arr)
    if arr.shape[1] != d:
        raise DimensionError(
            f"expected vectors of dimension {d}, got {arr.shape[1]}",
            expected=d, actual=arr.shape[1],
        )
    return arr


@dataclass(frozen=True, eq=False)
class ConvexCone:
    """Closed convex cone cl co cone(generators) in R^dim."""

    generators: np.ndarray
    dim: int

    @classmethod
    def from_generators(cls, generators: ArrayLike,
                        dim: Optional[int] = None) -> "ConvexCone":
        arr = np.asarray(generators, dtype=float)
        if arr.size == 0:
            if dim is None:
                raise ValidationError("dimension required for the zero cone")
            return cls(empty_rows(dim), dim)
        arr = np.atleast_2d(arr)
        if dim is not None and arr.shape[1] != dim:
            raise DimensionError("cone generator dimension mismatch",
                                 expected=dim, actual=arr.shape[1])
        if np.any(np.linalg.norm(arr, axis=1) <= TAU):
            raise ValidationError("cone generators must be nonzero")
        return cls(unique_directions(arr), arr.shape[1])

    @classmethod
    def orthant(cls, d: int) -> "ConvexCone":
        """The nonnegative orthant R^d_+."""
        return cls.from_generators(np.eye(d))

    @classmethod
    def halfspace(cls, zstar: "ArrayLike | DualVector") -> "ConvexCone":
        """H(z*) = {z | z* . z <= 0}."""
        z = zstar.vector if isinstance(zstar, DualVector) else np.asarray(zstar, float)
        z = z / np.linalg.norm(z)
        basis = _orthogonal_basis(z)
        gens = [-z] + [s * b for b in basis for s in (1.0, -1.0)]
        return cls.from_generators(np.array(gens))

    @cached_property
    def polar(self) -> Tuple[np.ndarray, np.ndarray]:
        """Extreme rays and lineality basis of the dual cone C^-."""
        if self.generators.shape[0] == 0:
            return empty_rows(self.dim), np.eye(self.dim)
        return polar_generators(self.generators)

    def dual_generators(self) -> np.ndarray:
        """Unit generators of C^- (lineality directions contribute both signs)."""
        rays, lineality = self.polar
        gens = [rays] + [lineality, -lineality]
        stacked = np.vstack(gens)
        if stacked.shape[0] == 0:
            raise TrivialDualError(details={"dim": self.dim})
        return unique_directions(stacked)

    def contains_dual(self, coeffs: np.ndarray, tol: float = TAU) -> bool:
        """z* in C^-: z* . g <= tol for every generator g."""
        if self.generators.shape[0] == 0:
            return True
        return bool(np.all(self.generators @ np.asarray(coeffs, float) <= tol))

    def contains(self, direction: np.ndarray, tol: float = TAU) -> bool:
        """Membership of a direction in the cone."""
        r = np.asarray(direction, dtype=float)
        if self.dim > EXACT_MAX_DIM:
            return lp_cone_contains(r, self.generators)
        rays, lineality = self.polar
        scale = max(1.0, float(np.linalg.norm(r)))
        if rays.shape[0] and np.any(rays @ r > tol * scale):
            return False
        return not (lineality.shape[0] and np.any(np.abs(lineality @ r) > tol * scale))

    def same_as(self, other: "ConvexCone", tol: float = TAU) -> bool:
        if self is other:
            return True
        if self.dim != other.dim:
            return False
        if (self.generators.shape == other.generators.shape
                and np.allclose(self.generators, other.generators, atol=tol)):
            return True
        return (all(other.contains(g, tol) for g in self.generators)
                and all(self.contains(g, tol) for g in other.generators))

    def to_dict(self) -> dict:
        return {"dim": self.dim, "generators": self.generators.tolist()}


def _orthogonal_basis(z: np.ndarray) -> List[np.ndarray]:
    from scipy.linalg import null_space

    return list(null_space(z[None, :]).T)


class DualVector(BaseModel):
    """A unit functional z* in C^- with its halfspace H(z*).

    Coefficients are rescaled to Euclidean length one on construction, so
    every quantity linear in z* is reported for the unit vector. For example
    DualVector(coeffs=(-1, -3)) stores (-1, -3) / sqrt(10), and its
    scalarization and Dini values are those of the raw functional divided
    by sqrt(10).
    """

    model_config = ConfigDict(frozen=True)

    coeffs: Tuple[float, ...]

    @field_validator("coeffs")
    @classmethod
    def normalize(cls, v: Tuple[float, ...]) -> Tuple[float, ...]:
        arr = np.asarray(v, dtype=float)
        n = float(np.linalg.norm(arr))
        if not np.isfinite(n) or n <= TAU:
            raise ValueError("dual vector must be finite and nonzero")
        return tuple(float(c) for c in arr / n)

    @classmethod
    def of(cls, coeffs: ArrayLike, cone: Optional[ConvexCone] = None,
           tol: float = TAU) -> "DualVector":
        """Validated construction; raises DualVectorError outside C^-."""
        arr = np.asarray(coeffs, dtype=float).reshape(-1)
        try:
            dual = cls(coeffs=tuple(arr.tolist()))
        except ValueError as e:
            raise DualVectorError("dual vector must be finite and nonzero",
                                  {"coeffs": arr.tolist()}) from e
        if cone is not None:
            if cone.dim != dual.dim:
                raise DimensionError("dual vector dimension mismatch",
                                     expected=cone.dim, actual=dual.dim)
            if not cone.contains_dual(dual.vector, tol):
                raise DualVectorError("dual vector is not in the dual cone",
                                      {"coeffs": list(dual.coeffs)})
        return dual

    @property
    def vector(self) -> np.ndarray:
        return np.asarray(self.coeffs, dtype=float)

    @property
    def dim(self) -> int:
        return len(self.coeffs)

    def __str__(self) -> str:
        return "(" + ", ".join(f"{c:.6g}" for c in self.coeffs) + ")"


class SetTag(str, Enum):
    EMPTY = "EMPTY"
    WHOLE_SPACE = "WHOLE_SPACE"
    PROPER = "PROPER"


class HalfspaceRep(NamedTuple):
    """{z | normals @ z <= offsets}; unit normals in C^-."""

    normals: np.ndarray
    offsets: np.ndarray


@dataclass(frozen=True, eq=False)
class UpperSet:
    """An element of G(R^d, C).

    For PROPER sets the value is cl co(vertices + cone(rays ∪ C)).
    """

    tag: SetTag
    cone: ConvexCone
    vertices: np.ndarray
    rays: np.ndarray
    seed_hrep: Optional[HalfspaceRep] = field(default=None, repr=False)

    @property
    def dim(self) -> int:
        return self.cone.dim

    @property
    def is_empty(self) -> bool:
        return self.tag == SetTag.EMPTY

    @property
    def is_whole(self) -> bool:
        return self.tag == SetTag.WHOLE_SPACE

    @property
    def is_proper(self) -> bool:
        return self.tag == SetTag.PROPER

    @cached_property
    def all_rays(self) -> np.ndarray:
        """Recession directions including the cone generators."""
        if self.cone.generators.shape[0] == 0:
            return self.rays
        return np.vstack([self.rays, self.cone.generators])

    @cached_property
    def hrep(self) -> HalfspaceRep:
        """Halfspace description, computed once (exact for d <= 3)."""
        if self.seed_hrep is not None:
            return self.seed_hrep
        if self.tag == SetTag.EMPTY:
            raise ValidationError("the empty set has no halfspace description")
        if self.tag == SetTag.WHOLE_SPACE:
            return HalfspaceRep(empty_rows(self.dim), np.zeros(0))
        if self.dim > EXACT_MAX_DIM:
            raise UnsupportedDimensionError(
                "exact halfspace description needs d <= 3; supply a dual sample",
                expected=EXACT_MAX_DIM, actual=self.dim,
            )
        return HalfspaceRep(*generators_to_hrep(self.vertices, self.all_rays))

    def contains(self, point: ArrayLike, tol: float = TAU) -> bool:
        return contains_point(self, point, tol)

    def to_dict(self) -> dict:
        data: dict = {"tag": self.tag.value}
        if self.is_proper:
            data["vertices"] = self.vertices.tolist()
            data["rays"] = self.rays.tolist()
        return data

    def __str__(self) -> str:
        if not self.is_proper:
            return self.tag.value
        verts = "; ".join(", ".join(f"{c:.6g}" for c in v) for v in self.vertices)
        return f"co{{{verts}}} + recession({self.rays.shape[0]} rays)"


# -- constructors --------------------------------------------------------------

def empty_set(cone: ConvexCone) -> UpperSet:
    return UpperSet(SetTag.EMPTY, cone, empty_rows(cone.dim), empty_rows(cone.dim))


def whole_set(cone: ConvexCone) -> UpperSet:
    return UpperSet(SetTag.WHOLE_SPACE, cone, empty_rows(cone.dim),
                    empty_rows(cone.dim))


def translate(point: ArrayLike, cone: ConvexCone) -> UpperSet:
    """z + C."""
    return make_upper_set(as_rows(point, cone.dim), empty_rows(cone.dim), cone)


def cone_set(cone: ConvexCone) -> UpperSet:
    """C itself, the neutral element of ⊕."""
    return translate(np.zeros(cone.dim), cone)


def halfspace_set(zstar: "DualVector", value: XReal) -> UpperSet:
    """L_{z*}(value) = {z | value <= -z* . z} as an element of G(R^d, H(z*))."""
    cone = ConvexCone.halfspace(zstar)
    if value == NEG_INF:
        return whole_set(cone)
    if value == POS_INF:
        return empty_set(cone)
    z = zstar.vector
    vertex = (-value * z)[None, :]
    return UpperSet(
        SetTag.PROPER, cone, vertex, cone.generators.copy(),
        HalfspaceRep(z[None, :], np.array([-value])),
    )


def make_upper_set(points: ArrayLike, rays: ArrayLike, cone: ConvexCone,
                   canonical: bool = True) -> UpperSet:
    """cl co(points + cone(rays ∪ C)), canonicalized.

    EMPTY iff ``points`` is empty; WHOLE_SPACE when the recession directions
    span the space.  With ``canonical=False`` the generators are kept as
    given, which is enough for support values.
    """
    d = cone.dim
    P = as_rows(points, d)
    R = as_rows(rays, d)
    if P.shape[0] == 0:
        return empty_set(cone)
    R = unit_rows(R)
    if not canonical:
        return UpperSet(SetTag.PROPER, cone, P, R)

    all_rays = np.vstack([R, cone.generators])
    if d > EXACT_MAX_DIM:
        if cone_is_whole_space(all_rays, d):
            return whole_set(cone)
        V, R_pruned = lp_prune(P, R)
        return UpperSet(SetTag.PROPER, cone, V, R_pruned)

    P = prefilter_points(P)
    normals, offsets = generators_to_hrep(P, all_rays)
    if normals.shape[0] == 0:
        return whole_set(cone)
    generators = hrep_to_generators(normals, offsets)
    if generators is None:
        # cannot happen for a nonempty generator set; keep the raw form
        return UpperSet(SetTag.PROPER, cone, unique_points(P), unique_directions(R))
    V, R_canonical = generators
    return UpperSet(SetTag.PROPER, cone, V, R_canonical,
                    HalfspaceRep(normals, offsets))


def _from_hrep(normals: np.ndarray, offsets: np.ndarray,
               cone: ConvexCone) -> UpperSet:
    if normals.shape[0] == 0:
        return whole_set(cone)
    generators = hrep_to_generators(normals, offsets)
    if generators is None:
        return empty_set(cone)
    V, R = generators
    return UpperSet(SetTag.PROPER, cone, V, R, HalfspaceRep(normals, offsets))


# -- checks ----------------------------------------------------------------------

def _check_compatible(A: UpperSet, B: UpperSet) -> None:
    if A.dim != B.dim:
        raise DimensionError("upper sets live in different spaces",
                             expected=A.dim, actual=B.dim)
    if not A.cone.same_as(B.cone):
        raise ValidationError("upper sets are ordered by different cones")


def check_dual(zstar: DualVector, cone: ConvexCone) -> None:
    if zstar.dim != cone.dim:
        raise DimensionError("dual vector dimension mismatch",
                             expected=cone.dim, actual=zstar.dim)
    if not cone.contains_dual(zstar.vector):
        raise DualVectorError("dual vector is not in the dual cone",
                              {"coeffs": list(zstar.coeffs)})


# -- conlinear operations --------------------------------------------------------

def oplus(A: UpperSet, B: UpperSet) -> UpperSet:
    """A ⊕ B = cl(A + B); the empty set absorbs."""
    _check_compatible(A, B)
    if A.is_empty or B.is_empty:
        return empty_set(A.cone)
    if A.is_whole or B.is_whole:
        return whole_set(A.cone)
    sums = (A.vertices[:, None, :] + B.vertices[None, :, :]).reshape(-1, A.dim)
    return make_upper_set(sums, np.vstack([A.rays, B.rays]), A.cone)


def scale(A: UpperSet, t: float) -> UpperSet:
    """t · A for t > 0, and 0 · A = C."""
    if t < 0:
        raise ValidationError("scaling factor must be nonnegative", {"t": t})
    if t == 0:
        return cone_set(A.cone)
    if not A.is_proper:
        return A
    seed = None
    if "hrep" in A.__dict__ or A.seed_hrep is not None:
        normals, offsets = A.hrep
        seed = HalfspaceRep(normals, offsets * t)
    return UpperSet(SetTag.PROPER, A.cone, A.vertices * t, A.rays, seed)


# -- lattice operations ---------------------------------------------------------

def lattice_inf(sets: Sequence[UpperSet]) -> UpperSet:
    """cl co of the union."""
    if not sets:
        raise EmptyCollectionError("lattice infimum of an empty collection")
    first = sets[0]
    for other in sets[1:]:
        _check_compatible(first, other)
    if any(s.is_whole for s in sets):
        return whole_set(first.cone)
    proper = [s for s in sets if s.is_proper]
    if not proper:
        return empty_set(first.cone)
    if len(proper) == 1:
        return proper[0]
    return make_upper_set(
        np.vstack([s.vertices for s in proper]),
        np.vstack([s.rays for s in proper]),
        first.cone,
    )


def outer_hrep(A: UpperSet, duals: Sequence[DualVector]) -> HalfspaceRep:
    """{z | z* . z <= -φ_A(z*)} over a dual sample (outer approximation)."""
    Z = np.array([z.vector for z in duals])
    values = support_values(A.vertices, A.all_rays, Z)
    keep = np.isfinite(values)
    return HalfspaceRep(Z[keep], -values[keep])


def _hrep_for(A: UpperSet, duals: Optional[Sequence[DualVector]]) -> HalfspaceRep:
    if A.dim > EXACT_MAX_DIM and A.seed_hrep is None:
        if not duals:
            raise UnsupportedDimensionError(
                "dimension above 3 requires a dual sample",
                expected=EXACT_MAX_DIM, actual=A.dim,
            )
        return outer_hrep(A, duals)
    return A.hrep


def lattice_sup(sets: Sequence[UpperSet],
                duals: Optional[Sequence[DualVector]] = None,
                cone: Optional[ConvexCone] = None) -> UpperSet:
    """Intersection via pooled halfspace descriptions.

    ``cone`` names the ordering cone of the result when the operands are
    ordered by different cones (for example halfspaces H(z*)).
    """
    if not sets:
        raise EmptyCollectionError("lattice supremum of an empty collection")
    first = sets[0]
    if cone is None:
        for other in sets[1:]:
            _check_compatible(first, other)
        cone = first.cone
    elif any(s.dim != cone.dim for s in sets):
        raise DimensionError("upper sets live in different spaces",
                             expected=cone.dim)

    if any(s.is_empty for s in sets):
        return empty_set(cone)
    proper = [s for s in sets if s.is_proper]
    if not proper:
        return whole_set(cone)
    if len(proper) == 1 and proper[0].cone is cone:
        return proper[0]

    reps = [_hrep_for(s, duals) for s in proper]
    normals = np.vstack([r.normals for r in reps])
    offsets = np.concatenate([r.offsets for r in reps])
    return _from_hrep(normals, offsets, cone)


def is_subset(A: UpperSet, B: UpperSet, tol: float = TAU) -> bool:
    """A ⊆ B: vertices of A in B and rays of A in the recession cone of B."""
    if A.dim != B.dim:
        raise DimensionError("upper sets live in different spaces",
                             expected=A.dim, actual=B.dim)
    if A.is_empty or B.is_whole:
        return True
    if B.is_empty or A.is_whole:
        return False

    if B.dim > EXACT_MAX_DIM and B.seed_hrep is None:
        return (all(lp_contains(v, B.vertices, B.all_rays) for v in A.vertices)
                and all(lp_cone_contains(r, B.all_rays) for r in A.all_rays))

    normals, offsets = B.hrep
    if normals.shape[0] == 0:
        return True
    scale_b = 1.0 + np.abs(offsets)
    if np.any(A.vertices @ normals.T > (offsets + tol * scale_b)[None, :]):
        return False
    rays = A.all_rays
    return not (rays.shape[0] and np.any(rays @ normals.T > tol))


def set_equal(A: UpperSet, B: UpperSet, tol: float = TAU_H) -> bool:
    """Mutual inclusion within ``tol``."""
    if A.tag != B.tag:
        return False
    if not A.is_proper:
        return True
    return is_subset(A, B, tol) and is_subset(B, A, tol)


def contains_point(A: UpperSet, point: ArrayLike, tol: float = TAU) -> bool:
    z = as_rows(point, A.dim)[0]
    if A.is_empty:
        return False
    if A.is_whole:
        return True
    if A.dim > EXACT_MAX_DIM and A.seed_hrep is None:
        return lp_contains(z, A.vertices, A.all_rays)
    normals, offsets = A.hrep
    return bool(np.all(normals @ z <= offsets + tol * (1.0 + np.abs(offsets))))


# -- scalarization and residuals -----------------------------------------------

def support_scalar(A: UpperSet, zstar: DualVector, tol: float = TAU) -> XReal:
    """φ_A(z*) = inf{-z* . z | z in A}."""
    check_dual(zstar, A.cone)
    if A.is_empty:
        return POS_INF
    if A.is_whole:
        return NEG_INF
    return float(support_values(A.vertices, A.all_rays, zstar.vector[None, :],
                                tol)[0])


def inf_residual_set(A: UpperSet, B: UpperSet,
                     duals: Optional[Sequence[DualVector]] = None) -> UpperSet:
    """A ∸ B = {z | B + z ⊆ A}."""
    _check_compatible(A, B)
    if B.is_empty or A.is_whole:
        return whole_set(A.cone)
    if A.is_empty or B.is_whole:
        return empty_set(A.cone)

    normals, offsets = _hrep_for(A, duals)
    # sup_{b in B} a . b for every constraint normal a
    sigma = -support_values(B.vertices, B.all_rays, normals)
    if np.any(np.isinf(sigma)):
        return empty_set(A.cone)
    return _from_hrep(normals, offsets - sigma, A.cone)


def zstar_residual(A: UpperSet, B: UpperSet, zstar: DualVector) -> UpperSet:
    """(A ⊕ H(z*)) ∸ B, a halfspace over the cone H(z*)."""
    _check_compatible(A, B)
    value = inf_residual(support_scalar(A, zstar), support_scalar(B, zstar))
    return halfspace_set(zstar, value)


def dual_cone_sample(cone: ConvexCone, refinement: int = 0) -> List[DualVector]:
    """Extreme directions of C^- plus ``refinement`` levels of midpoints."""
    if refinement < 0:
        raise ValidationError("refinement must be nonnegative")
    current = cone.dual_generators()
    for _ in range(refinement):
        ordered = _angular_order(current) if cone.dim == 2 else current
        if cone.dim == 2:
            pairs = [(ordered[i], ordered[(i + 1) % len(ordered)])
                     for i in range(len(ordered))] if len(ordered) > 1 else []
        else:
            pairs = [(ordered[i], ordered[j]) for i in range(len(ordered))
                     for j in range(i + 1, len(ordered))]
        mids = []
        for u, v in pairs:
            w = u + v
            n = np.linalg.norm(w)
            if n <= TAU:
                continue
            w = w / n
            if cone.contains_dual(w):
                mids.append(w)
        if mids:
            current = unique_directions(np.vstack([current] + mids))
    ordered = _angular_order(current) if cone.dim == 2 else current
    return [DualVector.of(z) for z in ordered]


def _angular_order(vectors: np.ndarray) -> np.ndarray:
    angles = np.mod(np.arctan2(vectors[:, 1], vectors[:, 0]), 2 * np.pi)
    angles = np.round(angles, 12)
    return vectors[np.argsort(angles, kind="stable")]
