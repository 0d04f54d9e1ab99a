"""Polyhedral conversions between generator and halfspace descriptions.

A polyhedron P = conv(V) + cone(R) in R^d is handled through its
homogenization K = cone{(v, 1), (r, 0)} in R^(d+1).  Both directions of the
conversion reduce to one routine, ``polar_generators``, which enumerates the
extreme rays and the lineality space of a cone {y | G y <= 0}.
"""

from itertools import combinations
from typing import List, Optional, Tuple

import numpy as np
from scipy.linalg import null_space
from scipy.optimize import linprog
from scipy.spatial import ConvexHull, QhullError

from ..infrastructure.logging import get_logger

logger = get_logger(__name__)

RANK_RCOND = 1e-10
DIRECTION_TOL = 1e-7
FEASIBILITY_TOL = 1e-9


def empty_rows(d: int) -> np.ndarray:
    return np.zeros((0, d))


def unit_rows(rows: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Normalize rows to unit length, dropping (near) zero rows."""
    rows = np.atleast_2d(np.asarray(rows, dtype=float))
    if rows.shape[0] == 0:
        return rows
    norms = np.linalg.norm(rows, axis=1)
    keep = norms > tol
    return rows[keep] / norms[keep, None]


def unique_directions(vectors: np.ndarray, tol: float = DIRECTION_TOL) -> np.ndarray:
    """Unit directions without repetitions, in a deterministic order."""
    units = unit_rows(vectors)
    kept: List[np.ndarray] = []
    for v in units:
        if not any(np.linalg.norm(v - w) <= tol for w in kept):
            kept.append(v)
    if not kept:
        return empty_rows(np.atleast_2d(np.asarray(vectors, dtype=float)).shape[1])
    return sort_rows(np.array(kept))


def unique_points(points: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Points without repetitions, in a deterministic order."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    kept: List[np.ndarray] = []
    for p in points:
        if not any(np.max(np.abs(p - q)) <= tol for q in kept):
            kept.append(p)
    if not kept:
        return empty_rows(points.shape[1])
    return sort_rows(np.array(kept))


def sort_rows(rows: np.ndarray) -> np.ndarray:
    """Lexicographic row order on values rounded to 9 decimals."""
    if rows.shape[0] <= 1:
        return rows
    keys = np.round(rows, 9)
    order = np.lexsort(keys.T[::-1])
    return rows[order]


def _kernel(matrix: np.ndarray, m: int) -> np.ndarray:
    if matrix.shape[0] == 0:
        return np.eye(m)
    return null_space(matrix, rcond=RANK_RCOND)


def polar_generators(rows: np.ndarray, tol: float = FEASIBILITY_TOL
                     ) -> Tuple[np.ndarray, np.ndarray]:
    """Extreme rays and a lineality basis of the cone {y | rows @ y <= 0}.

    Returns ``(rays, lineality)``; rays are unit vectors orthogonal to the
    lineality space, lineality rows form an orthonormal basis.
    """
    rows = np.atleast_2d(np.asarray(rows, dtype=float))
    m = rows.shape[1]
    G = unit_rows(rows)
    if G.shape[0] == 0:
        return empty_rows(m), np.eye(m)

    lineality = _kernel(G, m).T
    rank = m - lineality.shape[0]
    if rank == 0:
        return empty_rows(m), lineality

    found: List[np.ndarray] = []
    for subset in combinations(range(G.shape[0]), rank - 1):
        system = np.vstack([G[list(subset)], lineality]) if subset else lineality
        kernel = _kernel(system, m)
        if kernel.shape[1] != 1:
            continue
        y = kernel[:, 0]
        for candidate in (y, -y):
            if np.all(G @ candidate <= tol):
                found.append(candidate)
                break

    rays = unique_directions(np.array(found)) if found else empty_rows(m)
    return rays, lineality


def generators_to_hrep(vertices: np.ndarray, rays: np.ndarray,
                       tol: float = FEASIBILITY_TOL
                       ) -> Tuple[np.ndarray, np.ndarray]:
    """Irredundant halfspace description {z | A z <= b} of conv(V) + cone(R).

    Normals are unit vectors; an empty ``A`` means the whole space.
    """
    V = np.atleast_2d(np.asarray(vertices, dtype=float))
    d = V.shape[1]
    R = np.asarray(rays, dtype=float).reshape(-1, d)
    homogenized = np.vstack([
        np.hstack([V, np.ones((V.shape[0], 1))]),
        np.hstack([R, np.zeros((R.shape[0], 1))]),
    ])
    polar_rays, polar_lineality = polar_generators(homogenized, tol)

    normals: List[np.ndarray] = []
    offsets: List[float] = []
    for y in polar_rays:
        a, beta = y[:d], -y[d]
        n = np.linalg.norm(a)
        if n <= tol:
            continue
        normals.append(a / n)
        offsets.append(beta / n)
    for y in polar_lineality:
        a, beta = y[:d], -y[d]
        n = np.linalg.norm(a)
        if n <= tol:
            continue
        normals.extend([a / n, -a / n])
        offsets.extend([beta / n, -beta / n])

    if not normals:
        return empty_rows(d), np.zeros(0)
    A = np.array(normals)
    b = np.array(offsets)
    order = np.lexsort(np.round(np.hstack([A, b[:, None]]), 9).T[::-1])
    return A[order], b[order]


def hrep_to_generators(normals: np.ndarray, offsets: np.ndarray,
                       tol: float = FEASIBILITY_TOL
                       ) -> Optional[Tuple[np.ndarray, np.ndarray]]:
    """Vertices and rays of {z | A z <= b}; ``None`` when the set is empty."""
    A = np.atleast_2d(np.asarray(normals, dtype=float))
    b = np.asarray(offsets, dtype=float).reshape(-1)
    d = A.shape[1]
    homogenized = np.vstack([
        np.hstack([A, -b[:, None]]),
        np.hstack([np.zeros((1, d)), -np.ones((1, 1))]),
    ])
    rays, lineality = polar_generators(homogenized, tol)

    vertices: List[np.ndarray] = []
    directions: List[np.ndarray] = []
    for y in rays:
        if y[d] > tol:
            vertices.append(y[:d] / y[d])
        else:
            directions.append(y[:d])
    for y in lineality:
        directions.extend([y[:d], -y[:d]])

    if not vertices:
        return None
    R = unique_directions(np.array(directions)) if directions else empty_rows(d)
    return unique_points(np.array(vertices), tol=1e-10), R


def prefilter_points(points: np.ndarray) -> np.ndarray:
    """Drop points that are not extreme in their own convex hull."""
    points = unique_points(points)
    n, d = points.shape
    if d == 1:
        return unique_points(np.vstack([points.min(axis=0), points.max(axis=0)]))
    if n <= d + 1:
        return points
    try:
        hull = ConvexHull(points)
    except QhullError:
        logger.debug("hull prefilter skipped for degenerate point set", points=n)
        return points
    return sort_rows(points[np.sort(hull.vertices)])


def cone_is_whole_space(rays: np.ndarray, d: int) -> bool:
    """True when cone(rays) = R^d, i.e. its polar cone is {0}."""
    R = np.asarray(rays, dtype=float).reshape(-1, d)
    if R.shape[0] <= d:
        return False
    polar_rays, polar_lineality = polar_generators(R)
    return polar_rays.shape[0] == 0 and polar_lineality.shape[0] == 0


def support_values(vertices: np.ndarray, rays: np.ndarray, duals: np.ndarray,
                   tol: float = FEASIBILITY_TOL) -> np.ndarray:
    """inf{-z* . z | z in conv(V) + cone(R)} for every row z* of ``duals``."""
    Z = np.atleast_2d(np.asarray(duals, dtype=float))
    V = np.asarray(vertices, dtype=float).reshape(-1, Z.shape[1])
    R = np.asarray(rays, dtype=float).reshape(-1, Z.shape[1])
    if V.shape[0] == 0:
        return np.full(Z.shape[0], np.inf)
    values = np.min(-(V @ Z.T), axis=0)
    if R.shape[0]:
        descending = np.any(R @ Z.T > tol, axis=0)
        values = np.where(descending, -np.inf, values)
    return values


def lp_contains(point: np.ndarray, vertices: np.ndarray, rays: np.ndarray) -> bool:
    """Membership of ``point`` in conv(V) + cone(R) by a feasibility LP."""
    point = np.asarray(point, dtype=float)
    d = point.shape[0]
    V = np.asarray(vertices, dtype=float).reshape(-1, d)
    R = np.asarray(rays, dtype=float).reshape(-1, d)
    p, q = V.shape[0], R.shape[0]
    if p == 0:
        return False
    A_eq = np.vstack([
        np.hstack([V.T, R.T]),
        np.hstack([np.ones((1, p)), np.zeros((1, q))]),
    ])
    b_eq = np.concatenate([point, [1.0]])
    result = linprog(np.zeros(p + q), A_eq=A_eq, b_eq=b_eq,
                     bounds=[(0, None)] * (p + q), method="highs")
    return bool(result.status == 0)


def lp_cone_contains(direction: np.ndarray, rays: np.ndarray) -> bool:
    """Membership of ``direction`` in cone(R) by a feasibility LP."""
    direction = np.asarray(direction, dtype=float)
    d = direction.shape[0]
    R = np.asarray(rays, dtype=float).reshape(-1, d)
    if np.linalg.norm(direction) <= FEASIBILITY_TOL:
        return True
    if R.shape[0] == 0:
        return False
    result = linprog(np.zeros(R.shape[0]), A_eq=R.T, b_eq=direction,
                     bounds=[(0, None)] * R.shape[0], method="highs")
    return bool(result.status == 0)


def lp_prune(vertices: np.ndarray, rays: np.ndarray
             ) -> Tuple[np.ndarray, np.ndarray]:
    """Remove generators implied by the others (any dimension)."""
    V = unique_points(vertices)
    R = unique_directions(rays) if np.asarray(rays).size else rays
    d = V.shape[1]
    R = np.asarray(R, dtype=float).reshape(-1, d)

    keep_r = list(range(R.shape[0]))
    for i in range(R.shape[0]):
        others = R[[j for j in keep_r if j != i]]
        if lp_cone_contains(R[i], others):
            keep_r.remove(i)
    R = R[keep_r]

    keep_v = list(range(V.shape[0]))
    for i in range(V.shape[0]):
        others = V[[j for j in keep_v if j != i]]
        if others.shape[0] and lp_contains(V[i], others, R):
            keep_v.remove(i)
    return V[keep_v], R
