"""Generalized convexity of extended real-valued functions along segments.

Every property is decided at grid resolution on the segment parameter
t in [0, 1]; verdicts name the grid they covered and failures carry a
counterexample that re-evaluates to the same violation.
"""

from typing import Any, Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from ..infrastructure.logging import get_logger
from .dini import scalar_dini
from .exceptions import ValidationError, WitnessNotFoundError
from .funcmodel import (SampleGrid, ScalarEvaluator, SegmentFn, SetValued, as_point,
                        restrict_segment)
from .models import (DEFAULT_DINI, DEFAULT_TOLERANCES, ConvexityProperty,
                     ConvexityVerdict, DiniConfig, SegmentProfile, SegmentShape,
                     Tolerances)
from .polytope import is_subset, lattice_sup
from .xreals import NEG_INF, POS_INF, XReal, inf_residual, is_finite, xscale

logger = get_logger(__name__)

MIN_SEGMENT_POINTS = 33
LSC_APPROACH = 33
LSC_WINDOW = 6
LSC_RADIUS = 1e-2
LSC_STEP = 1e-4
LSC_LATTICE = int(round(LSC_RADIUS / LSC_STEP))
LSC_BISECTIONS = 64
LSC_DIGITS = 8
LSC_SNAP = 1e-11
MONOTONE_FACTORS = (1.0, 2.0, 4.0, 8.0)


# -- comparisons with ties ----------------------------------------------------------

def _lt(a: XReal, b: XReal, tol: float) -> bool:
    if is_finite(a) and is_finite(b):
        return a < b - tol
    return a < b


def _le(a: XReal, b: XReal, tol: float) -> bool:
    if is_finite(a) and is_finite(b):
        return a <= b + tol
    return a <= b


def _eq(a: XReal, b: XReal, tol: float) -> bool:
    if is_finite(a) and is_finite(b):
        return abs(a - b) <= tol
    return a == b


# -- grids ----------------------------------------------------------------------------

def _segment_grid(grid: Optional[SampleGrid], minimum: int = 2) -> np.ndarray:
    grid = grid or SampleGrid.unit_interval()
    if grid.dim != 1:
        raise ValidationError("a segment grid must be one-dimensional")
    ts = grid.axis_values(0)
    if ts[0] < 0 or ts[-1] > 1:
        raise ValidationError("a segment grid must lie in [0, 1]",
                              {"grid": grid.describe()})
    if ts.size < minimum:
        raise ValidationError(
            f"segment grid needs at least {minimum} points",
            {"points": int(ts.size)},
        )
    return ts


def _interior(grid: Optional[SampleGrid]) -> List[float]:
    ts = _segment_grid(grid or SampleGrid.unit_interval(MIN_SEGMENT_POINTS))
    return [float(t) for t in ts if 0.0 < t < 1.0]


def _describe(grid: Optional[SampleGrid]) -> str:
    return (grid or SampleGrid.unit_interval()).describe()


def segment_values(phi_ab: ScalarEvaluator, grid: Optional[SampleGrid] = None
                   ) -> Tuple[np.ndarray, List[XReal]]:
    ts = _segment_grid(grid)
    return ts, [phi_ab((float(t),)) for t in ts]


# -- segment shape --------------------------------------------------------------------

def classify_segment(phi_ab: ScalarEvaluator, grid: Optional[SampleGrid] = None,
                     tol: float = DEFAULT_TOLERANCES.tau_strict) -> SegmentProfile:
    """Decrease / constant / increase split of φ_{a,b} on [0, 1]."""
    ts = _segment_grid(grid, MIN_SEGMENT_POINTS)
    vs = [phi_ab((float(t),)) for t in ts]
    n = len(vs)
    low = min(vs)
    at_min = [i for i, v in enumerate(vs) if _eq(v, low, tol)]
    first, last = at_min[0], at_min[-1]

    decreasing = all(_lt(vs[i + 1], vs[i], tol) for i in range(first))
    flat = all(_eq(vs[i], low, tol) for i in range(first, last + 1))
    increasing = all(_lt(vs[i], vs[i + 1], tol) for i in range(last, n - 1))

    if not (decreasing and flat and increasing):
        shape = SegmentShape.IRREGULAR
    elif first == 0 and last == n - 1:
        shape = SegmentShape.CONSTANT
    elif last == n - 1:
        shape = SegmentShape.MONOTONE_DEC
    elif first == 0:
        shape = SegmentShape.MONOTONE_INC
    else:
        shape = SegmentShape.DEC_CONST_INC

    return SegmentProfile(s0=float(ts[first]), t0=float(ts[last]), inf_value=low,
                          shape=shape, grid_points=n)


# -- radial properties ----------------------------------------------------------------

def _check_quasi(ts: np.ndarray, vs: List[XReal], tol: float
                 ) -> Optional[Dict[str, Any]]:
    v = np.array(vs, dtype=float)
    prefix = np.minimum.accumulate(v)
    suffix = np.minimum.accumulate(v[::-1])[::-1]
    for j in range(1, len(vs) - 1):
        bound = max(prefix[j - 1], suffix[j + 1])
        if _lt(bound, vs[j], tol):
            r = int(np.argmin(v[:j]))
            s = j + 1 + int(np.argmin(v[j + 1:]))
            return {"r": float(ts[r]), "t": float(ts[j]), "s": float(ts[s]),
                    "value_r": vs[r], "value_t": vs[j], "value_s": vs[s]}
    return None


def _check_semistrict(ts: np.ndarray, vs: List[XReal], tol: float
                      ) -> Optional[Dict[str, Any]]:
    inside = [i for i, v in enumerate(vs) if v < POS_INF]
    if inside:
        for i in range(inside[0], inside[-1] + 1):
            if vs[i] == POS_INF:
                return {"reason": "domain_gap", "t": float(ts[i]),
                        "r": float(ts[inside[0]]), "s": float(ts[inside[-1]])}

    n = len(vs)
    for r in range(n):
        if vs[r] == POS_INF:
            continue
        running = NEG_INF
        for s in range(r + 1, n):
            if s > r + 1:
                running = max(running, vs[s - 1])
            if vs[s] == POS_INF or s == r + 1 or _eq(vs[r], vs[s], tol):
                continue
            top = max(vs[r], vs[s])
            if not _lt(running, top, tol):
                j = next(k for k in range(r + 1, s) if not _lt(vs[k], top, tol))
                return {"r": float(ts[r]), "t": float(ts[j]), "s": float(ts[s]),
                        "value_r": vs[r], "value_t": vs[j], "value_s": vs[s]}
    return None


def _check_pseudo(segment: SegmentFn, ts: np.ndarray, vs: List[XReal],
                  cfg: DiniConfig, tol: float) -> Optional[Dict[str, Any]]:
    n = len(vs)
    cache: Dict[Tuple[int, float], XReal] = {}

    def one_sided(i: int, sign: float) -> XReal:
        key = (i, sign)
        if key not in cache:
            cache[key] = scalar_dini(segment, (float(ts[i]),), (sign,), cfg)
        return cache[key]

    for i2 in range(n):
        for i1 in range(n):
            if i1 == i2 or not _lt(vs[i1], vs[i2], tol):
                continue
            sign = -1.0 if i1 < i2 else 1.0
            slope = xscale(one_sided(i2, sign), abs(float(ts[i1] - ts[i2])))
            if not slope < -tol:
                return {"t1": float(ts[i1]), "t2": float(ts[i2]),
                        "value_t1": vs[i1], "value_t2": vs[i2], "dini": slope}
    return None


def classify_radial(phi: ScalarEvaluator, a: Sequence[float], b: Sequence[float],
                    property: ConvexityProperty, grid: Optional[SampleGrid] = None,
                    cfg: DiniConfig = DEFAULT_DINI,
                    tolerances: Tolerances = DEFAULT_TOLERANCES) -> ConvexityVerdict:
    """Quasi-, semistrict quasi- or pseudoconvexity of φ along [a, b]."""
    segment = restrict_segment(phi, a, b)
    if property == ConvexityProperty.LSC:
        return radial_lsc_check(phi, a, b, grid, tolerances.eps_lsc)
    if property == ConvexityProperty.LEVEL_INTERVALS:
        return sublevel_intervals(segment, grid, tol=tolerances.tau_strict)

    ts, vs = segment_values(segment, grid)
    tol = tolerances.tau_strict
    if property == ConvexityProperty.QUASI:
        witness = _check_quasi(ts, vs, tol)
    elif property == ConvexityProperty.SEMISTRICT_QUASI:
        witness = _check_semistrict(ts, vs, tol)
    elif property == ConvexityProperty.PSEUDO:
        witness = _check_pseudo(segment, ts, vs, cfg, tol)
    else:
        raise ValidationError(f"{property.value} is not a radial property")

    if witness is not None:
        witness.update(a=list(as_point(a)), b=list(as_point(b)))
    return ConvexityVerdict(property=property, holds=witness is None, witness=witness,
                            grid=_describe(grid), samples=len(vs))


def _change(u: XReal, v: XReal) -> float:
    if u == v:
        return 0.0
    if not (is_finite(u) and is_finite(v)):
        return POS_INF
    return abs(u - v)


def _locate_jump(segment: SegmentFn, lo: float, hi: float, v_lo: XReal, v_hi: XReal,
                 eps: float) -> Optional[Tuple[float, float, XReal, XReal]]:
    """Bisect [lo, hi] toward its largest change; None when no jump survives."""
    for _ in range(LSC_BISECTIONS):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        v_mid = segment((mid,))
        if _change(v_lo, v_mid) >= _change(v_mid, v_hi):
            hi, v_hi = mid, v_mid
        else:
            lo, v_lo = mid, v_mid
    if _change(v_lo, v_hi) <= eps:
        return None
    return lo, hi, v_lo, v_hi


def _jumps(segment: SegmentFn, ts: Sequence[float], eps: float
           ) -> List[Tuple[float, float, XReal, XReal]]:
    values = [segment((t,)) for t in ts]
    found = []
    for i in range(len(ts) - 1):
        if _change(values[i], values[i + 1]) > eps:
            jump = _locate_jump(segment, ts[i], ts[i + 1], values[i], values[i + 1], eps)
            if jump is not None:
                found.append(jump)
    return found


def _boundary_jumps(segment: SegmentFn, ts: np.ndarray, eps: float
                    ) -> List[Tuple[float, float, XReal, XReal]]:
    """Jumps between grid points, plus jumps on a 1e-4 lattice around each one."""
    found = _jumps(segment, [float(t) for t in ts], eps)
    seen = {round(j[0], 9) for j in found}
    for lo, *_ in list(found):
        lattice = [lo + k * LSC_STEP for k in range(-LSC_LATTICE, LSC_LATTICE + 1)]
        lattice = [t for t in lattice if 0.0 <= t <= 1.0]
        for jump in _jumps(segment, lattice, eps):
            if round(jump[0], 9) not in seen:
                seen.add(round(jump[0], 9))
                found.append(jump)
    return sorted(found)


def radial_lsc_check(phi: ScalarEvaluator, a: Sequence[float], b: Sequence[float],
                     grid: Optional[SampleGrid] = None,
                     eps: float = DEFAULT_TOLERANCES.eps_lsc) -> ConvexityVerdict:
    """Lower semicontinuity of φ_{a,b} at grid points and at located jumps.

    Grid points are compared with samples approaching them geometrically.
    A jump between neighbouring samples is bisected to machine precision,
    and the 1e-4 lattice within ``LSC_RADIUS`` of it is searched for
    further jumps. When a crossing rounds to a point with at most
    ``LSC_DIGITS`` decimals, the value there must not exceed the lower of
    the two one-sided values. Crossings that are not decimal points are
    not judged.
    """
    segment = restrict_segment(phi, a, b)
    ts = _segment_grid(grid)

    def failed(witness: Dict[str, Any]) -> ConvexityVerdict:
        witness.update(a=list(as_point(a)), b=list(as_point(b)))
        return ConvexityVerdict(property=ConvexityProperty.LSC, holds=False,
                                witness=witness, grid=_describe(grid), samples=len(ts))

    offsets = [LSC_RADIUS * 0.5**j for j in range(LSC_APPROACH)]
    for t in ts:
        value = segment((float(t),))
        if value == NEG_INF:
            continue
        nearby: List[XReal] = []
        for side in (-1.0, 1.0):
            approach = [t + side * h for h in offsets if 0.0 <= t + side * h <= 1.0]
            nearby += [segment((float(p),)) for p in approach[-LSC_WINDOW:]]
        if nearby and _lt(min(nearby), value, eps):
            return failed({"t": float(t), "value": value, "nearby": min(nearby)})

    for lo, hi, v_lo, v_hi in _boundary_jumps(segment, ts, eps):
        crossing = 0.5 * (lo + hi)
        exact = np.asarray(segment.point(crossing))
        boundary = np.round(exact, LSC_DIGITS)
        if np.max(np.abs(boundary - exact)) > LSC_SNAP:
            logger.debug("jump off a decimal boundary", t=crossing)
            continue
        value = phi(as_point(boundary))
        low = min(v_lo, v_hi)
        if _lt(low, value, eps):
            logger.debug("upper value owns a jump", t=crossing, value=value, low=low)
            return failed({"t": crossing, "value": value, "nearby": low,
                           "boundary": [float(c) for c in boundary]})
    return ConvexityVerdict(property=ConvexityProperty.LSC, holds=True,
                            grid=_describe(grid), samples=len(ts))


def qconvex_at_point(phi: ScalarEvaluator, a: Sequence[float], grid: SampleGrid,
                     tgrid: Optional[SampleGrid] = None,
                     tol: float = DEFAULT_TOLERANCES.tau_strict) -> ConvexityVerdict:
    """φ(a + t(b - a)) <= max{φ(a), φ(b)} for sampled b and t in (0, 1)."""
    base = np.asarray(as_point(a))
    fa = phi(as_point(base))
    interior = _interior(tgrid)
    samples = 0
    for b in grid.points():
        end = np.asarray(b)
        if np.array_equal(end, base):
            continue
        bound = max(fa, phi(b))
        for t in interior:
            samples += 1
            value = phi(as_point(base + t * (end - base)))
            if _lt(bound, value, tol):
                witness = {"a": list(base), "b": list(b), "t": t, "value": value,
                           "bound": bound}
                return ConvexityVerdict(property=ConvexityProperty.QCONVEX_AT_POINT,
                                        holds=False, witness=witness,
                                        grid=grid.describe(), samples=samples)
    return ConvexityVerdict(property=ConvexityProperty.QCONVEX_AT_POINT, holds=True,
                            grid=grid.describe(), samples=samples)


class DiewertWitness(NamedTuple):
    t: float
    lhs: XReal
    rhs: XReal


def diewert_witness(phi: ScalarEvaluator, a: Sequence[float], b: Sequence[float],
                    grid: Optional[SampleGrid] = None, cfg: DiniConfig = DEFAULT_DINI,
                    backward: bool = False,
                    tol: float = DEFAULT_TOLERANCES.tau_strict) -> DiewertWitness:
    """Grid point t in [0, 1) with φ(b) ∸ φ(a) <= φ_{a,b}^↓(t, 1).

    With ``backward`` the search runs over s in (0, 1] for
    φ(a) ∸ φ(b) <= φ_{a,b}^↓(s, -1).
    """
    segment = restrict_segment(phi, a, b)
    ts = [float(t) for t in _segment_grid(grid)]
    if backward:
        lhs = inf_residual(segment((0.0,)), segment((1.0,)))
        candidates, direction = [t for t in ts if t > 0.0], -1.0
    else:
        lhs = inf_residual(segment((1.0,)), segment((0.0,)))
        candidates, direction = [t for t in ts if t < 1.0], 1.0

    for t in candidates:
        rhs = scalar_dini(segment, (t,), (direction,), cfg)
        if _le(lhs, rhs, tol):
            return DiewertWitness(t, lhs, rhs)
    logger.warning("no mean-value witness on the grid", a=list(as_point(a)),
                   b=list(as_point(b)), lhs=lhs)
    raise WitnessNotFoundError(details={"a": list(as_point(a)), "b": list(as_point(b)),
                                        "lhs": lhs, "grid": _describe(grid)})


def set_quasiconvex(f: SetValued, grid: SampleGrid, tgrid: Optional[SampleGrid] = None,
                    tol: float = DEFAULT_TOLERANCES.tau_h) -> ConvexityVerdict:
    """f(a + t(b - a)) ⊇ f(a) ∩ f(b) for sampled a, b and t in (0, 1)."""
    points = grid.points()
    interior = _interior(tgrid)
    samples = 0
    for i, a in enumerate(points):
        fa = f.evaluate(a)
        if fa.is_empty:
            continue
        for b in points[i + 1:]:
            fb = f.evaluate(b)
            if fb.is_empty:
                continue
            lower = lattice_sup([fa, fb])
            if lower.is_empty:
                continue
            for t in interior:
                samples += 1
                c = as_point(np.asarray(a) + t * (np.asarray(b) - np.asarray(a)))
                if not is_subset(lower, f.evaluate(c), tol):
                    witness = {"a": list(a), "b": list(b), "t": t, "point": list(c)}
                    return ConvexityVerdict(property=ConvexityProperty.SET_QUASI,
                                            holds=False, witness=witness,
                                            grid=grid.describe(), samples=samples)
    return ConvexityVerdict(property=ConvexityProperty.SET_QUASI, holds=True,
                            grid=grid.describe(), samples=samples)


def strict_monotone_check(phi: ScalarEvaluator, a: Sequence[float], b: Sequence[float],
                          cfg: DiniConfig = DEFAULT_DINI,
                          factors: Sequence[float] = MONOTONE_FACTORS,
                          tol: float = DEFAULT_TOLERANCES.tau_strict
                          ) -> ConvexityVerdict:
    """If φ^↓(b, a - b) < 0 then φ^↓(b_t, a - b_t) < 0 along b_t = a + t(b - a)."""
    start = np.asarray(as_point(a))
    end = np.asarray(as_point(b))
    premise = scalar_dini(phi, as_point(end), as_point(start - end), cfg)
    if not premise < -tol:
        return ConvexityVerdict(property=ConvexityProperty.STRICT_MONOTONE, holds=True,
                                grid="premise not met", samples=1)
    for t in factors:
        point = start + t * (end - start)
        value = scalar_dini(phi, as_point(point), as_point(start - point), cfg)
        if not value < -tol:
            witness = {"a": list(start), "b": list(end), "t": t, "dini": value,
                       "premise": premise}
            return ConvexityVerdict(property=ConvexityProperty.STRICT_MONOTONE,
                                    holds=False, witness=witness,
                                    grid=str(list(factors)), samples=len(factors))
    return ConvexityVerdict(property=ConvexityProperty.STRICT_MONOTONE, holds=True,
                            grid=str(list(factors)), samples=len(factors))


def sublevel_intervals(phi_ab: ScalarEvaluator, grid: Optional[SampleGrid] = None,
                       levels: Optional[Sequence[float]] = None,
                       tol: float = DEFAULT_TOLERANCES.tau_strict) -> ConvexityVerdict:
    """Sampled sublevel sets {t | φ_{a,b}(t) <= r} are intervals."""
    ts, vs = segment_values(phi_ab, grid)
    finite = np.array([v for v in vs if is_finite(v)])
    if levels is None:
        levels = (list(np.quantile(finite, [0.1, 0.3, 0.5, 0.7, 0.9]))
                  if finite.size else [])
    for r in levels:
        below = [i for i, v in enumerate(vs) if _le(v, float(r), tol)]
        if below and len(below) != below[-1] - below[0] + 1:
            gap = next(i for i in range(below[0], below[-1]) if i not in below)
            witness = {"level": float(r), "t_gap": float(ts[gap]),
                       "t_first": float(ts[below[0]]), "t_last": float(ts[below[-1]])}
            return ConvexityVerdict(property=ConvexityProperty.LEVEL_INTERVALS,
                                    holds=False, witness=witness,
                                    grid=_describe(grid), samples=len(vs))
    return ConvexityVerdict(property=ConvexityProperty.LEVEL_INTERVALS, holds=True,
                            grid=_describe(grid), samples=len(vs))


def domain_star_shaped(phi: ScalarEvaluator, a: Sequence[float], grid: SampleGrid,
                       tgrid: Optional[SampleGrid] = None) -> ConvexityVerdict:
    """dom φ contains the segment from a to every sampled domain point."""
    base = np.asarray(as_point(a))
    interior = _interior(tgrid)
    samples = 0
    for b in grid.points():
        if phi(b) == POS_INF:
            continue
        end = np.asarray(b)
        for t in interior:
            samples += 1
            point = as_point(base + t * (end - base))
            if phi(point) == POS_INF:
                witness = {"a": list(base), "b": list(b), "t": t, "point": list(point)}
                return ConvexityVerdict(property=ConvexityProperty.STAR_SHAPED,
                                        holds=False, witness=witness,
                                        grid=grid.describe(), samples=samples)
    return ConvexityVerdict(property=ConvexityProperty.STAR_SHAPED, holds=True,
                            grid=grid.describe(), samples=samples)
