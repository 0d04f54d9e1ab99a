"""Lower Dini directional derivatives built on residuated difference quotients.

The lower limit over t -> 0 is estimated on the geometric steps
t_k = t0 * rho^k.  Quotients are optionally extrapolated to first order
before the tail minimum is taken; an estimate is *stable* when the tail
windows of size w and 2w agree within the stability tolerance.
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..infrastructure.logging import log_low_confidence
from .exceptions import ModeError, ValidationError
from .funcmodel import ScalarEvaluator, SetValued, as_point, scalarize
from .models import DEFAULT_DINI, DEFAULT_TOLERANCES, DiniConfig, DiniMode
from .polytope import (DualVector, UpperSet, halfspace_set, inf_residual_set,
                       lattice_inf, scale, set_equal)
from .xreals import NEG_INF, POS_INF, XReal, inf_residual, is_finite, liminf_tail, xscale


@dataclass(frozen=True)
class DiniResult:
    """A lower Dini derivative together with its stability flag.

    SCALAR results carry no set.  ZSTAR results carry the halfspace
    L_{z*}(scalar_value).  RESIDUAL results carry the lattice lower limit;
    their scalar_value is -inf for WHOLE_SPACE, 0 when the set contains the
    origin and +inf otherwise.
    """

    mode: DiniMode
    scalar_value: XReal
    set_value: Optional[UpperSet] = None
    stable: bool = True
    zstar: Optional[DualVector] = None


def _direction(u: Sequence[float]) -> np.ndarray:
    direction = np.asarray(u, dtype=float).reshape(-1)
    if not np.any(direction):
        raise ValidationError("direction must be nonzero")
    return direction


def difference_quotients(phi: ScalarEvaluator, x: Sequence[float],
                         u: Sequence[float], cfg: DiniConfig = DEFAULT_DINI
                         ) -> List[Tuple[float, XReal]]:
    """(t_k, (1/t_k)(φ(x + t_k u) ∸ φ(x))) for every step."""
    base = np.asarray(as_point(x))
    direction = _direction(u)
    value = phi(as_point(base))
    samples = []
    for t in cfg.steps():
        moved = phi(as_point(base + t * direction))
        samples.append((t, xscale(inf_residual(moved, value), 1.0 / t)))
    return samples


def extrapolate(samples: Sequence[Tuple[float, XReal]], rho: float
                ) -> List[Tuple[float, XReal]]:
    """First-order elimination of the O(t) term between neighbouring quotients."""
    result = []
    for (_, q0), (t1, q1) in zip(samples, samples[1:]):
        if is_finite(q0) and is_finite(q1):
            result.append((t1, (q1 - rho * q0) / (1.0 - rho)))
        else:
            result.append((t1, q1))
    return result


def _agree(a: XReal, b: XReal, tol: float) -> bool:
    if is_finite(a) and is_finite(b):
        return abs(a - b) <= tol * max(1.0, abs(a), abs(b))
    return a == b


def tail_estimate(samples: Sequence[Tuple[float, XReal]],
                  cfg: DiniConfig = DEFAULT_DINI) -> Tuple[XReal, bool]:
    """Lower-limit estimate and whether windows w and 2w agree."""
    series = extrapolate(samples, cfg.rho) if cfg.extrapolate else list(samples)
    window = min(cfg.window, len(series))
    value = liminf_tail(series, window)
    wide = liminf_tail(series, min(2 * window, len(series)))
    return value, _agree(value, wide, cfg.stability_tol)


def scalar_dini_result(phi: ScalarEvaluator, x: Sequence[float], u: Sequence[float],
                       cfg: DiniConfig = DEFAULT_DINI) -> DiniResult:
    value, stable = tail_estimate(difference_quotients(phi, x, u, cfg), cfg)
    if not stable:
        log_low_confidence("scalar_dini", "tail windows disagree",
                           x=list(as_point(x)), u=list(as_point(u)))
    return DiniResult(DiniMode.SCALAR, value, None, stable)


def scalar_dini(phi: ScalarEvaluator, x: Sequence[float], u: Sequence[float],
                cfg: DiniConfig = DEFAULT_DINI) -> XReal:
    """φ^↓(x, u) = liminf (1/t)(φ(x + t u) ∸ φ(x))."""
    return scalar_dini_result(phi, x, u, cfg).scalar_value


def zstar_dini(f: SetValued, zstar: DualVector, x: Sequence[float],
               u: Sequence[float], cfg: DiniConfig = DEFAULT_DINI,
               phi: Optional[ScalarEvaluator] = None) -> DiniResult:
    """f^↓_{z*}(x, u) as the halfspace {z | φ^↓(x, u) <= -z* . z}.

    ``phi`` may pass a precomputed scalarization of f at z*.
    """
    evaluator = phi if phi is not None else scalarize(f, zstar)
    scalar = scalar_dini_result(evaluator, x, u, cfg)
    return DiniResult(
        DiniMode.ZSTAR,
        scalar.scalar_value,
        halfspace_set(zstar, scalar.scalar_value),
        scalar.stable,
        zstar,
    )


def residual_dini_result(f: SetValued, x: Sequence[float], u: Sequence[float],
                         cfg: DiniConfig = DEFAULT_DINI,
                         duals: Optional[Sequence[DualVector]] = None) -> DiniResult:
    """f^↓(x, u) = liminf (1/t)(f(x + t u) ∸ f(x)) in the lattice sense.

    The lower limit is the lattice infimum of the scaled residuals over the
    last ``window`` of the leading ``residual_depth`` steps; stability
    compares it with the infimum over the last ``2 * window`` of them.
    """
    base = np.asarray(as_point(x))
    direction = _direction(u)
    value = f.evaluate(as_point(base))
    steps = cfg.residual_steps()
    wide = min(2 * cfg.window, len(steps))
    narrow = min(cfg.window, wide)
    residuals: List[UpperSet] = []
    for t in steps[-wide:]:
        moved = f.evaluate(as_point(base + t * direction))
        residuals.append(scale(inf_residual_set(moved, value, duals), 1.0 / t))

    narrow_hull = lattice_inf(residuals[-narrow:])
    wide_hull = lattice_inf(residuals)
    stable = set_equal(narrow_hull, wide_hull, cfg.stability_tol)
    if not stable:
        log_low_confidence("residual_dini", "tail hulls disagree",
                           x=list(as_point(x)), u=list(as_point(u)))
    return DiniResult(DiniMode.RESIDUAL, _scalar_hint(narrow_hull), narrow_hull, stable)


def _scalar_hint(A: UpperSet) -> XReal:
    if A.is_empty:
        return POS_INF
    if A.is_whole:
        return NEG_INF
    return 0.0 if A.contains(np.zeros(A.dim)) else POS_INF


def residual_dini(f: SetValued, x: Sequence[float], u: Sequence[float],
                  cfg: DiniConfig = DEFAULT_DINI,
                  duals: Optional[Sequence[DualVector]] = None) -> UpperSet:
    result = residual_dini_result(f, x, u, cfg, duals)
    assert result.set_value is not None
    return result.set_value


def interior_contains_zero(h: DiniResult,
                           tol: float = DEFAULT_TOLERANCES.tau_strict) -> bool:
    """0 ∈ Int f^↓_{z*}(x, u), i.e. φ^↓(x, u) < 0 strictly."""
    if h.mode != DiniMode.ZSTAR:
        raise ModeError(f"interior test needs a ZSTAR result, got {h.mode.value}")
    return h.scalar_value < -tol


def contains_zero(h: DiniResult, tol: float = DEFAULT_TOLERANCES.tau_strict) -> bool:
    """0 ∈ f^↓_{z*}(x, u), i.e. φ^↓(x, u) <= 0 up to ``tol``."""
    if h.mode != DiniMode.ZSTAR:
        raise ModeError(f"membership test needs a ZSTAR result, got {h.mode.value}")
    return h.scalar_value <= tol
