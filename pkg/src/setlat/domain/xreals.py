"""Extended reals with inf-addition and inf-residuation.

Values are plain Python floats; ``POS_INF`` and ``NEG_INF`` are the two
infinite cases and NaN is never a legal value.  This is the lattice
G(R, R_+) written as numbers: r stands for the upper set [r, +inf).
"""

import math
from typing import Iterable, Sequence, Tuple

from .exceptions import NoSamplesError, ValidationError

XReal = float

POS_INF: XReal = math.inf
NEG_INF: XReal = -math.inf


def xreal(value: float) -> XReal:
    """Normalize a number into an extended real, rejecting NaN."""
    v = float(value)
    if math.isnan(v):
        raise ValidationError("NaN is not an extended real")
    return v


def is_finite(r: XReal) -> bool:
    return NEG_INF < r < POS_INF


def inf_add(r: XReal, s: XReal) -> XReal:
    """r ⊕ s = inf{a + b | r <= a, s <= b}; +inf absorbs everything."""
    if r == POS_INF or s == POS_INF:
        return POS_INF
    if r == NEG_INF or s == NEG_INF:
        return NEG_INF
    return r + s


def inf_residual(r: XReal, s: XReal) -> XReal:
    """r ∸ s = inf{t | r <= s ⊕ t}."""
    if s == POS_INF:
        return NEG_INF
    if s == NEG_INF:
        return NEG_INF if r == NEG_INF else POS_INF
    if r == POS_INF:
        return POS_INF
    if r == NEG_INF:
        return NEG_INF
    return r - s


def xscale(r: XReal, t: float) -> XReal:
    """Multiply by t > 0; the infinities stay fixed."""
    if t <= 0:
        raise ValidationError("scaling factor must be positive", {"t": t})
    if not is_finite(r):
        return r
    return r * t


def xmin(values: Iterable[XReal]) -> XReal:
    """Minimum with the empty minimum equal to +inf."""
    return min(values, default=POS_INF)


def xmax(values: Iterable[XReal]) -> XReal:
    """Maximum with the empty maximum equal to -inf."""
    return max(values, default=NEG_INF)


def liminf_tail(samples: Sequence[Tuple[float, XReal]], window: int) -> XReal:
    """Minimum of v over the last ``window`` samples (the smallest t).

    Samples must be ordered with strictly decreasing t.
    """
    if not samples:
        raise NoSamplesError()
    if window < 1 or window > len(samples):
        raise ValidationError(
            "window must lie between 1 and the number of samples",
            {"window": window, "samples": len(samples)},
        )
    ts = [t for t, _ in samples]
    if any(b >= a for a, b in zip(ts, ts[1:])):
        raise ValidationError("sample steps must be strictly decreasing")
    return min(v for _, v in samples[-window:])


def format_xreal(r: XReal) -> str:
    """Text form shared by every report so that text and CSV agree."""
    if r == POS_INF:
        return "+inf"
    if r == NEG_INF:
        return "-inf"
    if r == 0:
        return "0"
    return f"{r:.12g}"


def parse_xreal(text: str) -> XReal:
    """Inverse of ``format_xreal``; also accepts 'inf', '-inf' and numbers."""
    token = text.strip().lower()
    if token in ("+inf", "inf", "infinity", "+infinity"):
        return POS_INF
    if token in ("-inf", "-infinity"):
        return NEG_INF
    try:
        return xreal(float(token))
    except ValueError as e:
        raise ValidationError(f"not an extended real: {text!r}") from e
