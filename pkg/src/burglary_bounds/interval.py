"""Closed intervals and the handful of operations the bounds pipeline needs."""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal

Z_95 = 1.959964


class IntervalError(ValueError):
    """Raised for an invalid interval or an operation outside its domain."""


@dataclass(frozen=True, slots=True)
class Interval:
    """A closed range ``[lb, ub]``; units depend on context."""

    lb: float
    ub: float

    def __post_init__(self) -> None:
        if math.isnan(self.lb) or math.isnan(self.ub):
            raise IntervalError("interval endpoints must not be NaN")
        if self.lb > self.ub:
            raise IntervalError(f"lower bound {self.lb} exceeds upper bound {self.ub}")

    @classmethod
    def point(cls, x: float) -> Interval:
        return cls(x, x)

    @property
    def width(self) -> float:
        return self.ub - self.lb

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lb + self.ub)

    def contains(self, x: float) -> bool:
        return self.lb <= x <= self.ub

    def issubset(self, other: Interval) -> bool:
        return other.lb <= self.lb and self.ub <= other.ub

    def rounded(self, ndigits: int = 0) -> tuple[float, float]:
        return round_half_away(self.lb, ndigits), round_half_away(self.ub, ndigits)

    def __iter__(self):
        yield self.lb
        yield self.ub

    def __str__(self) -> str:
        return f"[{self.lb:g}, {self.ub:g}]"


@dataclass(frozen=True, slots=True)
class ConfidenceSpec:
    level: float = 95.0
    z: float = Z_95

    def __post_init__(self) -> None:
        if not self.z > 0:
            raise IntervalError(f"z multiplier must be positive, got {self.z}")


def round_half_away(x: float, ndigits: int = 0) -> float:
    """Round half away from zero; returns an int when ``ndigits == 0``.

    Goes through the shortest repr of ``x`` so that e.g. 2.675 rounds to
    2.68 as written, not as stored.
    """
    q = Decimal(1).scaleb(-ndigits)
    d = Decimal(repr(float(x))).quantize(q, rounding=ROUND_HALF_UP)
    return int(d) if ndigits == 0 else float(d)


def confidence_interval(point_pct: float, se_pct: float,
                        spec: ConfidenceSpec = ConfidenceSpec(),
                        *, with_flag: bool = False):
    """Symmetric normal CI around a percentage, returned as probabilities.

    No rounding is applied; the one-decimal figures usually printed for these
    limits are a display concern. The result is clipped into ``[0, 1]``. With
    ``with_flag=True`` a ``(interval, clamped)`` tuple is returned instead.
    """
    if not 0 <= point_pct <= 100:
        raise IntervalError(f"point estimate {point_pct}% outside [0, 100]")
    if se_pct < 0:
        raise IntervalError(f"standard error must be nonnegative, got {se_pct}")
    half = spec.z * se_pct
    lo = (point_pct - half) / 100.0
    hi = (point_pct + half) / 100.0
    clamped = lo < 0.0 or hi > 1.0
    iv = Interval(max(lo, 0.0), min(hi, 1.0))
    return (iv, clamped) if with_flag else iv


def scale(iv: Interval, k: float) -> Interval:
    if k < 0:
        raise IntervalError(f"scale factor must be nonnegative, got {k}")
    return Interval(k * iv.lb, k * iv.ub)


def divide_by(numer: Interval, denom: Interval) -> Interval:
    """Divide a nonnegative interval by an interval of positive values.

    The lower bound pairs the smallest numerator with the largest divisor and
    vice versa, so the result covers every ``x / p`` with ``x`` in ``numer``
    and ``p`` in ``denom``.
    """
    if denom.lb <= 0:
        raise IntervalError(f"divisor interval {denom} must be strictly positive")
    if numer.lb < 0:
        raise IntervalError(f"numerator interval {numer} must be nonnegative")
    return Interval(numer.lb / denom.ub, numer.ub / denom.lb)


def overlaps(a: Interval, b: Interval) -> bool:
    """True when the intervals share at least one point (touching counts)."""
    return a.lb <= b.ub and b.lb <= a.ub
