"""Point-estimate percent changes versus interval-based sign identification."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional, Sequence

from .bounds import METRICS, BoundsResult, find_result
from .interval import Interval, overlaps


class Verdict(str, enum.Enum):
    SIGN_IDENTIFIED_A_HIGHER = "SIGN_IDENTIFIED_A_HIGHER"
    SIGN_IDENTIFIED_B_HIGHER = "SIGN_IDENTIFIED_B_HIGHER"
    NOT_IDENTIFIED = "NOT_IDENTIFIED"

    def mirrored(self) -> Verdict:
        return {
            Verdict.SIGN_IDENTIFIED_A_HIGHER: Verdict.SIGN_IDENTIFIED_B_HIGHER,
            Verdict.SIGN_IDENTIFIED_B_HIGHER: Verdict.SIGN_IDENTIFIED_A_HIGHER,
        }.get(self, self)

    @property
    def identified(self) -> bool:
        return self is not Verdict.NOT_IDENTIFIED


@dataclass(frozen=True, slots=True)
class Subject:
    city: str
    year: int
    metric: str

    def __str__(self) -> str:
        return f"{self.city} {self.year} {self.metric}"


# how the point-estimate gap is expressed: relative to the first subject
# (over-time changes) or relative to the larger point (cross-city gaps)
PCT_CONVENTIONS = ("base", "larger")


@dataclass(frozen=True, slots=True)
class ComparisonVerdict:
    subject_a: Optional[Subject]
    subject_b: Optional[Subject]
    interval_a: Interval
    interval_b: Interval
    point_a: float
    point_b: float
    point_pct_change: float
    verdict: Verdict
    incomplete: bool = False
    pct_convention: str = "base"


class UndefinedChange(ZeroDivisionError):
    pass


def percent_change(old: float, new: float) -> float:
    if old == 0:
        raise UndefinedChange("percent change from zero is undefined")
    return (new - old) / old * 100.0


def relative_gap(a: float, b: float) -> float:
    """Absolute gap between two points as a percentage of the larger one."""
    top = max(abs(a), abs(b))
    if top == 0:
        raise UndefinedChange("relative gap between two zeros is undefined")
    return abs(a - b) / top * 100.0


def classify(a: Interval, b: Interval) -> Verdict:
    if overlaps(a, b):
        return Verdict.NOT_IDENTIFIED
    return Verdict.SIGN_IDENTIFIED_A_HIGHER if a.lb > b.ub else Verdict.SIGN_IDENTIFIED_B_HIGHER


def compare(interval_a: Interval, point_a: float, interval_b: Interval, point_b: float, *,
            subject_a: Optional[Subject] = None, subject_b: Optional[Subject] = None,
            incomplete: bool = False, pct_convention: str = "base") -> ComparisonVerdict:
    if pct_convention not in PCT_CONVENTIONS:
        raise ValueError(f"pct_convention must be one of {PCT_CONVENTIONS}")
    if pct_convention == "base":
        pct = percent_change(point_a, point_b) if point_a != 0 else float("nan")
    else:
        pct = relative_gap(point_a, point_b) if (point_a or point_b) else float("nan")
    return ComparisonVerdict(subject_a, subject_b, interval_a, interval_b, point_a, point_b,
                             pct, classify(interval_a, interval_b), incomplete, pct_convention)


def _compare_results(ra: BoundsResult, rb: BoundsResult, metric: str,
                     pct_convention: str) -> ComparisonVerdict:
    if metric not in METRICS:
        raise KeyError(f"unknown metric {metric!r}; expected one of {METRICS}")
    return compare(ra.metric(metric), ra.point(metric), rb.metric(metric), rb.point(metric),
                   subject_a=Subject(ra.city, ra.year, metric),
                   subject_b=Subject(rb.city, rb.year, metric),
                   incomplete=ra.incomplete or rb.incomplete, pct_convention=pct_convention)


def compare_years(results: Sequence[BoundsResult], city: str, year1: int, year2: int,
                  metric: str, *, pct_convention: str = "base") -> ComparisonVerdict:
    return _compare_results(find_result(results, city, year1), find_result(results, city, year2),
                            metric, pct_convention)


def compare_cities(results: Sequence[BoundsResult], city1: str, city2: str, year: int,
                   metric: str, *, pct_convention: str = "base") -> ComparisonVerdict:
    return _compare_results(find_result(results, city1, year), find_result(results, city2, year),
                            metric, pct_convention)
