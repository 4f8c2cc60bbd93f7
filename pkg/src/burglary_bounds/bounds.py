"""Bounds on known and actual burglary counts and on burglary rates.

Everything is carried at full double precision; rounding for display is the
report layer's job.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .domain import CityYearRecord, Dataset, Finding, city_key, has_errors, validate
from .interval import Interval, divide_by, round_half_away

POP_SCALE = 100_000
HH_SCALE = 1_000
POP_BASES = ("state", "federal", "mid")


class DatasetError(ValueError):
    """Dataset failed validation; ``findings`` holds the reasons."""

    def __init__(self, findings: list[Finding]):
        self.findings = findings
        errors = [str(f) for f in findings if f.severity == "error"]
        super().__init__("; ".join(errors) or "invalid dataset")


class DomainError(ValueError):
    pass


@dataclass(frozen=True, slots=True)
class BoundsConfig:
    pop_scale: float = POP_SCALE
    hh_scale: float = HH_SCALE
    pop_basis: str = "state"

    def __post_init__(self) -> None:
        if self.pop_basis not in POP_BASES:
            raise ValueError(f"pop_basis must be one of {POP_BASES}, got {self.pop_basis!r}")
        if self.pop_scale <= 0 or self.hh_scale <= 0:
            raise ValueError("rate scale constants must be positive")


@dataclass(frozen=True, slots=True)
class StandardRates:
    per_population: float
    per_household: float
    basis: str
    note: str = ""


@dataclass(frozen=True, slots=True)
class BoundsResult:
    city: str
    year: int
    b_p: int
    p_r: Interval
    b_k: Interval
    b_a: Interval
    rate_pop: Interval
    rate_hh: Interval
    std_rate_pop: float
    std_rate_hh: float
    h_s: Optional[int]
    h_f: Optional[int]
    incomplete: bool
    std_basis: str = "state"
    note: str = ""

    def metric(self, name: str) -> Interval:
        if name not in METRICS:
            raise KeyError(f"unknown metric {name!r}; expected one of {METRICS}")
        return getattr(self, name)

    def point(self, name: str) -> float:
        """Conventional point estimate matching ``metric(name)``."""
        return {"b_a": float(self.b_p), "rate_pop": self.std_rate_pop,
                "rate_hh": self.std_rate_hh}[name]


METRICS = ("b_a", "rate_pop", "rate_hh")


def known_count_bounds(b_p: int, theta: Interval) -> Interval:
    """Undo the Hierarchy Rule undercount: ``b_p * (1 + theta)``."""
    if b_p < 0:
        raise DomainError(f"police count must be nonnegative, got {b_p}")
    return Interval(b_p * (1.0 + theta.lb), b_p * (1.0 + theta.ub))


def actual_count_bounds(bk: Interval, pr: Interval) -> Interval:
    if pr.lb <= 0:
        raise DomainError(f"reporting probability interval {pr} must exclude zero")
    return divide_by(bk, pr)


def households(n: float, pph: float) -> int:
    if n <= 0 or pph <= 0:
        raise DomainError(f"population ({n}) and persons per household ({pph}) must be positive")
    return round_half_away(n / pph)


def _outer_rate(ba: Interval, denominators, k: float) -> Interval:
    present = [d for d in denominators if d is not None]
    if not present:
        raise DomainError("no denominator available: both estimates are absent")
    if min(present) <= 0:
        raise DomainError(f"denominators must be positive, got {present}")
    return Interval(ba.lb / max(present) * k, ba.ub / min(present) * k)


def rate_bounds_population(ba: Interval, n_s: Optional[float], n_f: Optional[float],
                           scale: float = POP_SCALE) -> Interval:
    """Widest rate consistent with either population estimate."""
    return _outer_rate(ba, (n_s, n_f), scale)


def rate_bounds_household(ba: Interval, h_s: Optional[float], h_f: Optional[float],
                          scale: float = HH_SCALE) -> Interval:
    return _outer_rate(ba, (h_s, h_f), scale)


def standard_rates(b_p: int, n_s: Optional[float], pph: float, *,
                   n_f: Optional[float] = None, basis: str = "state",
                   pop_scale: float = POP_SCALE, hh_scale: float = HH_SCALE) -> StandardRates:
    """Conventional point rates that take the police count at face value.

    ``basis`` picks the population: the state estimate (default), the
    federal one, or the mean of the two. If the chosen estimate is missing the
    other one is used and ``note`` says so.
    """
    note = ""
    used = basis
    if basis == "mid":
        avail = [n for n in (n_s, n_f) if n is not None]
        if len(avail) == 1:
            note = "only one population estimate available; midpoint not formed"
            used = "state" if n_s is not None else "federal"
        n = sum(avail) / len(avail) if avail else None
    else:
        primary, fallback, other = ((n_s, n_f, "federal") if basis == "state"
                                    else (n_f, n_s, "state"))
        n = primary
        if n is None:
            n = fallback
            used = other
            note = f"{basis} population absent; fell back to {other} estimate"
    if n is None:
        raise DomainError("no population estimate available")
    if n <= 0 or pph <= 0:
        raise DomainError("population and persons per household must be positive")
    return StandardRates(b_p / n * pop_scale, b_p / (n / pph) * hh_scale, used, note)


def bounds_for_record(rec: CityYearRecord, ds: Dataset,
                      config: BoundsConfig = BoundsConfig()) -> BoundsResult:
    pr = ds.reporting[rec.year].interval(ds.confidence)
    bk = known_count_bounds(rec.b_p, ds.hierarchy.theta)
    ba = actual_count_bounds(bk, pr)
    h_s = households(rec.n_s, rec.pph) if rec.n_s is not None else None
    h_f = households(rec.n_f, rec.pph) if rec.n_f is not None else None
    std = standard_rates(rec.b_p, rec.n_s, rec.pph, n_f=rec.n_f, basis=config.pop_basis,
                         pop_scale=config.pop_scale, hh_scale=config.hh_scale)
    notes = [std.note] if std.note else []
    if rec.incomplete:
        notes.insert(0, "only one population estimate; rate bounds use it alone")
    return BoundsResult(
        city=rec.city, year=rec.year, b_p=rec.b_p, p_r=pr, b_k=bk, b_a=ba,
        rate_pop=rate_bounds_population(ba, rec.n_s, rec.n_f, config.pop_scale),
        rate_hh=rate_bounds_household(ba, h_s, h_f, config.hh_scale),
        std_rate_pop=std.per_population, std_rate_hh=std.per_household,
        h_s=h_s, h_f=h_f, incomplete=rec.incomplete, std_basis=std.basis,
        note="; ".join(notes),
    )


def compute_all(ds: Dataset, config: BoundsConfig = BoundsConfig()) -> list[BoundsResult]:
    """Bounds for every record, ordered by city then year.

    Raises ``DatasetError`` if the dataset has any error-level finding.
    """
    findings = validate(ds)
    if has_errors(findings):
        raise DatasetError(findings)
    recs = sorted(ds.records, key=lambda r: r.key)
    results = [bounds_for_record(r, ds, config) for r in recs]
    for res in results:
        _check_invariants(res)
    return results


class InvariantViolation(AssertionError):
    pass


def _check_invariants(res: BoundsResult) -> None:
    if res.b_a.lb < res.b_k.lb and res.p_r.ub <= 1 and not math.isclose(res.b_a.lb, res.b_k.lb):
        raise InvariantViolation(f"{res.city} {res.year}: actual lower bound below known lower bound")


def find_result(results: list[BoundsResult], city: str, year: int) -> BoundsResult:
    key = (city_key(city), year)
    for r in results:
        if (city_key(r.city), r.year) == key:
            return r
    raise KeyError(f"no result for {city} {year}")
