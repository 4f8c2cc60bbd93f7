"""Typed inputs: city-year observations, survey reporting rates, assumptions."""

from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping, Optional

from .interval import ConfidenceSpec, Interval, confidence_interval

DEFAULT_THETA = Interval(0.005, 0.01)


def city_key(city: str) -> str:
    return city.strip().casefold()


@dataclass(frozen=True, slots=True)
class CityYearRecord:
    city: str
    year: int
    b_p: int
    n_s: Optional[int]
    n_f: Optional[int]
    pph: float

    @property
    def key(self) -> tuple[str, int]:
        return city_key(self.city), self.year

    @property
    def populations(self) -> tuple[int, ...]:
        return tuple(n for n in (self.n_s, self.n_f) if n is not None)

    @property
    def incomplete(self) -> bool:
        return len(self.populations) < 2


@dataclass(frozen=True, slots=True)
class ReportingRateEstimate:
    year: int
    rate_pct: float
    se_pct: float

    def interval(self, spec: ConfidenceSpec = ConfidenceSpec()) -> Interval:
        return confidence_interval(self.rate_pct, self.se_pct, spec)


@dataclass(frozen=True, slots=True)
class HierarchyAssumption:
    """Bounds on upgraded burglaries as a fraction of the police count."""

    theta: Interval = DEFAULT_THETA

    def __post_init__(self) -> None:
        if self.theta.lb < 0 or self.theta.ub >= 1:
            raise ValueError(f"theta must satisfy 0 <= lb <= ub < 1, got {self.theta}")


@dataclass(frozen=True)
class Dataset:
    records: tuple[CityYearRecord, ...] = ()
    reporting: Mapping[int, ReportingRateEstimate] = field(default_factory=dict)
    hierarchy: HierarchyAssumption = HierarchyAssumption()
    confidence: ConfidenceSpec = ConfidenceSpec()
    label: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "records", tuple(self.records))
        object.__setattr__(self, "reporting", MappingProxyType(dict(sorted(self.reporting.items()))))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Dataset):
            return NotImplemented
        return (self.records == other.records
                and dict(self.reporting) == dict(other.reporting)
                and self.hierarchy == other.hierarchy
                and self.confidence == other.confidence
                and self.label == other.label)

    __hash__ = None  # type: ignore[assignment]

    @property
    def cities(self) -> list[str]:
        seen: dict[str, str] = {}
        for r in self.records:
            seen.setdefault(city_key(r.city), r.city)
        return [seen[k] for k in sorted(seen)]

    @property
    def years(self) -> list[int]:
        return sorted({r.year for r in self.records})


@dataclass(frozen=True, slots=True)
class Finding:
    severity: str  # "error" | "warning"
    code: str
    city: str
    year: Optional[int]
    message: str

    def __str__(self) -> str:
        where = " ".join(str(p) for p in (self.city, self.year) if p)
        head = f"{self.severity}: [{self.code}]"
        return f"{head} {where}: {self.message}" if where else f"{head} {self.message}"


def validate(ds: Dataset) -> list[Finding]:
    """Check a dataset for internal consistency; returns findings, never raises."""
    findings: list[Finding] = []
    seen: set[tuple[str, int]] = set()
    for r in ds.records:
        if r.key in seen:
            findings.append(Finding("error", "duplicate-record", r.city, r.year,
                                    "duplicate city-year record"))
        seen.add(r.key)
        if r.year not in ds.reporting:
            findings.append(Finding("error", "missing-reporting-year", r.city, r.year,
                                    f"no reporting-rate estimate for year {r.year}"))
        if r.b_p < 0:
            findings.append(Finding("error", "negative-count", r.city, r.year,
                                    f"police count {r.b_p} is negative"))
        if not r.pph > 0:
            findings.append(Finding("error", "nonpositive-pph", r.city, r.year,
                                    f"persons per household {r.pph} must be positive"))
        for name, n in (("n_s", r.n_s), ("n_f", r.n_f)):
            if n is not None and n <= 0:
                findings.append(Finding("error", "nonpositive-population", r.city, r.year,
                                        f"{name} = {n} must be positive"))
        if not r.populations:
            findings.append(Finding("error", "no-population", r.city, r.year,
                                    "both population estimates are absent"))
        elif r.incomplete:
            missing = "n_f" if r.n_f is None else "n_s"
            findings.append(Finding("warning", "single-population", r.city, r.year,
                                    f"{missing} absent; rate bounds use one estimate and the "
                                    "analysis is incomplete"))
    for est in ds.reporting.values():
        if not 0 < est.rate_pct < 100 or est.se_pct < 0:
            findings.append(Finding("error", "bad-reporting-rate", "", est.year,
                                    f"reporting rate {est.rate_pct}% (se {est.se_pct}) out of range"))
    return sorted(findings, key=lambda f: (city_key(f.city), f.year or 0, f.code))


def has_errors(findings: list[Finding]) -> bool:
    return any(f.severity == "error" for f in findings)
