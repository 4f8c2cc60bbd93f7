"""Interval estimates of residential burglary counts and rates.

Police counts are adjusted for the Hierarchy Rule and for victim
underreporting; rates are bounded under two population estimates. Cross-city
and over-time comparisons are classified as sign-identified only when the
intervals are disjoint.
"""

__version__ = "0.1.0"

from .interval import (ConfidenceSpec, Interval, IntervalError, confidence_interval,  # noqa: E402
                       divide_by, overlaps, round_half_away, scale)
from .domain import (CityYearRecord, Dataset, Finding, HierarchyAssumption,  # noqa: E402
                     ReportingRateEstimate, validate)
from .bounds import (BoundsConfig, BoundsResult, DatasetError, DomainError,  # noqa: E402
                     actual_count_bounds, compute_all, households, known_count_bounds,
                     rate_bounds_household, rate_bounds_population, standard_rates)
from .comparison import (ComparisonVerdict, Verdict, compare, compare_cities,  # noqa: E402
                         compare_years, percent_change, relative_gap)
from .ingestion import LoadError, SourceManifest, embedded_reference, load, serialize  # noqa: E402

__all__ = [
    "ConfidenceSpec", "Interval", "IntervalError", "confidence_interval", "divide_by",
    "overlaps", "round_half_away", "scale", "CityYearRecord", "Dataset", "Finding",
    "HierarchyAssumption", "ReportingRateEstimate", "validate", "BoundsConfig",
    "BoundsResult", "DatasetError", "DomainError", "actual_count_bounds", "compute_all",
    "households", "known_count_bounds", "rate_bounds_household", "rate_bounds_population",
    "standard_rates", "ComparisonVerdict", "Verdict", "compare", "compare_cities",
    "compare_years", "percent_change", "relative_gap", "LoadError", "SourceManifest",
    "embedded_reference", "load", "serialize",
]
