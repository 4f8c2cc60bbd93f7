"""Monte Carlo check that the bounds capture a known ground truth.

Generative model: each of ``true_count`` burglaries is reported with
probability ``p_r_true``; each reported one is independently upgraded away by
the Hierarchy Rule with probability ``upgrade_frac_true``. The police count is
what survives. In expectation this gives ``b_k = b_a * p_r`` and
``b_p = b_k / (1 + theta)`` with ``theta = u / (1 - u)``.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Any

import numpy as np

from .bounds import actual_count_bounds, known_count_bounds
from .interval import Interval

RNG_ALGORITHM = "numpy Philox4x64-10; per-trial stream SeedSequence(seed, spawn_key=(trial,))"

# relative slack for closed-endpoint containment under float rounding
_REL_TOL = 1e-12


class ScenarioError(ValueError):
    pass


class OutOfAssumptionWarning(UserWarning):
    pass


def theta_to_upgrade(theta: float) -> float:
    return theta / (1.0 + theta)


def upgrade_to_theta(u: float) -> float:
    return u / (1.0 - u)


@dataclass(frozen=True)
class SimScenario:
    true_count: int
    p_r_true: float
    upgrade_frac_true: float
    trials: int
    seed: int
    assumed_theta: Interval
    assumed_pr: Interval

    def __post_init__(self) -> None:
        if self.true_count < 1:
            raise ScenarioError("true_count must be a positive integer")
        if not 0 < self.p_r_true <= 1:
            raise ScenarioError("p_r_true must lie in (0, 1]")
        if not 0 <= self.upgrade_frac_true < 1:
            raise ScenarioError("upgrade_frac_true must lie in [0, 1)")
        if self.trials < 1:
            raise ScenarioError("trials must be at least 1")
        if not 0 <= self.seed < 2**64:
            raise ScenarioError("seed must be a 64-bit unsigned integer")
        if self.assumed_pr.lb <= 0 or self.assumed_pr.ub > 1:
            raise ScenarioError("assumed_pr must lie within (0, 1]")

    @property
    def theta_true(self) -> float:
        return upgrade_to_theta(self.upgrade_frac_true)

    @classmethod
    def from_theta(cls, *, theta_true: float, **kw) -> SimScenario:
        return cls(upgrade_frac_true=theta_to_upgrade(theta_true), **kw)

    @classmethod
    def from_dict(cls, doc: dict[str, Any]) -> SimScenario:
        """Build from a JSON-style dict; intervals are ``[lb, ub]`` pairs.

        ``theta_true`` may be given instead of ``upgrade_frac_true``.
        """
        doc = dict(doc)
        if "theta_true" in doc:
            if "upgrade_frac_true" in doc:
                raise ScenarioError("give either theta_true or upgrade_frac_true, not both")
            doc["upgrade_frac_true"] = theta_to_upgrade(float(doc.pop("theta_true")))
        fields = ("true_count", "p_r_true", "upgrade_frac_true", "trials", "seed",
                  "assumed_theta", "assumed_pr")
        for f in fields:
            if f not in doc:
                raise ScenarioError(f"{f} required")
        extra = set(doc) - set(fields)
        if extra:
            raise ScenarioError(f"unknown field(s): {', '.join(sorted(extra))}")
        try:
            ivs = {k: Interval(*map(float, doc[k])) for k in ("assumed_theta", "assumed_pr")}
            for k in ("true_count", "trials", "seed"):
                if isinstance(doc[k], bool) or int(doc[k]) != doc[k]:
                    raise ScenarioError(f"{k} must be an integer")
            return cls(int(doc["true_count"]), float(doc["p_r_true"]),
                       float(doc["upgrade_frac_true"]), int(doc["trials"]), int(doc["seed"]),
                       **ivs)
        except (TypeError, ValueError) as exc:
            if isinstance(exc, ScenarioError):
                raise
            raise ScenarioError(f"invalid scenario: {exc}") from None

    @classmethod
    def from_json(cls, path: str | Path) -> SimScenario:
        try:
            doc = json.loads(Path(path).read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ScenarioError(f"{path}: malformed JSON ({exc})") from None
        if not isinstance(doc, dict):
            raise ScenarioError(f"{path}: scenario must be a JSON object")
        return cls.from_dict(doc)

    def to_dict(self) -> dict[str, Any]:
        d = asdict(self)
        d["assumed_theta"] = list(self.assumed_theta)
        d["assumed_pr"] = list(self.assumed_pr)
        return d


@dataclass(frozen=True)
class CoverageReport:
    trials: int
    covered_count: int
    covered_expectation: bool
    coverage_rate: float
    mean_interval_width: float
    in_assumption: bool
    rng_algorithm: str
    scenario: dict[str, Any]

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2) + "\n"


def _rng(seed: int, trial_index: int) -> np.random.Generator:
    ss = np.random.SeedSequence(seed, spawn_key=(trial_index,))
    return np.random.Generator(np.random.Philox(ss))


def simulate_observation(sc: SimScenario, trial_index: int) -> int:
    """Draw one police count; the same ``(seed, trial_index)`` gives the same draw."""
    rng = _rng(sc.seed, trial_index)
    known = int(rng.binomial(sc.true_count, sc.p_r_true))
    upgraded = int(rng.binomial(known, sc.upgrade_frac_true))
    return known - upgraded


def bounds_from_observation(b_p: float, sc: SimScenario) -> Interval:
    return actual_count_bounds(known_count_bounds(b_p, sc.assumed_theta), sc.assumed_pr)


def _within(iv: Interval, x: float) -> bool:
    slack = _REL_TOL * max(abs(x), 1.0)
    return iv.lb - slack <= x <= iv.ub + slack


def in_assumption(sc: SimScenario) -> bool:
    return _within(sc.assumed_pr, sc.p_r_true) and _within(sc.assumed_theta, sc.theta_true)


def deterministic_coverage(sc: SimScenario) -> bool:
    """Does the interval built from the expected police count contain the truth?

    Guaranteed true when the true parameters sit inside the assumed intervals.
    Outside them the containment is still computed, with an
    ``OutOfAssumptionWarning``.
    """
    if not in_assumption(sc):
        warnings.warn("scenario parameters fall outside the assumed intervals",
                      OutOfAssumptionWarning, stacklevel=2)
    expected_bp = sc.true_count * sc.p_r_true * (1.0 - sc.upgrade_frac_true)
    return _within(bounds_from_observation(expected_bp, sc), sc.true_count)


def run_coverage(sc: SimScenario) -> CoverageReport:
    covered = 0
    width = 0.0
    for t in range(sc.trials):
        iv = bounds_from_observation(simulate_observation(sc, t), sc)
        covered += iv.contains(sc.true_count)
        width += iv.width
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", OutOfAssumptionWarning)
        expectation = deterministic_coverage(sc)
    return CoverageReport(
        trials=sc.trials, covered_count=covered, covered_expectation=expectation,
        coverage_rate=covered / sc.trials, mean_interval_width=width / sc.trials,
        in_assumption=in_assumption(sc), rng_algorithm=RNG_ALGORITHM, scenario=sc.to_dict(),
    )
