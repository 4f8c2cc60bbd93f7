"""Exit criteria for the NC 2009-2011 reproduction; one PASS/FAIL line each."""

import itertools
import json
import time
from contextlib import contextmanager

import numpy as np
import pytest

from burglary_bounds import (Interval, actual_count_bounds, confidence_interval,
                             divide_by, embedded_reference, households, known_count_bounds,
                             load, percent_change, round_half_away, serialize)
from burglary_bounds.bounds import find_result
from burglary_bounds.cli import main
from burglary_bounds.comparison import Verdict, compare_cities, compare_years
from burglary_bounds.simulator import SimScenario, deterministic_coverage, run_coverage, theta_to_upgrade
from paper_tables import ACTUAL_COUNTS, HOUSEHOLDS, KNOWN_COUNTS, YEARS


@pytest.fixture
def criterion(capsys):
    @contextmanager
    def check(label):
        try:
            yield
        except BaseException:
            with capsys.disabled():
                print(f"\n[FAIL] {label}")
            raise
        with capsys.disabled():
            print(f"\n[PASS] {label}")
    return check


def test_c01_known_counts_exact(criterion, results):
    with criterion("1 known-count bounds match all 60 published values exactly"):
        for city, row in KNOWN_COUNTS.items():
            for i, year in enumerate(YEARS):
                got = find_result(results, city, year).b_k.rounded()
                assert got == row[2 * i: 2 * i + 2], (city, year, got)


def test_c02_actual_counts_within_one(criterion, results):
    with criterion("2 actual-count bounds within +/-1 of all 60 published values"):
        worst = 0
        for city, row in ACTUAL_COUNTS.items():
            for i, year in enumerate(YEARS):
                iv = find_result(results, city, year).b_a
                for got, want in zip(iv.rounded(), row[2 * i: 2 * i + 2]):
                    worst = max(worst, abs(got - want))
                    assert abs(got - want) <= 1, (city, year, got, want)
        assert worst <= 1


def test_c03_households_within_one(criterion, reference):
    with criterion("3 household estimates within +/-1 of the published table"):
        recs = {(r.city, r.year): r for r in reference.records}
        for city, (pph, *hh) in HOUSEHOLDS.items():
            for i, year in enumerate(YEARS):
                rec = recs[city, year]
                assert rec.pph == pph
                for n, want in ((rec.n_s, hh[2 * i]), (rec.n_f, hh[2 * i + 1])):
                    if want is None:
                        assert n is None
                    else:
                        assert abs(households(n, rec.pph) - want) <= 1, (city, year, want)


def test_c04_worked_example(criterion):
    with criterion("4 worked example: [1005, 1010] / [0.540, 0.606] -> [1658, 1870]; 1000/0.573 -> 1745"):
        bk = known_count_bounds(1000, Interval(0.005, 0.01))
        assert bk.rounded() == (1005, 1010)
        assert actual_count_bounds(bk, Interval(0.540, 0.606)).rounded() == (1658, 1870)
        assert round_half_away(1000 / 0.573) == 1745


RATE_TEXT = [
    ("Charlotte", 2009, "rate_pop", (1655, 1967), 1),
    ("Raleigh", 2011, "rate_pop", (1046, 1245), 1),
    ("Charlotte", 2011, "rate_pop", (1456, 1704), 1),
    ("Wilmington", 2009, "rate_pop", (1925, 2216), 1),
    ("Durham", 2009, "rate_pop", (2069, 2398), 1),
    ("Durham", 2011, "rate_pop", (2570, 3068), 1),
    ("Charlotte", 2009, "rate_hh", (40.72, 48.40), 0.05),
    ("Wilmington", 2009, "rate_hh", (42.16, 48.53), 0.05),
]


def test_c05_rate_intervals(criterion, results):
    with criterion("5 eight rate intervals quoted in the text, +/-1 (+/-0.05 per household)"):
        for city, year, metric, (lb, ub), tol in RATE_TEXT:
            iv = find_result(results, city, year).metric(metric)
            assert abs(iv.lb - lb) <= tol and abs(iv.ub - ub) <= tol, (city, year, metric, iv)


def test_c06_verdicts(criterion, results):
    A, B, N = (Verdict.SIGN_IDENTIFIED_A_HIGHER, Verdict.SIGN_IDENTIFIED_B_HIGHER,
               Verdict.NOT_IDENTIFIED)
    with criterion("6 published comparisons resolve as stated"):
        assert compare_cities(results, "Charlotte", "Raleigh", 2011, "rate_pop").verdict is A
        assert compare_cities(results, "Charlotte", "Raleigh", 2011, "rate_hh").verdict is A
        assert compare_cities(results, "Charlotte", "Wilmington", 2009, "rate_pop").verdict is N
        assert compare_cities(results, "Charlotte", "Wilmington", 2009, "rate_hh").verdict is N
        assert compare_years(results, "Charlotte", 2010, 2011, "b_a").verdict is N
        assert compare_years(results, "Asheville", 2010, 2011, "b_a").verdict is B
        assert compare_years(results, "Durham", 2009, 2011, "rate_pop").verdict is B
        assert compare_years(results, "Durham", 2009, 2011, "rate_hh").verdict is B


def test_c07_point_estimates(criterion, results):
    with criterion("7 point rates 1051/818/597/1184 and changes -13.0/+21.4/-22.2/+14.9 (+/-0.1)"):
        for city, year, want in (("Charlotte", 2009, 1051), ("Charlotte", 2011, 818),
                                 ("Raleigh", 2011, 597), ("Wilmington", 2009, 1184)):
            assert round_half_away(find_result(results, city, year).std_rate_pop) == want
        changes = [
            percent_change(7305, 6352),
            percent_change(457, 555),
            compare_years(results, "Charlotte", 2009, 2011, "rate_pop").point_pct_change,
            compare_years(results, "Durham", 2009, 2011, "rate_pop").point_pct_change,
        ]
        for got, want in zip(changes, (-13.0, 21.4, -22.2, 14.9)):
            assert abs(got - want) <= 0.1, (got, want)


def test_c08_confidence_intervals(criterion):
    with criterion("8 survey CIs reproduce the six displayed limits"):
        for point, se, shown in ((57.3, 1.7, (54.0, 60.6)), (58.8, 1.9, (55.1, 62.5)),
                                 (52.0, 1.8, (48.5, 55.5))):
            iv = confidence_interval(point, se)
            assert (round_half_away(iv.lb * 100, 1), round_half_away(iv.ub * 100, 1)) == shown


def test_c09_properties(criterion):
    with criterion("9 soundness grid >= 1e4, nesting/monotonicity, expectation grid, coverage >= 0.99, < 60 s"):
        start = time.perf_counter()
        cases = 0
        for a, w in itertools.product((0.0, 3.0, 1000.0, 7766.0), (0.0, 1.0, 40.0)):
            num = Interval(a, a + w)
            for plb, pw in itertools.product((0.05, 0.485, 0.54, 0.9), (0.0, 0.07)):
                den = Interval(plb, plb + pw)
                out = divide_by(num, den)
                for x, p in itertools.product(np.linspace(num.lb, num.ub, 15),
                                              np.linspace(den.lb, den.ub, 15)):
                    assert out.lb * (1 - 1e-12) <= x / p <= out.ub * (1 + 1e-12)
                    cases += 1
        assert cases >= 10_000

        theta, pr = Interval(0.005, 0.01), confidence_interval(57.3, 1.7)
        for b_p in (0, 1, 457, 7766):
            outer = actual_count_bounds(known_count_bounds(b_p, theta), pr)
            inner = actual_count_bounds(known_count_bounds(b_p, Interval(0.006, 0.009)),
                                        Interval(0.55, 0.60))
            assert inner.issubset(outer)
            bigger = actual_count_bounds(known_count_bounds(b_p + 1, theta), pr)
            assert bigger.lb > outer.lb and bigger.ub > outer.ub

        base = dict(true_count=100_000, trials=1000, seed=20240601,
                    assumed_theta=theta, assumed_pr=pr)
        for p in np.linspace(pr.lb, pr.ub, 10):
            for t in np.linspace(theta.lb, theta.ub, 10):
                sc = SimScenario(p_r_true=float(p), upgrade_frac_true=theta_to_upgrade(float(t)), **base)
                assert deterministic_coverage(sc)

        rep = run_coverage(SimScenario(p_r_true=0.573, upgrade_frac_true=theta_to_upgrade(0.0075), **base))
        assert rep.coverage_rate >= 0.99
        assert rep == run_coverage(SimScenario(p_r_true=0.573,
                                               upgrade_frac_true=theta_to_upgrade(0.0075), **base))
        assert time.perf_counter() - start < 60


def test_c10_round_trip_and_determinism(criterion, tmp_path, capsys):
    with criterion("10 serialize/load round trip; compute --embedded byte-identical twice"):
        ref = embedded_reference()
        assert load(serialize(ref, tmp_path / "ds")) == ref
        outputs = []
        for d in ("one", "two"):
            assert main(["compute", "--embedded", "--format", "csv", "--out", str(tmp_path / d)]) == 0
            outputs.append({p.name: p.read_bytes() for p in (tmp_path / d).iterdir()})
        capsys.readouterr()
        assert outputs[0] == outputs[1]
        json.loads(outputs[0]["bundle.json"])
