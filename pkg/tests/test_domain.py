import pytest

from burglary_bounds.domain import (CityYearRecord, Dataset, HierarchyAssumption,
                                    ReportingRateEstimate, validate)
from burglary_bounds.interval import Interval

RATES = {y: ReportingRateEstimate(y, 57.3, 1.7) for y in (2009, 2010, 2011)}


def rec(city="Testville", year=2009, b_p=100, n_s=1000, n_f=1000, pph=2.0):
    return CityYearRecord(city, year, b_p, n_s, n_f, pph)


def test_reference_has_single_warning(reference):
    findings = validate(reference)
    assert len(findings) == 1
    (f,) = findings
    assert (f.severity, f.city, f.year, f.code) == ("warning", "Greensboro", 2011, "single-population")
    assert "incomplete" in f.message


def test_empty_dataset_is_clean():
    assert validate(Dataset()) == []


def test_missing_reporting_year_is_an_error():
    ds = Dataset([rec(year=2012)], RATES)
    (f,) = validate(ds)
    assert f.severity == "error" and f.code == "missing-reporting-year"
    assert "2012" in f.message


def test_duplicates_are_case_insensitive():
    ds = Dataset([rec(), rec(city="TESTVILLE")], RATES)
    assert [f.code for f in validate(ds)] == ["duplicate-record"]


def test_each_violation_reported_in_order():
    ds = Dataset([rec(city="B", pph=0), rec(city="A", n_s=None, n_f=None)], RATES)
    codes = [(f.city, f.code) for f in validate(ds)]
    assert codes == [("A", "no-population"), ("B", "nonpositive-pph")]


def test_validate_is_pure_and_deterministic(reference):
    assert validate(reference) == validate(reference)


def test_hierarchy_assumption_bounds():
    with pytest.raises(ValueError):
        HierarchyAssumption(Interval(-0.1, 0.01))
    with pytest.raises(ValueError):
        HierarchyAssumption(Interval(0.1, 1.0))


def test_record_incomplete_flag():
    assert rec(n_f=None).incomplete
    assert not rec().incomplete
    assert rec(n_s=None).populations == (1000,)
