import json

import pytest

from burglary_bounds.domain import ReportingRateEstimate
from burglary_bounds.ingestion import (LoadError, SourceManifest, embedded_reference, load,
                                       reference_manifest, serialize)


def test_reference_shape(reference):
    assert len(reference.records) == 30
    assert len(reference.cities) == 10
    assert reference.years == [2009, 2010, 2011]
    assert len(reference.reporting) == 3


def _find(ds, city, year):
    return next(r for r in ds.records if r.city == city and r.year == year)


def test_reference_contents(reference):
    assert _find(reference, "Charlotte", 2009).b_p == 7766
    assert reference.reporting[2010] == ReportingRateEstimate(2010, 58.8, 1.9)
    fay = _find(reference, "Fayetteville", 2009)
    assert (fay.n_s, fay.n_f) == (205285, 173995)
    gso = _find(reference, "Greensboro", 2011)
    assert gso.n_s == 263279 and gso.n_f is None


def test_round_trip(tmp_path, reference):
    m = serialize(reference, tmp_path)
    assert load(m) == reference
    assert load(SourceManifest.from_json(tmp_path / "manifest.json")) == reference


def test_serialized_files_match_shipped_fixtures(tmp_path, reference):
    serialize(reference, tmp_path)
    shipped = reference_manifest()
    for attr in ("counts_path", "populations_path", "pph_path", "reporting_path"):
        name = getattr(shipped, attr).name
        assert (tmp_path / name).read_bytes() == getattr(shipped, attr).read_bytes()


def test_per_year_pph_round_trips(tmp_path, reference):
    from dataclasses import replace
    recs = [replace(r, pph=2.5) if (r.city, r.year) == ("Cary", 2011) else r
            for r in reference.records]
    ds = replace(reference, records=tuple(recs))
    m = serialize(ds, tmp_path)
    assert m.pph_path.read_text().startswith("city,year,pph\n")
    assert load(m) == ds


@pytest.fixture
def files(tmp_path):
    def make(counts="city,year,b_p\nX,2009,10\n", pops="city,year,n_s,n_f\nX,2009,1000,\n",
             pph="city,pph\nX,2.00\n", rep="year,rate_pct,se_pct\n2009,57.3,1.7\n"):
        for name, text in (("counts.csv", counts), ("populations.csv", pops),
                           ("pph.csv", pph), ("reporting.csv", rep)):
            (tmp_path / name).write_text(text)
        return SourceManifest(tmp_path / "counts.csv", tmp_path / "populations.csv",
                              tmp_path / "pph.csv", tmp_path / "reporting.csv", "t")
    return make


def test_minimal_load(files):
    ds = load(files())
    (r,) = ds.records
    assert (r.b_p, r.n_s, r.n_f, r.pph) == (10, 1000, None, 2.0)


def test_quoted_fields_accepted(files):
    ds = load(files(counts='city,year,b_p\n"X",2009,"10"\n'))
    assert ds.records[0].b_p == 10


def test_duplicate_key_names_line(files):
    m = files(counts="city,year,b_p\nCharlotte,2009,7766\nCharlotte,2009,7766\n",
              pops="city,year,n_s,n_f\nCharlotte,2009,1,1\n", pph="city,pph\nCharlotte,2.46\n")
    with pytest.raises(LoadError, match=r"counts.csv:3: duplicate key"):
        load(m)


@pytest.mark.parametrize("counts", ["", "city,year,b_p\n"])
def test_empty_counts(files, counts):
    with pytest.raises(LoadError, match="no records"):
        load(files(counts=counts))


def test_unparseable_number(files):
    with pytest.raises(LoadError, match=r"counts.csv:2: cannot parse b_p"):
        load(files(counts="city,year,b_p\nX,2009,ten\n"))


def test_unknown_column(files):
    with pytest.raises(LoadError, match="unknown column"):
        load(files(counts="city,year,b_p,extra\nX,2009,10,1\n"))


def test_malformed_row(files):
    with pytest.raises(LoadError, match=r":2: malformed row"):
        load(files(counts="city,year,b_p\nX,2009\n"))


def test_missing_file(files, tmp_path):
    m = files()
    (tmp_path / "pph.csv").unlink()
    with pytest.raises(LoadError, match="missing file"):
        load(m)


def test_error_findings_abort_load(files):
    with pytest.raises(LoadError) as info:
        load(files(rep="year,rate_pct,se_pct\n2010,57.3,1.7\n"))
    assert any(f.code == "missing-reporting-year" for f in info.value.findings)


def test_manifest_paths_relative(tmp_path, files):
    files()
    (tmp_path / "m.json").write_text(json.dumps({
        "counts_path": "counts.csv", "populations_path": "populations.csv",
        "pph_path": "pph.csv", "reporting_path": "reporting.csv"}))
    assert len(load(SourceManifest.from_json(tmp_path / "m.json")).records) == 1


def test_embedded_is_stable():
    assert embedded_reference() == embedded_reference()
