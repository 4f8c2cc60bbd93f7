"""Read and write datasets as four CSV files, plus the bundled NC reference data.

File layouts (UTF-8, header row required, comma-delimited):

    counts.csv       city,year,b_p
    populations.csv  city,year,n_s,n_f     either population may be empty
    pph.csv          city,pph              optional ``year`` column overrides per year
    reporting.csv    year,rate_pct,se_pct

A manifest is a small JSON object naming the four files (paths relative to
the manifest) and a ``dataset_label``.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterator, Optional

from .domain import (CityYearRecord, Dataset, Finding, HierarchyAssumption,
                     ReportingRateEstimate, city_key, has_errors, validate)
from .interval import ConfidenceSpec

COLUMNS = {
    "counts": ("city", "year", "b_p"),
    "populations": ("city", "year", "n_s", "n_f"),
    "pph": ("city", "pph"),
    "reporting": ("year", "rate_pct", "se_pct"),
}
OPTIONAL_COLUMNS = {"pph": ("year",)}


class LoadError(ValueError):
    """Input files could not be turned into a valid dataset."""

    def __init__(self, message: str, findings: Optional[list[Finding]] = None):
        super().__init__(message)
        self.findings = findings or []


@dataclass(frozen=True, slots=True)
class SourceManifest:
    counts_path: Path
    populations_path: Path
    pph_path: Path
    reporting_path: Path
    dataset_label: str = ""

    @classmethod
    def from_json(cls, path: str | Path) -> SourceManifest:
        path = Path(path)
        try:
            raw = json.loads(path.read_text(encoding="utf-8"))
        except FileNotFoundError:
            raise LoadError(f"manifest not found: {path}") from None
        except json.JSONDecodeError as exc:
            raise LoadError(f"{path}: malformed manifest JSON ({exc})") from None
        base = path.parent
        try:
            return cls(*(base / raw[k] for k in
                         ("counts_path", "populations_path", "pph_path", "reporting_path")),
                       dataset_label=raw.get("dataset_label", ""))
        except KeyError as exc:
            raise LoadError(f"{path}: manifest missing field {exc.args[0]}") from None

    def to_json(self, base: Path) -> str:
        doc = {"dataset_label": self.dataset_label}
        for k in ("counts_path", "populations_path", "pph_path", "reporting_path"):
            doc[k] = Path(getattr(self, k)).relative_to(base).as_posix()
        return json.dumps(doc, indent=2) + "\n"


def _rows(path: Path, kind: str) -> Iterator[tuple[int, dict[str, str]]]:
    try:
        fh = open(path, encoding="utf-8", newline="")
    except FileNotFoundError:
        raise LoadError(f"missing file: {path}") from None
    with fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames
        if not header:
            if kind == "counts":
                raise LoadError(f"{path}: no records")
            raise LoadError(f"{path}: missing header row")
        header = [h.strip() for h in header]
        allowed = set(COLUMNS[kind]) | set(OPTIONAL_COLUMNS.get(kind, ()))
        unknown = [h for h in header if h not in allowed]
        if unknown:
            raise LoadError(f"{path}:1: unknown column(s) {', '.join(unknown)}")
        missing = [c for c in COLUMNS[kind] if c not in header]
        if missing:
            raise LoadError(f"{path}:1: missing column(s) {', '.join(missing)}")
        reader.fieldnames = header
        for row in reader:
            if None in row or any(v is None for v in row.values()):
                raise LoadError(f"{path}:{reader.line_num}: malformed row (wrong field count)")
            if not any(v.strip() for v in row.values()):
                continue
            yield reader.line_num, {k: v.strip() for k, v in row.items()}


def _num(raw: str, conv, where: str, name: str, *, optional: bool = False):
    if raw == "":
        if optional:
            return None
        raise LoadError(f"{where}: empty value for {name}")
    try:
        return conv(raw)
    except ValueError:
        raise LoadError(f"{where}: cannot parse {name} = {raw!r}") from None


def load(manifest: SourceManifest, *,
         hierarchy: HierarchyAssumption = HierarchyAssumption(),
         confidence: ConfidenceSpec = ConfidenceSpec()) -> Dataset:
    """Build a validated ``Dataset``; raises ``LoadError`` on any error finding."""
    counts: dict[tuple[str, int], tuple[str, int, int]] = {}
    for line, row in _rows(Path(manifest.counts_path), "counts"):
        where = f"{manifest.counts_path}:{line}"
        year = _num(row["year"], int, where, "year")
        key = (city_key(row["city"]), year)
        if key in counts:
            raise LoadError(f"{where}: duplicate key ({row['city']}, {year})")
        counts[key] = (row["city"], year, _num(row["b_p"], int, where, "b_p"))
    if not counts:
        raise LoadError(f"{manifest.counts_path}: no records")

    pops: dict[tuple[str, int], tuple[Optional[int], Optional[int]]] = {}
    for line, row in _rows(Path(manifest.populations_path), "populations"):
        where = f"{manifest.populations_path}:{line}"
        key = (city_key(row["city"]), _num(row["year"], int, where, "year"))
        if key in pops:
            raise LoadError(f"{where}: duplicate key ({row['city']}, {key[1]})")
        pops[key] = (_num(row["n_s"], int, where, "n_s", optional=True),
                     _num(row["n_f"], int, where, "n_f", optional=True))

    pph_city: dict[str, float] = {}
    pph_year: dict[tuple[str, int], float] = {}
    for line, row in _rows(Path(manifest.pph_path), "pph"):
        where = f"{manifest.pph_path}:{line}"
        value = _num(row["pph"], float, where, "pph")
        year = _num(row.get("year", ""), int, where, "year", optional=True)
        target, key = (pph_city, city_key(row["city"])) if year is None else \
            (pph_year, (city_key(row["city"]), year))
        if key in target:
            raise LoadError(f"{where}: duplicate pph entry for {row['city']}")
        target[key] = value

    reporting: dict[int, ReportingRateEstimate] = {}
    for line, row in _rows(Path(manifest.reporting_path), "reporting"):
        where = f"{manifest.reporting_path}:{line}"
        year = _num(row["year"], int, where, "year")
        if year in reporting:
            raise LoadError(f"{where}: duplicate reporting year {year}")
        reporting[year] = ReportingRateEstimate(
            year, _num(row["rate_pct"], float, where, "rate_pct"),
            _num(row["se_pct"], float, where, "se_pct"))

    records = []
    for key, (city, year, b_p) in counts.items():
        if key not in pops:
            raise LoadError(f"{manifest.populations_path}: no population row for {city} {year}")
        pph = pph_year.get(key, pph_city.get(key[0]))
        if pph is None:
            raise LoadError(f"{manifest.pph_path}: no persons-per-household value for {city}")
        n_s, n_f = pops[key]
        records.append(CityYearRecord(city, year, b_p, n_s, n_f, pph))

    ds = Dataset(tuple(records), reporting, hierarchy, confidence, manifest.dataset_label)
    findings = validate(ds)
    if has_errors(findings):
        errors = "; ".join(str(f) for f in findings if f.severity == "error")
        raise LoadError(errors, findings)
    return ds


def _fmt_pph(x: float) -> str:
    return f"{x:.2f}" if round(x, 2) == x else repr(x)


def _opt(n: Optional[int]) -> str:
    return "" if n is None else str(n)


def serialize(ds: Dataset, directory: str | Path) -> SourceManifest:
    """Write ``ds`` as the four CSV files plus ``manifest.json`` into ``directory``."""
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    m = SourceManifest(out / "counts.csv", out / "populations.csv", out / "pph.csv",
                       out / "reporting.csv", ds.label)
    recs = list(ds.records)

    def write(path: Path, header, rows) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            w.writerows(rows)

    write(m.counts_path, COLUMNS["counts"], [(r.city, r.year, r.b_p) for r in recs])
    write(m.populations_path, COLUMNS["populations"],
          [(r.city, r.year, _opt(r.n_s), _opt(r.n_f)) for r in recs])

    by_city: dict[str, list[CityYearRecord]] = {}
    for r in recs:
        by_city.setdefault(r.city, []).append(r)
    if all(len({r.pph for r in rs}) == 1 for rs in by_city.values()):
        write(m.pph_path, COLUMNS["pph"], [(c, _fmt_pph(rs[0].pph)) for c, rs in by_city.items()])
    else:
        write(m.pph_path, ("city", "year", "pph"), [(r.city, r.year, _fmt_pph(r.pph)) for r in recs])

    write(m.reporting_path, COLUMNS["reporting"],
          [(e.year, repr(e.rate_pct), repr(e.se_pct)) for e in ds.reporting.values()])
    (out / "manifest.json").write_text(m.to_json(out), encoding="utf-8")
    return m


def reference_manifest() -> SourceManifest:
    """Manifest pointing at the NC 2009-2011 CSVs shipped inside the package."""
    data = resources.files("burglary_bounds") / "data" / "manifest.json"
    with resources.as_file(data) as path:
        return SourceManifest.from_json(path)


def embedded_reference(*, hierarchy: HierarchyAssumption = HierarchyAssumption(),
                       confidence: ConfidenceSpec = ConfidenceSpec()) -> Dataset:
    """The ten North Carolina cities, 2009-2011, Greensboro 2011 lacking n_f."""
    return load(reference_manifest(), hierarchy=hierarchy, confidence=confidence)
