"""Report bundles (JSON / CSV / text) and dot-and-interval charts."""

from __future__ import annotations

import csv
import io
import json
import math
from itertools import combinations
from pathlib import Path
from typing import Any, Iterable, Optional, Sequence

from . import __version__
from .bounds import METRICS, BoundsConfig, BoundsResult
from .comparison import ComparisonVerdict, compare_cities, compare_years
from .domain import Dataset, city_key, validate
from .interval import round_half_away

TABLES = ("known_counts", "actual_counts", "rates_population", "rates_household",
          "standard_rates", "comparisons")

# cross-city comparisons discussed for the NC data; skipped when a city is absent
CASE_STUDIES = (("Charlotte", "Wilmington", 2009), ("Charlotte", "Raleigh", 2011))

METRIC_DIGITS = {"b_a": 0, "rate_pop": 0, "rate_hh": 2}


def _r(x: Optional[float], ndigits: int = 0):
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return None
    return round_half_away(x, ndigits)


def default_comparisons(results: Sequence[BoundsResult]) -> list[ComparisonVerdict]:
    """Every within-city year pair plus the cross-city case studies, all metrics."""
    out: list[ComparisonVerdict] = []
    by_city: dict[str, list[BoundsResult]] = {}
    for r in results:
        by_city.setdefault(city_key(r.city), []).append(r)
    for rs in by_city.values():
        years = sorted(r.year for r in rs)
        for y1, y2 in combinations(years, 2):
            for m in METRICS:
                out.append(compare_years(results, rs[0].city, y1, y2, m))
    present = {(city_key(r.city), r.year) for r in results}
    for a, b, year in CASE_STUDIES:
        if (city_key(a), year) in present and (city_key(b), year) in present:
            for m in METRICS:
                out.append(compare_cities(results, a, b, year, m))
    return out


def verdict_row(v: ComparisonVerdict) -> dict[str, Any]:
    metric = v.subject_a.metric if v.subject_a else ""
    nd = METRIC_DIGITS.get(metric, 2)
    return {
        "a_city": v.subject_a.city if v.subject_a else "",
        "a_year": v.subject_a.year if v.subject_a else None,
        "b_city": v.subject_b.city if v.subject_b else "",
        "b_year": v.subject_b.year if v.subject_b else None,
        "metric": metric,
        "a_lb": _r(v.interval_a.lb, nd), "a_ub": _r(v.interval_a.ub, nd),
        "b_lb": _r(v.interval_b.lb, nd), "b_ub": _r(v.interval_b.ub, nd),
        "a_point": _r(v.point_a, nd), "b_point": _r(v.point_b, nd),
        "pct_change": _r(v.point_pct_change, 1),
        "pct_convention": v.pct_convention,
        "verdict": v.verdict.value,
        "incomplete": v.incomplete,
    }


def build_bundle(ds: Dataset, results: Sequence[BoundsResult], config: BoundsConfig,
                 comparisons: Optional[Iterable[ComparisonVerdict]] = None) -> dict[str, Any]:
    if comparisons is None:
        comparisons = default_comparisons(results)
    theta = ds.hierarchy.theta
    reporting = {}
    for year, est in ds.reporting.items():
        pr = est.interval(ds.confidence)
        reporting[str(year)] = {"rate_pct": est.rate_pct, "se_pct": est.se_pct,
                                "ci_lower_pct": _r(pr.lb * 100, 1),
                                "ci_upper_pct": _r(pr.ub * 100, 1)}
    meta = {
        "dataset_label": ds.label,
        "artifact_version": __version__,
        "assumptions": {
            "theta": [theta.lb, theta.ub],
            "confidence_level": ds.confidence.level,
            "z": ds.confidence.z,
            "pop_scale": config.pop_scale,
            "hh_scale": config.hh_scale,
            "pop_basis": config.pop_basis,
            "reporting_rates": reporting,
        },
        "findings": [str(f) for f in validate(ds)],
    }
    tables: dict[str, list[dict[str, Any]]] = {k: [] for k in TABLES}
    for r in results:
        cy = {"city": r.city, "year": r.year}
        tables["known_counts"].append({**cy, "b_p": r.b_p, "lb": _r(r.b_k.lb), "ub": _r(r.b_k.ub)})
        tables["actual_counts"].append({**cy, "lb": _r(r.b_a.lb), "ub": _r(r.b_a.ub)})
        tables["rates_population"].append({**cy, "lb": _r(r.rate_pop.lb), "ub": _r(r.rate_pop.ub),
                                           "incomplete": r.incomplete})
        tables["rates_household"].append({**cy, "h_s": r.h_s, "h_f": r.h_f,
                                          "lb": _r(r.rate_hh.lb, 2), "ub": _r(r.rate_hh.ub, 2),
                                          "incomplete": r.incomplete})
        tables["standard_rates"].append({**cy, "rate_pop": _r(r.std_rate_pop),
                                         "rate_hh": _r(r.std_rate_hh, 2),
                                         "basis": r.std_basis, "note": r.note})
    tables["comparisons"] = [verdict_row(v) for v in comparisons]
    return {"metadata": meta, "tables": tables}


def bundle_json(bundle: dict[str, Any]) -> str:
    return json.dumps(bundle, indent=2, ensure_ascii=False, allow_nan=False) + "\n"


def _cell(v: Any) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def _format_cell(key: str, v: Any) -> str:
    if isinstance(v, float) and not isinstance(v, bool):
        return f"{v:.1f}" if key == "pct_change" else f"{v:.2f}"
    return _cell(v)


def table_csv(rows: Sequence[dict[str, Any]]) -> str:
    buf = io.StringIO()
    if not rows:
        return ""
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(rows[0].keys())
    for row in rows:
        w.writerow(_format_cell(k, v) for k, v in row.items())
    return buf.getvalue()


def table_text(name: str, rows: Sequence[dict[str, Any]]) -> str:
    if not rows:
        return f"{name}\n  (empty)\n"
    keys = list(rows[0].keys())
    cells = [[_format_cell(k, row[k]) for k in keys] for row in rows]
    widths = [max(len(k), *(len(c[i]) for c in cells)) for i, k in enumerate(keys)]
    numeric = [all(c[i] == "" or _looks_numeric(c[i]) for c in cells) for i in range(len(keys))]

    def line(vals):
        return "  ".join(v.rjust(w) if num else v.ljust(w)
                         for v, w, num in zip(vals, widths, numeric)).rstrip()

    out = [name, line(keys), line(["-" * w for w in widths])]
    out += [line(c) for c in cells]
    return "\n".join(out) + "\n"


def _looks_numeric(s: str) -> bool:
    try:
        float(s)
    except ValueError:
        return False
    return True


def bundle_text(bundle: dict[str, Any]) -> str:
    meta = bundle["metadata"]
    a = meta["assumptions"]
    head = [
        f"dataset: {meta['dataset_label']}  (version {meta['artifact_version']})",
        f"theta in [{a['theta'][0]}, {a['theta'][1]}], {a['confidence_level']:g}% CI with z = {a['z']}, "
        f"rates per {a['pop_scale']:g} persons / {a['hh_scale']:g} households, "
        f"point rates on {a['pop_basis']} population",
    ]
    head += [f"note: {f}" for f in meta["findings"]]
    parts = ["\n".join(head) + "\n"]
    parts += [table_text(name, rows) for name, rows in bundle["tables"].items()]
    return "\n".join(parts)


def write_bundle(bundle: dict[str, Any], out_dir: Path, fmt: str) -> list[Path]:
    """Write ``bundle.json`` (always) plus per-table CSVs or a text report."""
    out_dir.mkdir(parents=True, exist_ok=True)
    written = [out_dir / "bundle.json"]
    written[0].write_text(bundle_json(bundle), encoding="utf-8")
    if fmt == "csv":
        for name, rows in bundle["tables"].items():
            p = out_dir / f"{name}.csv"
            p.write_text(table_csv(rows), encoding="utf-8")
            written.append(p)
    elif fmt == "text":
        p = out_dir / "report.txt"
        p.write_text(bundle_text(bundle), encoding="utf-8")
        written.append(p)
    return written


CHART_METRICS = {
    "rate_pop": ("rates_population", "rate_pop",
                 "Residential burglary rate per {scale:,.0f} persons"),
    "rate_hh": ("rates_household", "rate_hh",
                "Residential burglary rate per {scale:,.0f} households"),
}


def render_chart(bundle: dict[str, Any], metric: str) -> str:
    """Dot-and-interval SVG: one panel per city, one bar plus marker per year.

    Values are read from the bundle, so the chart shows nothing the JSON does
    not. Each bar and marker carries an SVG id (``interval-<city>-<year>``,
    ``point-<city>-<year>``).
    """
    if metric not in CHART_METRICS:
        raise KeyError(f"charts are available for {sorted(CHART_METRICS)}, not {metric!r}")
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    table, std_key, title = CHART_METRICS[metric]
    scale = bundle["metadata"]["assumptions"]["pop_scale" if metric == "rate_pop" else "hh_scale"]
    intervals = bundle["tables"][table]
    points = {(r["city"], r["year"]): r[std_key] for r in bundle["tables"]["standard_rates"]}
    cities: list[str] = []
    for r in intervals:
        if r["city"] not in cities:
            cities.append(r["city"])

    with matplotlib.rc_context({"svg.hashsalt": "burglary-bounds", "svg.fonttype": "none",
                                "font.size": 8}):
        fig, axes = plt.subplots(1, max(len(cities), 1), sharey=True, squeeze=False,
                                 figsize=(max(2.0, 1.3 * len(cities)), 4.0))
        axes = axes[0]
        for ax, city in zip(axes, cities):
            rows = [r for r in intervals if r["city"] == city]
            for i, r in enumerate(rows):
                bar = ax.errorbar([i], [(r["lb"] + r["ub"]) / 2],
                                  yerr=[[(r["ub"] - r["lb"]) / 2], [(r["ub"] - r["lb"]) / 2]],
                                  fmt="none", ecolor="0.2", capsize=3, linewidth=1.5)
                bar.lines[2][0].set_gid(f"interval-{city}-{r['year']}")
                (pt,) = ax.plot([i], [points[(city, r["year"])]], marker="o", color="tab:red",
                                markersize=4, linestyle="none")
                pt.set_gid(f"point-{city}-{r['year']}")
                if r["incomplete"]:
                    ax.annotate("incomplete", (i, r["ub"]), textcoords="offset points",
                                xytext=(0, 4), ha="center", fontsize=6, style="italic",
                                gid=f"incomplete-{city}-{r['year']}")
            ax.set_xticks(range(len(rows)), [str(r["year"]) for r in rows], rotation=90)
            ax.set_xlim(-0.7, len(rows) - 0.3)
            ax.set_title(city, fontsize=7)
        axes[0].set_ylabel("rate")
        fig.suptitle(title.format(scale=scale) + "  (bars: bounds, dots: point estimates)")
        fig.tight_layout()
        buf = io.StringIO()
        fig.savefig(buf, format="svg", metadata={"Date": None})
        plt.close(fig)
    return buf.getvalue()


def write_chart(bundle: dict[str, Any], metric: str, path: Path) -> Path:
    path.write_text(render_chart(bundle, metric), encoding="utf-8")
    return path
