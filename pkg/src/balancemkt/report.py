"""Results bundles, summary tables and plots.

A results bundle is a directory of plain CSV tables plus ``metadata.json``:

``volumes.csv``      p_percent, member, up_volume_gwh, down_volume_gwh
``costs.csv``        p_percent, member, up_cost_eur, down_cost_eur
``prices.csv``       p_percent, hour, price_eur_mwh (one row per cleared up session)
``profits.csv``      p_percent, member, technology, daily_profit_eur
``profit_means.csv`` p_percent, technology, mean_profit_eur, n_sessions

Floats are written with ``repr`` so reading a bundle back gives the exact
same samples.  :func:`render_report` writes the bundle tables plus
``summary.csv`` and SVG charts.
"""
from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from . import svg
from .engine import ExperimentResults, ShareResults
from .grid_model import TECHNOLOGIES
from .stats import freedman_diaconis_edges, histogram, skewness, summarize

BUNDLE_TABLES = ("volumes.csv", "costs.csv", "prices.csv", "profits.csv", "profit_means.csv")


def _num(x) -> str:
    return repr(float(x))


def _pct(p: float) -> str:
    return f"{100 * p:g}%"


def _write_csv(path: Path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def _tables(results: ExperimentResults) -> dict:
    vol, cost, price, prof, means = [], [], [], [], []
    for p, sh in results.shares.items():
        for j, (u, d) in enumerate(zip(sh.up_volume_gwh, sh.down_volume_gwh)):
            vol.append((_num(p), j, _num(u), _num(d)))
        for j, (u, d) in enumerate(zip(sh.up_cost_eur, sh.down_cost_eur)):
            cost.append((_num(p), j, _num(u), _num(d)))
        for h, v in zip(sh.price_hour, sh.price_eur_mwh):
            price.append((_num(p), int(h), _num(v)))
        for tech in TECHNOLOGIES:
            for j, v in enumerate(sh.tech_daily_profit.get(tech, ())):
                prof.append((_num(p), j, tech, _num(v)))
            means.append((_num(p), tech, _num(sh.tech_profit_mean.get(tech, 0.0)), sh.n_sessions))
    return {
        "volumes.csv": (("p_percent", "member", "up_volume_gwh", "down_volume_gwh"), vol),
        "costs.csv": (("p_percent", "member", "up_cost_eur", "down_cost_eur"), cost),
        "prices.csv": (("p_percent", "hour", "price_eur_mwh"), price),
        "profits.csv": (("p_percent", "member", "technology", "daily_profit_eur"), prof),
        "profit_means.csv": (("p_percent", "technology", "mean_profit_eur", "n_sessions"), means),
    }


def _check_nonempty(results: ExperimentResults):
    if not results.shares:
        raise ValueError("results hold no renewable share (empty P% list)")


def write_results(results: ExperimentResults, out_dir) -> list[Path]:
    """Write a results bundle; returns the files written."""
    _check_nonempty(results)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for name, (header, rows) in _tables(results).items():
        _write_csv(out / name, header, rows)
        written.append(out / name)
    meta = out / "metadata.json"
    meta.write_text(json.dumps(results.metadata, indent=1, sort_keys=True) + "\n")
    written.append(meta)
    return written


def _read_rows(path: Path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def read_results(bundle_dir) -> ExperimentResults:
    """Inverse of :func:`write_results`."""
    d = Path(bundle_dir)
    missing = [n for n in BUNDLE_TABLES if not (d / n).is_file()]
    if missing:
        raise FileNotFoundError(f"{d}: not a results bundle, missing {', '.join(missing)}")
    meta = json.loads((d / "metadata.json").read_text()) if (d / "metadata.json").is_file() else {}

    shares: dict[float, dict] = {}

    def share(p):
        return shares.setdefault(float(p), {"vol": {}, "cost": {}, "price": [], "prof": {}, "mean": {}, "n": 0})

    for r in _read_rows(d / "volumes.csv"):
        share(r["p_percent"])["vol"][int(r["member"])] = (float(r["up_volume_gwh"]), float(r["down_volume_gwh"]))
    for r in _read_rows(d / "costs.csv"):
        share(r["p_percent"])["cost"][int(r["member"])] = (float(r["up_cost_eur"]), float(r["down_cost_eur"]))
    for r in _read_rows(d / "prices.csv"):
        share(r["p_percent"])["price"].append((int(r["hour"]), float(r["price_eur_mwh"])))
    for r in _read_rows(d / "profits.csv"):
        share(r["p_percent"])["prof"].setdefault(r["technology"], {})[int(r["member"])] = float(r["daily_profit_eur"])
    for r in _read_rows(d / "profit_means.csv"):
        s = share(r["p_percent"])
        s["mean"][r["technology"]] = float(r["mean_profit_eur"])
        s["n"] = int(r["n_sessions"])

    def ordered(m: dict, k=None):
        keys = sorted(m)
        return np.array([m[j] if k is None else m[j][k] for j in keys], dtype=float)

    out = {}
    for p, s in shares.items():
        price = s["price"]
        out[p] = ShareResults(
            p,
            ordered(s["vol"], 0), ordered(s["vol"], 1),
            ordered(s["cost"], 0), ordered(s["cost"], 1),
            np.array([h for h, _ in price], dtype=int), np.array([v for _, v in price], dtype=float),
            dict(s["mean"]), {tech: ordered(v) for tech, v in s["prof"].items()}, s["n"],
        )
    return ExperimentResults(out, meta)


# ---------------------------------------------------------------------------
# summary and charts

_OBSERVABLES = (
    ("up_volume_gwh", "daily up-market volume [GWh]"),
    ("down_volume_gwh", "daily down-market volume [GWh]"),
    ("up_cost_eur", "daily up-market cost [EUR]"),
    ("down_cost_eur", "daily down-market cost [EUR]"),
    ("price_eur_mwh", "up-market session price [EUR/MWh]"),
)


def summary_rows(results: ExperimentResults) -> list[tuple]:
    rows = []
    for p, sh in results.shares.items():
        for attr, _ in _OBSERVABLES:
            x = np.asarray(getattr(sh, attr), dtype=float)
            if x.size == 0:
                rows.append((_num(p), attr, 0) + ("",) * 9)
                continue
            b = summarize(x)
            try:
                sk = _num(skewness(x))
            except ValueError:
                sk = ""
            rows.append((_num(p), attr, b.n, _num(b.mean), _num(b.median), _num(b.q1), _num(b.q3),
                         _num(b.whisker_low), _num(b.whisker_high), len(b.outliers), sk))
    return rows


SUMMARY_HEADER = ("p_percent", "observable", "n", "mean", "median", "q1", "q3", "whisker_low", "whisker_high",
                  "n_outliers", "skewness")


def _histogram_chart(results, attr, label, scale=1.0):
    samples = {p: np.asarray(getattr(sh, attr), dtype=float) * scale for p, sh in results.shares.items()}
    pooled = np.concatenate([x for x in samples.values() if x.size] or [np.zeros(1)])
    edges = freedman_diaconis_edges(pooled)
    if len(edges) > 41:
        edges = np.linspace(edges[0], edges[-1], 41)
    centers = 0.5 * (edges[1:] + edges[:-1])
    series = {}
    for p, x in samples.items():
        series[_pct(p)] = histogram(x, edges).frequencies if x.size else np.zeros(len(centers))
    return svg.grouped_bars([f"{c:.3g}" for c in centers], series, f"Distribution of {label}", label,
                            "relative frequency")


def _boxplot_chart(results, attr, label, scale=1.0):
    labels, stats = [], []
    for p, sh in results.shares.items():
        x = np.asarray(getattr(sh, attr), dtype=float) * scale
        labels.append(_pct(p))
        stats.append(summarize(x) if x.size else None)
    return svg.boxplots(labels, stats, label, "renewable share of load", label)


def _price_by_hour_chart(results):
    hours = list(range(24))
    series = {}
    for p, sh in results.shares.items():
        med = []
        for h in hours:
            x = sh.price_eur_mwh[sh.price_hour == h]
            med.append(float(np.median(x)) if x.size else float("nan"))
        series[_pct(p)] = med
    return svg.grouped_bars(hours, series, "Median up-market price by hour", "hour of day", "price [EUR/MWh]")


def _profit_chart(results):
    series = {_pct(p): [sh.tech_profit_mean.get(t, 0.0) for t in TECHNOLOGIES] for p, sh in results.shares.items()}
    return svg.grouped_bars(list(TECHNOLOGIES), series, "Average profit per session by technology", "technology",
                            "profit [EUR]")


def render_report(results: ExperimentResults, out_dir) -> list[Path]:
    """Write the bundle tables, ``summary.csv`` and the SVG charts."""
    _check_nonempty(results)
    out = Path(out_dir)
    written = write_results(results, out)
    _write_csv(out / "summary.csv", SUMMARY_HEADER, summary_rows(results))
    written.append(out / "summary.csv")
    charts = {
        "volume_up_histogram.svg": _histogram_chart(results, "up_volume_gwh", "daily up-market volume [GWh]"),
        "volume_up_boxplot.svg": _boxplot_chart(results, "up_volume_gwh", "daily up-market volume [GWh]"),
        "volume_down_boxplot.svg": _boxplot_chart(results, "down_volume_gwh", "daily down-market volume [GWh]"),
        "cost_up_histogram.svg": _histogram_chart(results, "up_cost_eur", "daily up-market cost [MEUR]", 1e-6),
        "cost_up_boxplot.svg": _boxplot_chart(results, "up_cost_eur", "daily up-market cost [MEUR]", 1e-6),
        "price_by_hour.svg": _price_by_hour_chart(results),
        "price_boxplot.svg": _boxplot_chart(results, "price_eur_mwh", "up-market session price [EUR/MWh]"),
        "profit_by_technology.svg": _profit_chart(results),
    }
    for name, text in charts.items():
        (out / name).write_text(text)
        written.append(out / name)
    return written


def write_wind_comparison(summary: dict, path) -> None:
    rows = []
    for p, models in summary.items():
        for name, v in models.items():
            rows.append((_num(p), name, _num(v["mode"]), _num(v["mean"])))
    _write_csv(Path(path), ("p_percent", "wind_model", "mode_gwh", "mean_gwh"), rows)


__all__ = ["write_results", "read_results", "render_report", "summary_rows", "write_wind_comparison"]
