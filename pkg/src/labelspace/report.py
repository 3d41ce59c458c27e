"""Render an :class:`~labelspace.experiment.ExperimentReport` as CSV or markdown tables."""

from __future__ import annotations

import csv
import io
from pathlib import Path

import numpy as np

from .metrics import MEASURES

__all__ = ["render_report", "write_report", "summary_rows", "MISSING"]

MISSING = "—"
SUMMARY_COLUMNS = ("Minimum", "Median", "Mean", "Std")


def _fmt(v) -> str:
    return MISSING if v is None else f"{v:.4f}"


def _fmt_g(v) -> str:
    return f"{v:.4g}"


def summary_stats(values) -> tuple[float, float, float, float] | None:
    """Min / median / mean / population std over the non-missing values."""
    vals = np.array([v for v in values if v is not None], dtype=float)
    if vals.size == 0:
        return None
    return float(vals.min()), float(np.median(vals)), float(vals.mean()), float(vals.std())


def likelihood_rows(report, measure):
    header = ["method"] + list(report.datasets)
    rows = [
        [m] + [_fmt(report.likelihood(measure, d, m)) for d in report.datasets]
        for m in report.methods
    ]
    return header, rows


def summary_rows(report, measure):
    header = ["method", *SUMMARY_COLUMNS]
    rows = []
    for m in report.methods:
        st = summary_stats(report.likelihood(measure, d, m) for d in report.datasets)
        rows.append([m] + ([MISSING] * 4 if st is None else [_fmt(v) for v in st]))
    return header, rows


def significance_rows(report, measure):
    header = ["measure", "method", "friedman_statistic", "raw_p", "adjusted_alpha", "rejected"]
    rows = [
        [r.measure, r.method, _fmt_g(r.friedman_statistic), _fmt_g(r.raw_p),
         _fmt_g(r.adjusted_alpha), "yes" if r.rejected else "no"]
        for r in report.significance.get(measure, [])
    ]
    return header, rows


def _csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _md(header, rows, title=None) -> str:
    lines = [f"## {title}", ""] if title else []
    lines.append("| " + " | ".join(header) + " |")
    lines.append("|" + "|".join("---" for _ in header) + "|")
    lines += ["| " + " | ".join(str(c) for c in row) + " |" for row in rows]
    return "\n".join(lines) + "\n"


def render_report(report, fmt: str = "markdown") -> dict[str, str]:
    """Return ``{filename: text}`` for every table of the report."""
    if fmt not in ("markdown", "csv"):
        raise ValueError("fmt must be 'markdown' or 'csv'")
    ext = "md" if fmt == "markdown" else "csv"
    out = {}
    for measure in MEASURES:
        for kind, builder in (("likelihood", likelihood_rows), ("summary", summary_rows)):
            header, rows = builder(report, measure)
            if fmt == "csv":
                out[f"{kind}_{measure}.csv"] = _csv(header, rows)
            else:
                title = f"{'Likelihood of beating RAkELd' if kind == 'likelihood' else 'Likelihood summary'}: {measure}"
                out[f"{kind}_{measure}.md"] = _md(header, rows, title)
    sig_parts, sig_rows = [], []
    for measure in MEASURES:
        header, rows = significance_rows(report, measure)
        sig_rows += rows
        if fmt == "markdown":
            if rows:
                sig_parts.append(_md(header[1:], [r[1:] for r in rows], f"Friedman + Rom vs mean RAkELd: {measure}"))
            else:
                sig_parts.append(f"## Friedman + Rom vs mean RAkELd: {measure}\n\nnot computed (fewer than 2 completed datasets)\n")
    if fmt == "csv":
        out["significance.csv"] = _csv(significance_rows(report, MEASURES[0])[0], sig_rows)
    else:
        out["significance.md"] = "\n".join(sig_parts)
    return {name: out[name] for name in sorted(out)}


def write_report(report, output_dir, formats=("csv", "markdown")) -> list[Path]:
    output_dir = Path(output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for fmt in formats:
        for name, text in render_report(report, fmt).items():
            path = output_dir / name
            path.write_bytes(text.encode("utf-8"))
            written.append(path)
    return written
