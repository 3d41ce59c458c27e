import csv
import io

import numpy as np
import pytest

from labelspace.experiment import ExperimentReport
from labelspace.metrics import MEASURES
from labelspace.report import MISSING, render_report, summary_stats, write_report
from labelspace.stats import LikelihoodRecord, SignificanceResult


def _report(cells, errors=None):
    """``cells`` maps (dataset, method) to (beaten, runs) for every measure."""
    datasets = sorted({d for d, _ in cells} | set(errors or {}))
    methods = sorted({m for _, m in cells})
    rep = ExperimentReport(datasets=datasets, methods=methods, errors=dict(errors or {}))
    for measure in MEASURES:
        rep.likelihoods[measure] = {
            (d, m): LikelihoodRecord(d, m, measure, b, n) for (d, m), (b, n) in cells.items()
        }
    return rep


def test_single_dataset_summary():
    rep = _report({("d", "BR"): (8, 15), ("d", "LP"): (3, 15)})
    out = render_report(rep, "csv")
    rows = list(csv.reader(io.StringIO(out["summary_jaccard.csv"])))
    assert rows[0] == ["method", "Minimum", "Median", "Mean", "Std"]
    assert rows[1] == ["BR", "0.5333", "0.5333", "0.5333", "0.0000"]
    assert rows[2] == ["LP", "0.2000", "0.2000", "0.2000", "0.0000"]


def test_missing_dataset_cells():
    rep = _report({("a", "BR"): (1, 4), ("b", "BR"): (3, 4)}, errors={"c": "boom"})
    out = render_report(rep, "csv")
    lik = list(csv.reader(io.StringIO(out["likelihood_micro_f1.csv"])))
    assert lik == [["method", "a", "b", "c"], ["BR", "0.2500", "0.7500", MISSING]]
    summ = list(csv.reader(io.StringIO(out["summary_micro_f1.csv"])))
    assert summ[1] == ["BR", "0.2500", "0.5000", "0.5000", "0.2500"]


def test_summary_stats_population_std():
    assert summary_stats([0.0, 1.0, None]) == (0.0, 0.5, 0.5, 0.5)
    assert summary_stats([None]) is None


def test_file_set_and_formats(tmp_path):
    rep = _report({("d", "BR"): (1, 2)})
    rep.significance["micro_f1"] = [SignificanceResult("micro_f1", "BR", 4.5, 0.011, 0.025, True)]
    paths = write_report(rep, tmp_path)
    names = sorted(p.name for p in paths)
    expected = sorted(
        [f"{kind}_{m}.{ext}" for kind in ("likelihood", "summary") for m in MEASURES for ext in ("csv", "md")]
        + ["significance.csv", "significance.md"]
    )
    assert names == expected
    sig = (tmp_path / "significance.csv").read_bytes()
    assert sig.startswith(b"measure,method,friedman_statistic,raw_p,adjusted_alpha,rejected\r\n")
    assert b"micro_f1,BR,4.5,0.011,0.025,yes\r\n" in sig
    md = (tmp_path / "likelihood_jaccard.md").read_text()
    assert "| method | d |" in md and "| BR | 0.5000 |" in md
    assert "not computed" in (tmp_path / "significance.md").read_text()


def test_bad_format():
    with pytest.raises(ValueError):
        render_report(_report({("d", "BR"): (1, 2)}), "html")
