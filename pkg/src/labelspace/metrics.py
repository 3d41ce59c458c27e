"""Multi-label quality measures over boolean label matrices.

Everything is counted in integers and divided once at the end. Vacuous
agreement (no positives on either side) scores as perfect: per-label or
pooled F1 with TP = FP = FN = 0 is 1.0, and the Jaccard score of a row with
empty truth and empty prediction is 1.0.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

__all__ = [
    "MEASURES",
    "HIGHER_IS_BETTER",
    "MetricValue",
    "micro_f1",
    "macro_f1",
    "subset_accuracy",
    "jaccard",
    "hamming_loss",
    "evaluate",
]

MEASURES = ("micro_f1", "macro_f1", "subset_accuracy", "jaccard", "hamming_loss")
HIGHER_IS_BETTER = {m: m != "hamming_loss" for m in MEASURES}


@dataclass(frozen=True)
class MetricValue:
    measure: str
    value: float

    @property
    def higher_is_better(self) -> bool:
        return HIGHER_IS_BETTER[self.measure]


def _check(Y, Y_hat):
    Y = np.asarray(Y, dtype=bool)
    Y_hat = np.asarray(Y_hat, dtype=bool)
    if Y.shape != Y_hat.shape or Y.ndim != 2:
        raise ValueError(f"shape mismatch: {Y.shape} vs {Y_hat.shape}")
    return Y, Y_hat


def _f1(tp: int, fp: int, fn: int) -> Fraction:
    denom = 2 * tp + fp + fn
    return Fraction(1) if denom == 0 else Fraction(2 * tp, denom)


def micro_f1(Y, Y_hat) -> float:
    Y, Y_hat = _check(Y, Y_hat)
    tp = int(np.sum(Y & Y_hat))
    fp = int(np.sum(~Y & Y_hat))
    fn = int(np.sum(Y & ~Y_hat))
    return float(_f1(tp, fp, fn))


def macro_f1(Y, Y_hat) -> float:
    Y, Y_hat = _check(Y, Y_hat)
    tp = np.sum(Y & Y_hat, axis=0).tolist()
    fp = np.sum(~Y & Y_hat, axis=0).tolist()
    fn = np.sum(Y & ~Y_hat, axis=0).tolist()
    total = sum((_f1(*c) for c in zip(tp, fp, fn)), Fraction(0))
    return float(total / Y.shape[1])


def subset_accuracy(Y, Y_hat) -> float:
    Y, Y_hat = _check(Y, Y_hat)
    return int(np.all(Y == Y_hat, axis=1).sum()) / Y.shape[0]


def jaccard(Y, Y_hat) -> float:
    Y, Y_hat = _check(Y, Y_hat)
    inter = np.sum(Y & Y_hat, axis=1).tolist()
    union = np.sum(Y | Y_hat, axis=1).tolist()
    total = sum(
        (Fraction(1) if u == 0 else Fraction(i, u) for i, u in zip(inter, union)),
        Fraction(0),
    )
    return float(total / Y.shape[0])


def hamming_loss(Y, Y_hat) -> float:
    Y, Y_hat = _check(Y, Y_hat)
    return int(np.sum(Y != Y_hat)) / Y.size


_FUNCS = {
    "micro_f1": micro_f1,
    "macro_f1": macro_f1,
    "subset_accuracy": subset_accuracy,
    "jaccard": jaccard,
    "hamming_loss": hamming_loss,
}


def evaluate(Y, Y_hat) -> dict[str, float]:
    """All five measures, keyed by name in :data:`MEASURES` order."""
    return {m: _FUNCS[m](Y, Y_hat) for m in MEASURES}
