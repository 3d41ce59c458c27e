"""Outperformance likelihoods and Friedman / Rom significance testing."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaincc
from scipy.stats import rankdata

from .errors import ValidationError

__all__ = [
    "LikelihoodRecord",
    "SignificanceResult",
    "outperformance_likelihood",
    "chi2_sf",
    "friedman_test",
    "mean_ranks",
    "rom_adjusted_alphas",
    "rom_posthoc",
    "compare_with_control",
]


@dataclass(frozen=True)
class LikelihoodRecord:
    dataset: str
    method: str
    measure: str
    n_beaten: int
    n_rakeld_runs: int

    @property
    def likelihood(self) -> float:
        return self.n_beaten / self.n_rakeld_runs


@dataclass(frozen=True)
class SignificanceResult:
    measure: str
    method: str
    friedman_statistic: float
    raw_p: float
    adjusted_alpha: float
    rejected: bool


def outperformance_likelihood(method_score, rakeld_scores, higher_is_better: bool = True) -> float:
    """Fraction of random-partition runs strictly beaten by ``method_score``.

    Ties count as not beaten.
    """
    runs = np.asarray(rakeld_scores, dtype=float)
    if runs.size == 0:
        raise ValueError("rakeld_scores must be non-empty")
    beaten = runs < method_score if higher_is_better else runs > method_score
    return int(beaten.sum()) / runs.size


def chi2_sf(x: float, df: int) -> float:
    """Upper tail of the chi-square distribution via the regularised gamma Q."""
    if x <= 0:
        return 1.0
    return float(gammaincc(df / 2.0, x / 2.0))


def mean_ranks(scores, higher_is_better: bool = True) -> np.ndarray:
    """Mean rank per column; rank 1 is best within each row, ties averaged."""
    S = np.asarray(scores, dtype=float)
    R = rankdata(-S if higher_is_better else S, axis=1, method="average")
    return R.mean(axis=0)


def friedman_test(scores) -> tuple[float, float]:
    """Classical Friedman chi-square over rows=datasets, columns=methods."""
    S = np.asarray(scores, dtype=float)
    if S.ndim != 2 or S.shape[0] < 2 or S.shape[1] < 2:
        raise ValueError("Friedman test needs at least 2 datasets and 2 methods")
    if not np.all(np.isfinite(S)):
        raise ValueError("scores must be finite")
    N, k = S.shape
    R = rankdata(S, axis=1, method="average").mean(axis=0)
    stat = 12.0 * N / (k * (k + 1)) * float(np.sum(R ** 2)) - 3.0 * N * (k + 1)
    stat = max(stat, 0.0)
    # rank sums of exactly tied rows reproduce (k+1)/2; clear rounding residue
    if math.isclose(stat, 0.0, abs_tol=1e-9):
        stat = 0.0
    return stat, chi2_sf(stat, k - 1)


def rom_adjusted_alphas(m: int, alpha: float = 0.05) -> list[float]:
    """Rom's step-up critical levels, largest p-value first.

    levels[0] = alpha, levels[1] = alpha/2 and for i >= 3
    levels[i-1] = (sum_{j<i} alpha^j - sum_{j=1}^{i-2} C(i,j) levels[j]^(i-j)) / i.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    levels = [alpha, alpha / 2.0]
    for i in range(3, m + 1):
        head = sum(alpha ** j for j in range(1, i))
        tail = sum(math.comb(i, j) * levels[j] ** (i - j) for j in range(1, i - 1))
        levels.append((head - tail) / i)
    return levels[:m]


def rom_posthoc(p_values, alpha: float = 0.05, measure: str = "", friedman_statistic: float = float("nan")):
    """Step-up Rom procedure over named p-values.

    ``p_values`` is a mapping or a sequence of ``(name, p)`` pairs. Results
    come back in input order.
    """
    items = list(p_values.items()) if hasattr(p_values, "items") else list(p_values)
    if not items:
        raise ValueError("p_values must be non-empty")
    for name, p in items:
        if not 0.0 <= p <= 1.0:
            raise ValidationError(f"p-value for {name!r} outside [0, 1]: {p}")
    levels = rom_adjusted_alphas(len(items), alpha)
    order = sorted(range(len(items)), key=lambda i: -items[i][1])
    level_of = {idx: levels[pos] for pos, idx in enumerate(order)}
    rejected = set()
    for pos, idx in enumerate(order):
        if items[idx][1] <= levels[pos]:
            rejected = set(order[pos:])
            break
    return [
        SignificanceResult(
            measure=measure,
            method=name,
            friedman_statistic=friedman_statistic,
            raw_p=float(p),
            adjusted_alpha=level_of[i],
            rejected=i in rejected,
        )
        for i, (name, p) in enumerate(items)
    ]


def compare_with_control(scores, methods, control: int, measure: str = "",
                         alpha: float = 0.05, higher_is_better: bool = True):
    """Friedman test plus Rom-corrected rank comparisons of every method
    against the ``control`` column.

    Each comparison uses z = (R_method - R_control) / sqrt(k(k+1)/(6N)) with a
    two-sided normal p-value.
    """
    S = np.asarray(scores, dtype=float)
    stat, _ = friedman_test(S)
    N, k = S.shape
    R = mean_ranks(S, higher_is_better)
    se = math.sqrt(k * (k + 1) / (6.0 * N))
    pvals = []
    for j, name in enumerate(methods):
        if j == control:
            continue
        z = (R[j] - R[control]) / se
        pvals.append((name, math.erfc(abs(z) / math.sqrt(2.0))))
    return rom_posthoc(pvals, alpha=alpha, measure=measure, friedman_statistic=stat)
