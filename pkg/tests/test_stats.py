import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from labelspace import stats
from labelspace.errors import ValidationError

import oracles


def test_likelihood_examples():
    assert stats.outperformance_likelihood(0.8, [0.7, 0.9]) == 0.5
    assert stats.outperformance_likelihood(1.0, [0.1, 0.2, 0.3]) == 1.0
    assert stats.outperformance_likelihood(0.1, [0.2, 0.05], higher_is_better=False) == 0.5
    assert stats.outperformance_likelihood(0.5, [0.5, 0.5]) == 0.0
    with pytest.raises(ValueError):
        stats.outperformance_likelihood(0.5, [])


def test_likelihood_record():
    r = stats.LikelihoodRecord("d", "BR", "jaccard", 3, 50)
    assert r.likelihood == 3 / 50


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(0, 1), min_size=1, max_size=20), st.floats(0, 1), st.floats(0, 1), st.booleans())
def test_likelihood_monotone(runs, a, b, hib):
    lo, hi = sorted((a, b))
    better, worse = (hi, lo) if hib else (lo, hi)
    assert stats.outperformance_likelihood(better, runs, hib) >= stats.outperformance_likelihood(worse, runs, hib)


def test_friedman_examples():
    perfect = [[3, 2, 1]] * 4
    stat, p = stats.friedman_test(perfect)
    assert stat == pytest.approx(8.0, abs=1e-12)
    assert p == pytest.approx(math.exp(-4.0), abs=1e-12)
    assert stats.friedman_test([[0.4, 0.4, 0.4]] * 5) == (0.0, 1.0)
    assert stats.friedman_test([[1, 0], [1, 0]])[0] == pytest.approx(2.0, abs=1e-12)


@pytest.mark.parametrize("bad", [[[1, 2]], [[1], [2]], [[1, float("nan")], [1, 2]]])
def test_friedman_argument_errors(bad):
    with pytest.raises(ValueError):
        stats.friedman_test(bad)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(2, 8), st.integers(2, 6))
def test_friedman_monotone_invariance(seed, N, k):
    rng = np.random.default_rng(seed)
    S = rng.integers(0, 5, size=(N, k)).astype(float)
    T = np.exp(S) * 3 + rng.uniform(-5, 5, size=(N, 1))
    a, b = stats.friedman_test(S), stats.friedman_test(T)
    assert a[0] == pytest.approx(b[0], abs=1e-9)
    assert 0.0 <= a[1] <= 1.0 and a[0] >= 0.0


@pytest.mark.parametrize("x,df", [(0.5, 1), (8.0, 2), (3.3, 5), (40.0, 11), (12.0, 3), (1e-3, 4)])
def test_chi2_tail_against_gamma_oracle(x, df):
    assert stats.chi2_sf(x, df) == pytest.approx(oracles.gamma_q(df / 2, x / 2), abs=1e-8)


def test_rom_levels():
    assert stats.rom_adjusted_alphas(1) == [0.05]
    assert stats.rom_adjusted_alphas(2) == [0.05, 0.025]
    lv = stats.rom_adjusted_alphas(4, 0.05)
    assert lv == pytest.approx([0.05, 0.025, 0.016875, 0.0127134765625], abs=1e-15)
    assert lv == pytest.approx(oracles.rom_levels_reference(4, 0.05), abs=1e-12)
    with pytest.raises(ValueError):
        stats.rom_adjusted_alphas(0)


@pytest.mark.parametrize("alpha", [0.01, 0.05, 0.1])
def test_rom_levels_decreasing_and_above_holm(alpha):
    lv = stats.rom_adjusted_alphas(12, alpha)
    assert all(a > b > 0 for a, b in zip(lv, lv[1:]))
    assert all(level >= alpha / i - 1e-15 for i, level in enumerate(lv, start=1))
    assert lv == pytest.approx(oracles.rom_levels_reference(12, alpha), rel=1e-9)


def test_rom_posthoc_examples():
    (r,) = stats.rom_posthoc({"a": 0.01})
    assert r.rejected
    assert not any(r.rejected for r in stats.rom_posthoc({"a": 0.9, "b": 0.8, "c": 0.7}))
    res = stats.rom_posthoc([("x", 0.003), ("y", 0.011), ("z", 0.37)])
    assert [r.method for r in res] == ["x", "y", "z"]
    assert [r.rejected for r in res] == [True, True, False]
    assert res[2].adjusted_alpha == 0.05 and res[1].adjusted_alpha == 0.025
    with pytest.raises(ValidationError):
        stats.rom_posthoc({"a": 1.5})
    with pytest.raises(ValueError):
        stats.rom_posthoc({})


def test_rom_step_up_rejects_everything_below_first_hit():
    # largest p 0.04 <= 0.05, so all are rejected even though 0.03 > 0.025
    assert all(r.rejected for r in stats.rom_posthoc({"a": 0.04, "b": 0.03}))


@settings(max_examples=80, deadline=None)
@given(st.lists(st.floats(0, 1), min_size=1, max_size=8), st.floats(0.001, 0.5), st.floats(0.001, 0.5))
def test_rom_monotone_in_alpha(ps, a1, a2):
    lo, hi = sorted((a1, a2))
    named = [(str(i), p) for i, p in enumerate(ps)]
    rej_lo = {r.method for r in stats.rom_posthoc(named, lo) if r.rejected}
    rej_hi = {r.method for r in stats.rom_posthoc(named, hi) if r.rejected}
    assert rej_lo <= rej_hi


def test_mean_ranks_direction():
    S = [[0.9, 0.5, 0.1], [0.8, 0.6, 0.2]]
    assert stats.mean_ranks(S).tolist() == [1.0, 2.0, 3.0]
    assert stats.mean_ranks(S, higher_is_better=False).tolist() == [3.0, 2.0, 1.0]


def test_compare_with_control():
    # 6 datasets, control in the middle column; method A always best, B always worst
    S = [[0.9, 0.5, 0.1]] * 6
    res = stats.compare_with_control(S, ["A", "ctrl", "B"], control=1, measure="m")
    assert [r.method for r in res] == ["A", "B"]
    z = 1.0 / math.sqrt(3 * 4 / 36)
    p = math.erfc(z / math.sqrt(2))
    assert all(r.raw_p == pytest.approx(p, abs=1e-12) for r in res)
    assert all(r.friedman_statistic == pytest.approx(12.0, abs=1e-12) for r in res)
    assert all(r.measure == "m" for r in res)
