"""Seed-matched paired statistics: Wilcoxon signed-rank, Holm step-down, Cohen's d_z.

Written against the standard library and numpy so the exact distribution is
under our control; scipy is only used by the test-suite as a cross-check.
"""

from dataclasses import dataclass
import math

import numpy as np

EXACT_MAX_N = 20

# metric name -> sign of a difference that counts as an improvement
IMPROVEMENT_SIGN = {"hull_area": -1, "polarization": +1, "unsafe_events": -1}


@dataclass(frozen=True)
class WilcoxonResult:
    statistic: float
    p_value: float
    n_used: int
    n_zeros: int
    exact: bool


def rankdata_average(x):
    """Ranks 1..n with ties given their average rank."""
    x = np.asarray(x, dtype=float)
    order = np.argsort(x, kind="mergesort")
    ranks = np.empty(len(x))
    xs = x[order]
    i = 0
    while i < len(xs):
        j = i
        while j + 1 < len(xs) and xs[j + 1] == xs[i]:
            j += 1
        ranks[order[i:j + 1]] = 0.5 * (i + j) + 1.0
        i = j + 1
    return ranks


def _exact_two_sided(doubled_ranks, w2_obs):
    """P(|W - mu| >= |w_obs - mu|) under random signs; ranks are doubled so they are integers."""
    total = int(sum(doubled_ranks))
    counts = np.zeros(total + 1, dtype=object)
    counts[0] = 1
    top = 0
    for r in doubled_ranks:
        shifted = np.zeros_like(counts)
        shifted[r:top + r + 1] = counts[:top + 1]
        counts = counts + shifted
        top += r
    # compare in doubled units: |2W2 - total| >= |2w2 - total|
    dev_obs = abs(2 * w2_obs - total)
    sums = np.arange(total + 1)
    hit = np.abs(2 * sums - total) >= dev_obs
    return float(sum(counts[hit])) / float(2 ** len(doubled_ranks))


def wilcoxon_signed_rank(diffs, exact_max_n=EXACT_MAX_N):
    """Two-sided Wilcoxon signed-rank test on paired differences.

    Zeros are dropped before ranking. ``statistic`` is the rank sum of the
    positive differences. For up to ``exact_max_n`` nonzero differences the
    p-value is exact (the full sign-flip distribution, ties included);
    above that a normal approximation with tie and continuity corrections.
    """
    d = np.asarray(diffs, dtype=float)
    if d.size == 0 or not np.all(np.isfinite(d)):
        raise ValueError("differences must be a nonempty finite sample")
    nz = d[d != 0]
    n = nz.size
    if n == 0:
        raise ValueError("degenerate sample: every difference is zero")
    ranks = rankdata_average(np.abs(nz))
    w = float(ranks[nz > 0].sum())
    if n <= exact_max_n:
        doubled = [int(round(2 * r)) for r in ranks]
        p = _exact_two_sided(doubled, int(round(2 * w)))
        return WilcoxonResult(w, min(1.0, p), n, d.size - n, True)
    mu = n * (n + 1) / 4.0
    _, tie_counts = np.unique(np.abs(nz), return_counts=True)
    var = n * (n + 1) * (2 * n + 1) / 24.0 - float(((tie_counts ** 3) - tie_counts).sum()) / 48.0
    dev = abs(w - mu) - 0.5
    if dev <= 0 or var <= 0:
        p = 1.0
    else:
        p = math.erfc(dev / math.sqrt(var) / math.sqrt(2.0))
    return WilcoxonResult(w, min(1.0, p), n, d.size - n, False)


def holm_adjust(p_values):
    """Holm step-down adjusted p-values, returned in the input order."""
    p = np.asarray(p_values, dtype=float)
    if p.size == 0:
        return []
    if np.any((p < 0) | (p > 1)):
        raise ValueError("p-values must lie in [0, 1]")
    m = p.size
    order = np.argsort(p, kind="mergesort")
    scaled = np.minimum(1.0, (m - np.arange(m)) * p[order])
    out = np.empty(m)
    out[order] = np.maximum.accumulate(scaled)
    return out.tolist()


def cohens_dz(diffs):
    """Mean paired difference over its sample standard deviation."""
    d = np.asarray(diffs, dtype=float)
    if d.size < 2:
        raise ValueError("undefined effect size: need at least two differences")
    sd = float(d.std(ddof=1))
    if sd == 0:
        raise ValueError("undefined effect size: zero variance")
    return float(d.mean()) / sd


def summarize(diffs):
    """Median and (25th, 75th) percentiles, linear interpolation."""
    d = np.asarray(diffs, dtype=float)
    if d.size == 0:
        raise ValueError("summarize needs at least one value")
    lo, med, hi = np.percentile(d, [25, 50, 75])
    return float(med), (float(lo), float(hi))


def is_improvement(p_holm, median_delta, metric, alpha=0.05):
    return bool(p_holm < alpha and median_delta * IMPROVEMENT_SIGN[metric] > 0)


def significance_stars(p):
    if p < 1e-5:
        return "***"
    if p < 1e-3:
        return "**"
    if p < 0.05:
        return "*"
    return ""
