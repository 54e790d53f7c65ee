"""Signal Quality: monotonic-trend strength and lagged self-correlation.

The monotonicity component is a clamped Spearman rank correlation between
checkpoint order and score order, computed as Pearson correlation over
average ranks so that tied scores are handled with the standard tie
correction (identical to the tie-free closed form 1 - 6*sum(d^2)/(n(n^2-1))
when no ties are present).

The autocorrelation component intentionally deviates from the textbook
estimator: each lag correlates the truncated head and tail windows but
centers BOTH with the full-series mean. A compatibility switch selecting
the standard estimator exists and is off by default.
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass

import numpy as np
from scipy.stats import rankdata

from .curves import EvaluationDataset, LearningCurve
from .errors import MissingModel, TooFewPoints


@dataclass(frozen=True)
class RankedSeries:
    """Average ranks of a value series plus the per-position rank
    differences against the (tie-free) position index ranks."""

    values: tuple
    ranks: tuple
    rank_diffs: tuple


@dataclass(frozen=True)
class AutocorrProfile:
    max_lag: int
    rho: tuple


@dataclass(frozen=True)
class SignalQualityResult:
    monotonicity: float
    autocorr: float
    sq: float
    beta1: float
    beta2: float
    autocorr_degenerate: bool = False


def ranked_series(values) -> RankedSeries:
    vals = tuple(float(v) for v in values)
    n = len(vals)
    ranks = tuple(rankdata(vals, method="average"))
    diffs = tuple(float(i + 1) - r for i, r in enumerate(ranks))
    assert abs(sum(ranks) - n * (n + 1) / 2) < 1e-9
    return RankedSeries(vals, ranks, diffs)


def monotonicity_score(curve: LearningCurve) -> float:
    """max(0, spearman(index, score)) in [0, 1]; 0 for flat curves."""
    return monotonicity_of_values(curve.scores)


def monotonicity_of_values(values) -> float:
    n = len(values)
    if n < 2:
        raise TooFewPoints(f"monotonicity needs at least 2 points, got {n}")
    rs = ranked_series(values)
    score_ranks = np.asarray(rs.ranks)
    if np.ptp(score_ranks) == 0.0:
        # zero-variance series carries no improvement signal
        return 0.0
    index_ranks = np.arange(1, n + 1, dtype=float)
    rho = float(np.corrcoef(index_ranks, score_ranks)[0, 1])
    return max(0.0, rho)


def autocorr_lag(series, lag: int, *, standard_estimator: bool = False) -> float:
    """Lag-``lag`` correlation of the series with its shifted self.

    Default form: truncated head/tail windows, full-series mean in all
    three sums. ``standard_estimator`` recenters each window with its own
    mean instead. Degenerate (zero) denominators yield 0 by policy.
    """
    x = np.asarray(series, dtype=float)
    n = x.size
    if not 1 <= lag <= n - 1:
        raise TooFewPoints(f"lag {lag} out of range for series of length {n}")
    head = x[: n - lag]
    tail = x[lag:]
    if standard_estimator:
        head_c = head - head.mean()
        tail_c = tail - tail.mean()
    else:
        mean = x.mean()
        head_c = head - mean
        tail_c = tail - mean
    denom = math.sqrt(float(np.sum(head_c**2))) * math.sqrt(float(np.sum(tail_c**2)))
    if denom == 0.0:
        return 0.0
    return float(np.sum(head_c * tail_c)) / denom


def autocorr_profile(series, *, standard_estimator: bool = False) -> AutocorrProfile:
    n = len(series)
    max_lag = n // 4
    if max_lag < 1:
        raise TooFewPoints(f"autocorrelation needs at least 4 points, got {n}")
    rho = tuple(
        autocorr_lag(series, lag, standard_estimator=standard_estimator)
        for lag in range(1, max_lag + 1)
    )
    return AutocorrProfile(max_lag, rho)


def autocorr_strength(series, *, standard_estimator: bool = False) -> float:
    """Mean absolute lag correlation over lags 1..floor(n/4), in [0, 1]."""
    profile = autocorr_profile(series, standard_estimator=standard_estimator)
    return sum(abs(r) for r in profile.rho) / profile.max_lag


def signal_quality(
    curve: LearningCurve,
    beta1: float = 0.5,
    beta2: float = 0.5,
    *,
    short_series_autocorr_zero: bool = False,
    standard_estimator: bool = False,
) -> SignalQualityResult:
    """Weighted blend of monotonicity and autocorrelation strength.

    Curves too short for any autocorrelation lag (n < 4) raise
    TooFewPoints unless ``short_series_autocorr_zero`` is set, in which
    case the component is 0 and the result is flagged degenerate.
    """
    if beta1 < 0 or beta2 < 0:
        raise ValueError("component weights must be non-negative")
    mono = monotonicity_score(curve)
    degenerate = False
    try:
        ac = autocorr_strength(curve.scores, standard_estimator=standard_estimator)
    except TooFewPoints:
        if not short_series_autocorr_zero:
            raise
        ac = 0.0
        degenerate = True
    return SignalQualityResult(
        monotonicity=mono,
        autocorr=ac,
        sq=beta1 * mono + beta2 * ac,
        beta1=beta1,
        beta2=beta2,
        autocorr_degenerate=degenerate,
    )


def aggregate_signal_quality(per_model_sq) -> float:
    """Unweighted mean of per-model signal quality values."""
    values = list(per_model_sq)
    if not values:
        raise MissingModel("no models selected for signal quality aggregation")
    return statistics.fmean(values)


def signal_quality_aggregate(
    dataset: EvaluationDataset,
    selection,
    beta1: float = 0.5,
    beta2: float = 0.5,
    **kwargs,
) -> float:
    """Mean signal quality over an explicit model selection."""
    per_model = []
    for mid in selection:
        curve = dataset.get(mid)
        if curve is None:
            raise MissingModel(f"no curve for {mid.label} in {dataset.benchmark_name}")
        per_model.append(signal_quality(curve, beta1, beta2, **kwargs).sq)
    return aggregate_signal_quality(per_model)
