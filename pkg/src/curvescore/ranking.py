"""Ranking Consistency: does the deep-vs-wide ordering established over
the 100-200BT window survive through the hidden late-training checkpoints?

Both steps operate on exactly-aligned checkpoints of the two architecture
variants at one model size; missing checkpoints are simply absent from the
averages, never imputed.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass, field

from .curves import CurveWindow, EvaluationDataset, LearningCurve, ModelId, align_checkpoints, slice_window
from .errors import MissingModel

K_WINDOW_DEFAULT = CurveWindow(100.0, 200.0, hi_inclusive=False)
P_WINDOW_DEFAULT = CurveWindow(220.0, 1000.0, hi_inclusive=True)


@dataclass(frozen=True)
class RankingResult:
    size: str
    r: float
    baseline_rank: int
    per_point: tuple = field(default=())  # (tokens, rank_p, agrees)
    tau: float = 0.0


def baseline_rank(
    a1: LearningCurve, a2: LearningCurve, k_window: CurveWindow = K_WINDOW_DEFAULT
):
    """Mean aligned score difference (arch1 - arch2) over the baseline
    window, mapped to a binary rank: 1 iff strictly positive."""
    pairs = align_checkpoints(slice_window(a1, k_window), slice_window(a2, k_window))
    r = statistics.fmean(sa - sb for _, sa, sb in pairs)
    return r, (1 if r > 0 else 0)


def consistency_score(
    a1: LearningCurve,
    a2: LearningCurve,
    baseline: int,
    p_window: CurveWindow = P_WINDOW_DEFAULT,
    size: str = "",
    r: float = 0.0,
) -> RankingResult:
    """Fraction of evaluation-window checkpoints whose instantaneous
    ordering agrees with the baseline rank. Ties rank as 0 (strict >)."""
    pairs = align_checkpoints(slice_window(a1, p_window), slice_window(a2, p_window))
    per_point = []
    agree = 0
    for t, sa, sb in pairs:
        rank_p = 1 if sa > sb else 0
        agrees = rank_p == baseline
        agree += agrees
        per_point.append((t, rank_p, agrees))
    return RankingResult(
        size=size,
        r=r,
        baseline_rank=baseline,
        per_point=tuple(per_point),
        tau=agree / len(pairs),
    )


def ranking_pair(
    dataset: EvaluationDataset,
    size: str,
    k_window: CurveWindow = K_WINDOW_DEFAULT,
    p_window: CurveWindow = P_WINDOW_DEFAULT,
    datamix: str = "scikw",
) -> RankingResult:
    """Full two-step ranking computation for one model size."""
    curves = []
    for arch in ("arch1", "arch2"):
        mid = ModelId(size, arch, datamix)
        curve = dataset.get(mid)
        if curve is None:
            raise MissingModel(f"no curve for {mid.label} in {dataset.benchmark_name}")
        curves.append(curve)
    a1, a2 = curves
    r, base = baseline_rank(a1, a2, k_window)
    return consistency_score(a1, a2, base, p_window, size=size, r=r)


def aggregate_consistency(per_size_tau) -> float:
    """Unweighted mean of per-size consistency values."""
    values = list(per_size_tau)
    if not values:
        raise MissingModel("no sizes available for ranking consistency aggregation")
    return statistics.fmean(values)


def ranking_consistency_aggregate(
    dataset: EvaluationDataset,
    sizes,
    k_window: CurveWindow = K_WINDOW_DEFAULT,
    p_window: CurveWindow = P_WINDOW_DEFAULT,
    datamix: str = "scikw",
) -> float:
    results = [
        ranking_pair(dataset, size, k_window, p_window, datamix) for size in sizes
    ]
    return aggregate_consistency(res.tau for res in results)
