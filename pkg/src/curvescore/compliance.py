"""Scientific Compliance: clamped mean checkpointwise score gap between a
science-mixture model and its web-only twin of the same size/architecture.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass

from .curves import EvaluationDataset, LearningCurve, ModelId, align_checkpoints
from .errors import MissingModel, MixtureMismatch


@dataclass(frozen=True)
class CompliancePair:
    sci_curve: LearningCurve
    web_curve: LearningCurve
    aligned_n: int

    @classmethod
    def from_curves(cls, sci_curve: LearningCurve, web_curve: LearningCurve):
        pairs = align_checkpoints(sci_curve, web_curve)
        return cls(sci_curve, web_curve, len(pairs))


def make_pair(dataset: EvaluationDataset, size: str = "1B", arch: str = "arch1") -> CompliancePair:
    sci = dataset.get(ModelId(size, arch, "scikw"))
    web = dataset.get(ModelId(size, arch, "webonly"))
    missing = [
        ModelId(size, arch, mix).label
        for mix, curve in (("scikw", sci), ("webonly", web))
        if curve is None
    ]
    if missing:
        raise MissingModel(
            f"compliance pair incomplete in {dataset.benchmark_name}: missing {', '.join(missing)}"
        )
    return CompliancePair.from_curves(sci, web)


def mean_gap(pair: CompliancePair) -> float:
    """Unclamped mean of (sci - web) over aligned checkpoints."""
    pairs = align_checkpoints(pair.sci_curve, pair.web_curve)
    return statistics.fmean(sa - sb for _, sa, sb in pairs)


def compliance_score(pair: CompliancePair) -> float:
    """max(0, mean aligned gap); a web-dominated pair scores 0."""
    if pair.aligned_n < 1:
        raise MixtureMismatch("compliance pair has no aligned checkpoints")
    return max(0.0, mean_gap(pair))
