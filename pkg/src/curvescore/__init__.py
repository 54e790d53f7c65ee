"""curvescore: scoring and validation toolkit for early-training
language-model benchmarks built on per-checkpoint learning curves."""

from .compliance import CompliancePair, compliance_score, make_pair
from .curves import (
    CurveWindow,
    EvaluationDataset,
    LearningCurve,
    ModelId,
    align_checkpoints,
    parse_curve_file,
    serialize_canonical,
    slice_window,
    validate_dataset,
)
from .ranking import baseline_rank, consistency_score, ranking_consistency_aggregate
from .scoring import (
    ScoreBreakdown,
    ScoringConfig,
    rank_leaderboard,
    score_benchmark,
    total_score,
)
from .signal import (
    autocorr_lag,
    autocorr_strength,
    monotonicity_score,
    signal_quality,
    signal_quality_aggregate,
)
from .submission import (
    BenchmarkItem,
    BenchmarkSubmission,
    filter_leaked,
    leakage_check,
    validate_submission,
)

__version__ = "0.1.0"
