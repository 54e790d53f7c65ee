"""Global score assembly, full per-benchmark scoring and leaderboards.

The global score is a weighted sum of the three subscores (signal quality,
ranking consistency, scientific compliance) with default weights
(0.5, 0.1, 0.4). Reports round to 4 decimal places; full precision is
retained internally.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass, field

from . import compliance as compliance_mod
from . import ranking as ranking_mod
from . import signal as signal_mod
from .curves import (
    CurveWindow,
    DatasetPolicy,
    EvaluationDataset,
    ModelId,
    SIZES,
    slice_window,
    validate_dataset,
)
from .errors import ConfigError, EmptyIntersection, MissingModel, PartialScore, TooFewPoints

REPORT_DECIMALS = 4

DEFAULT_SQ_MODELS = tuple(ModelId(size, "arch1", "scikw") for size in SIZES)
# Curves are restricted to the released early-training span before signal
# quality is computed; ranking/compliance windows follow the published sets.
SQ_WINDOW_DEFAULT = CurveWindow(0.0, 200.0, hi_inclusive=True)


@dataclass(frozen=True)
class ScoringConfig:
    alpha1: float = 0.5
    alpha2: float = 0.1
    alpha3: float = 0.4
    beta1: float = 0.5
    beta2: float = 0.5
    sq_window: CurveWindow = SQ_WINDOW_DEFAULT
    k_window: CurveWindow = ranking_mod.K_WINDOW_DEFAULT
    p_window: CurveWindow = ranking_mod.P_WINDOW_DEFAULT
    sq_models: tuple = DEFAULT_SQ_MODELS
    ranking_sizes: tuple = SIZES
    compliance_size: str = "1B"
    compliance_arch: str = "arch1"
    alignment_threshold: float = 0.80
    leakage_min_answer_chars: int = 3
    leakage_word_boundary: bool = False

    def __post_init__(self):
        for name in ("alpha1", "alpha2", "alpha3", "beta1", "beta2"):
            if getattr(self, name) < 0:
                raise ConfigError(f"weight {name} must be non-negative")
        if not 0 < self.alignment_threshold < 1:
            raise ConfigError("alignment_threshold must be in (0, 1)")

    @classmethod
    def from_dict(cls, doc: dict) -> "ScoringConfig":
        kwargs = {}
        simple = (
            "alpha1", "alpha2", "alpha3", "beta1", "beta2",
            "compliance_size", "compliance_arch", "alignment_threshold",
            "leakage_min_answer_chars", "leakage_word_boundary",
        )
        for key in simple:
            if key in doc:
                kwargs[key] = doc[key]
        for key in ("sq_window", "k_window", "p_window"):
            if key in doc:
                w = doc[key]
                kwargs[key] = CurveWindow(
                    float(w["lo"]), float(w["hi"]), bool(w.get("hi_inclusive", False))
                )
        if "sq_models" in doc:
            kwargs["sq_models"] = tuple(
                ModelId(m["size"], m["arch"], m["datamix"]) for m in doc["sq_models"]
            )
        if "ranking_sizes" in doc:
            kwargs["ranking_sizes"] = tuple(doc["ranking_sizes"])
        unknown = set(doc) - set(simple) - {"sq_window", "k_window", "p_window",
                                            "sq_models", "ranking_sizes"}
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        return cls(**kwargs)

    def policy(self) -> DatasetPolicy:
        return DatasetPolicy(
            min_points=2,
            signal_models=self.sq_models,
            ranking_sizes=self.ranking_sizes,
            compliance_pair=(self.compliance_size, self.compliance_arch),
        )


@dataclass(frozen=True)
class ScoreBreakdown:
    benchmark_name: str
    sq: float | None
    rc: float | None
    cs: float | None
    total: float | None
    sq_per_model: dict = field(default_factory=dict)
    rc_per_size: dict = field(default_factory=dict)
    warnings: tuple = ()

    def complete(self) -> bool:
        return None not in (self.sq, self.rc, self.cs)

    def as_dict(self) -> dict:
        rnd = lambda v: None if v is None else round(v, REPORT_DECIMALS)
        return {
            "benchmark": self.benchmark_name,
            "sq": rnd(self.sq),
            "rc": rnd(self.rc),
            "cs": rnd(self.cs),
            "total": rnd(self.total),
            "sq_per_model": {
                label: {k: rnd(v) for k, v in comp.items()}
                for label, comp in sorted(self.sq_per_model.items())
            },
            "rc_per_size": {k: rnd(v) for k, v in sorted(self.rc_per_size.items())},
            "warnings": list(self.warnings),
        }

    def to_json_bytes(self) -> bytes:
        return (json.dumps(self.as_dict(), indent=2) + "\n").encode("utf-8")

    @classmethod
    def from_dict(cls, doc: dict) -> "ScoreBreakdown":
        return cls(
            benchmark_name=doc["benchmark"],
            sq=doc.get("sq"),
            rc=doc.get("rc"),
            cs=doc.get("cs"),
            total=doc.get("total"),
            sq_per_model=doc.get("sq_per_model", {}),
            rc_per_size=doc.get("rc_per_size", {}),
            warnings=tuple(doc.get("warnings", ())),
        )


def total_score(sq: float, rc: float, cs: float, cfg: ScoringConfig = ScoringConfig()) -> float:
    return cfg.alpha1 * sq + cfg.alpha2 * rc + cfg.alpha3 * cs


def score_benchmark(
    dataset: EvaluationDataset,
    cfg: ScoringConfig = ScoringConfig(),
    allow_partial: bool = False,
) -> ScoreBreakdown:
    """Compute all three subscores and the global score for one benchmark.

    Missing models make the affected component unavailable; by default
    that raises PartialScore (carrying the partial breakdown), while
    ``allow_partial`` substitutes 0 for missing components in the total.
    """
    warnings = []
    for issue in validate_dataset(dataset, cfg.policy()).issues:
        warnings.append(f"{issue.code}: {issue.message}")

    sq_per_model: dict = {}
    sq = None
    try:
        per_model_sq = []
        for mid in cfg.sq_models:
            curve = dataset.get(mid)
            if curve is None:
                raise MissingModel(f"no curve for {mid.label}")
            early = slice_window(curve, cfg.sq_window)
            result = signal_mod.signal_quality(
                early, cfg.beta1, cfg.beta2, short_series_autocorr_zero=True
            )
            if result.autocorr_degenerate:
                warnings.append(
                    f"ShortCurve: {mid.label} too short for autocorrelation, component set to 0"
                )
            sq_per_model[mid.label] = {
                "monotonicity": result.monotonicity,
                "autocorr": result.autocorr,
                "sq": result.sq,
            }
            per_model_sq.append(result.sq)
        sq = signal_mod.aggregate_signal_quality(per_model_sq)
    except (MissingModel, TooFewPoints, EmptyIntersection) as exc:
        warnings.append(f"{exc.code}: signal quality unavailable ({exc})")

    rc_per_size: dict = {}
    rc = None
    try:
        for size in cfg.ranking_sizes:
            result = ranking_mod.ranking_pair(dataset, size, cfg.k_window, cfg.p_window)
            rc_per_size[size] = result.tau
        rc = ranking_mod.aggregate_consistency(rc_per_size.values())
    except (MissingModel, EmptyIntersection) as exc:
        rc_per_size = {}
        warnings.append(f"{exc.code}: ranking consistency unavailable ({exc})")

    cs = None
    try:
        pair = compliance_mod.make_pair(dataset, cfg.compliance_size, cfg.compliance_arch)
        cs = compliance_mod.compliance_score(pair)
    except (MissingModel, EmptyIntersection) as exc:
        warnings.append(f"{exc.code}: compliance unavailable ({exc})")

    complete = None not in (sq, rc, cs)
    total = None
    if complete:
        total = total_score(sq, rc, cs, cfg)
    elif allow_partial:
        total = total_score(sq or 0.0, rc or 0.0, cs or 0.0, cfg)

    breakdown = ScoreBreakdown(
        benchmark_name=dataset.benchmark_name,
        sq=sq,
        rc=rc,
        cs=cs,
        total=total,
        sq_per_model=sq_per_model,
        rc_per_size=rc_per_size,
        warnings=tuple(warnings),
    )
    if not complete and not allow_partial:
        missing = [name for name, v in (("sq", sq), ("rc", rc), ("cs", cs)) if v is None]
        raise PartialScore(
            f"{dataset.benchmark_name}: components unavailable: {', '.join(missing)}",
            breakdown=breakdown,
        )
    return breakdown


def rank_leaderboard(breakdowns) -> list:
    """Descending by total; ties broken by sq descending, then name."""
    def key(b: ScoreBreakdown):
        total = b.total if b.total is not None else float("-inf")
        sq = b.sq if b.sq is not None else float("-inf")
        return (-total, -sq, b.benchmark_name)

    return sorted(breakdowns, key=key)


# ---------------------------------------------------------------------------
# Report rendering
# ---------------------------------------------------------------------------

def _cell(value) -> str:
    return "–" if value is None else f"{value:.{REPORT_DECIMALS}f}"


def leaderboard_to_csv(ranked) -> bytes:
    out = io.StringIO()
    out.write("rank,benchmark,sq,rc,cs,total\n")
    for rank, b in enumerate(ranked, start=1):
        out.write(
            f"{rank},{b.benchmark_name},{_cell(b.sq)},{_cell(b.rc)},"
            f"{_cell(b.cs)},{_cell(b.total)}\n"
        )
    return out.getvalue().encode("utf-8")


def leaderboard_to_markdown(ranked) -> bytes:
    lines = [
        "| Rank | Benchmark | SQ | RC | CS | Total |",
        "|---:|:---|---:|---:|---:|---:|",
    ]
    for rank, b in enumerate(ranked, start=1):
        lines.append(
            f"| {rank} | {b.benchmark_name} | {_cell(b.sq)} | {_cell(b.rc)} "
            f"| {_cell(b.cs)} | {_cell(b.total)} |"
        )
    return ("\n".join(lines) + "\n").encode("utf-8")


def leaderboard_to_json(ranked) -> bytes:
    doc = [dict(rank=i, **b.as_dict()) for i, b in enumerate(ranked, start=1)]
    return (json.dumps(doc, indent=2) + "\n").encode("utf-8")
