"""Learning-curve data model, file ingestion and dataset validation.

A learning curve is an ordered series of (tokens_billions, score) points
for one benchmark evaluated on one trained model. All types are immutable
after construction; file parsing normalizes ordering and enforces the
curve invariants up front so downstream metric code can assume clean data.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

from .errors import (
    DuplicateCheckpoint,
    EmptyIntersection,
    NonFiniteScore,
    ParseError,
    UnknownModelToken,
)

SIZES = ("0.5B", "1B", "3B")
ARCHS = ("arch1", "arch2")
DATAMIXES = ("scikw", "webonly")

# tokens_billions values are compared after rounding to this many decimals,
# to absorb serialization noise; no interpolation is ever performed.
TOKEN_DECIMALS = 6


def _round_tokens(t: float) -> float:
    return round(float(t), TOKEN_DECIMALS)


@dataclass(frozen=True, order=True)
class ModelId:
    """Identity of one trained model: parameter-count class, architecture
    variant (deep vs wide) and pre-training data mixture."""

    size: str
    arch: str
    datamix: str

    def __post_init__(self):
        if self.size not in SIZES:
            raise UnknownModelToken(f"unknown size {self.size!r}, expected one of {SIZES}")
        if self.arch not in ARCHS:
            raise UnknownModelToken(f"unknown arch {self.arch!r}, expected one of {ARCHS}")
        if self.datamix not in DATAMIXES:
            raise UnknownModelToken(
                f"unknown datamix {self.datamix!r}, expected one of {DATAMIXES}"
            )

    @property
    def label(self) -> str:
        return f"{self.size}-{self.arch}-{self.datamix}"


@dataclass(frozen=True)
class LearningCurve:
    """Ordered (tokens_billions, score) series with a metric name.

    Invariants: tokens strictly increasing, no duplicate checkpoints,
    all scores finite.
    """

    points: tuple = ()
    metric_name: str = ""

    def __post_init__(self):
        pts = tuple((float(t), float(s)) for t, s in self.points)
        object.__setattr__(self, "points", pts)
        prev = None
        for t, s in pts:
            if not math.isfinite(t) or t < 0:
                raise ParseError(f"invalid tokens value {t!r}")
            if not math.isfinite(s):
                raise NonFiniteScore(f"non-finite score {s!r} at tokens {t}")
            if prev is not None:
                if _round_tokens(t) == _round_tokens(prev):
                    raise DuplicateCheckpoint(f"duplicate checkpoint at tokens {t}")
                if t < prev:
                    raise ParseError(f"tokens not increasing at {t} (after {prev})")
            prev = t

    @classmethod
    def from_unsorted(cls, points, metric_name: str = "") -> "LearningCurve":
        return cls(tuple(sorted(points, key=lambda p: float(p[0]))), metric_name)

    def __len__(self) -> int:
        return len(self.points)

    @property
    def tokens(self) -> tuple:
        return tuple(p[0] for p in self.points)

    @property
    def scores(self) -> tuple:
        return tuple(p[1] for p in self.points)


@dataclass(frozen=True)
class CurveWindow:
    """Half-open (default) or closed token interval used to select
    checkpoints, e.g. the 100-200BT baseline window."""

    lo_tokens_billions: float
    hi_tokens_billions: float
    hi_inclusive: bool = False

    def __post_init__(self):
        if not self.lo_tokens_billions < self.hi_tokens_billions:
            raise ParseError(
                f"window lo {self.lo_tokens_billions} must be < hi {self.hi_tokens_billions}"
            )

    def contains(self, tokens: float) -> bool:
        if tokens < self.lo_tokens_billions:
            return False
        if self.hi_inclusive:
            return tokens <= self.hi_tokens_billions
        return tokens < self.hi_tokens_billions


@dataclass(frozen=True)
class EvaluationDataset:
    """All curves for one benchmark, keyed by model identity."""

    benchmark_name: str
    metric_name: str
    curves: dict = field(default_factory=dict)

    def __post_init__(self):
        for mid, curve in self.curves.items():
            if not isinstance(mid, ModelId):
                raise ParseError(f"curve key {mid!r} is not a ModelId")
            if curve.metric_name != self.metric_name:
                raise ParseError(
                    f"curve {mid.label} metric {curve.metric_name!r} "
                    f"!= dataset metric {self.metric_name!r}"
                )

    def get(self, model_id: ModelId):
        return self.curves.get(model_id)


def slice_window(curve: LearningCurve, w: CurveWindow) -> LearningCurve:
    """Points of ``curve`` that fall inside the window. May be empty."""
    kept = tuple(p for p in curve.points if w.contains(p[0]))
    return LearningCurve(kept, curve.metric_name)


def align_checkpoints(a: LearningCurve, b: LearningCurve):
    """Pair the two curves at exactly-equal token values (after rounding).

    Returns a list of (tokens, score_a, score_b) in ascending token order.
    Raises EmptyIntersection when the curves share no checkpoints.
    """
    b_by_tokens = {_round_tokens(t): s for t, s in b.points}
    pairs = []
    for t, s in a.points:
        key = _round_tokens(t)
        if key in b_by_tokens:
            pairs.append((t, s, b_by_tokens[key]))
    if not pairs:
        raise EmptyIntersection(
            f"no shared checkpoints between curves ({len(a)} vs {len(b)} points)"
        )
    return pairs


# ---------------------------------------------------------------------------
# File formats
# ---------------------------------------------------------------------------

def parse_curve_file(raw_bytes: bytes, format: str = "canonical_json") -> EvaluationDataset:
    """Parse a canonical JSON or CSV curve file into a dataset.

    Point ordering is normalized ascending by tokens; all curve invariants
    are enforced with the offending record position in error messages.
    """
    if format == "canonical_json":
        return _parse_json(raw_bytes)
    if format == "csv":
        return _parse_csv(raw_bytes)
    raise ParseError(f"unknown curve file format {format!r}")


def _parse_json(raw_bytes: bytes) -> EvaluationDataset:
    try:
        doc = json.loads(raw_bytes.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ParseError(f"malformed JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ParseError("top-level JSON value must be an object")
    for key in ("benchmark", "metric", "models"):
        if key not in doc:
            raise ParseError(f"missing top-level key {key!r}")
    curves = {}
    for idx, entry in enumerate(doc["models"]):
        pos = f"models[{idx}]"
        try:
            mid = ModelId(str(entry["size"]), str(entry["arch"]), str(entry["datamix"]))
        except KeyError as exc:
            raise ParseError(f"missing field {exc}", pos) from None
        except UnknownModelToken as exc:
            raise UnknownModelToken(str(exc), pos) from None
        if mid in curves:
            raise ParseError(f"duplicate model entry {mid.label}", pos)
        pts = []
        for j, p in enumerate(entry.get("points", [])):
            try:
                pts.append((float(p["tokens_billions"]), float(p["score"])))
            except (KeyError, TypeError, ValueError) as exc:
                raise ParseError(f"bad point: {exc}", f"{pos}.points[{j}]") from None
        try:
            curves[mid] = LearningCurve.from_unsorted(pts, str(doc["metric"]))
        except ParseError as exc:
            raise type(exc)(str(exc), pos) from None
    return EvaluationDataset(str(doc["benchmark"]), str(doc["metric"]), curves)


CSV_HEADER = ["benchmark", "metric", "size", "arch", "datamix", "tokens_billions", "score"]


def _parse_csv(raw_bytes: bytes) -> EvaluationDataset:
    try:
        text = raw_bytes.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError(f"curve CSV is not UTF-8: {exc}") from None
    reader = csv.reader(io.StringIO(text))
    rows = [r for r in reader if r]
    if not rows:
        raise ParseError("empty CSV file")
    if [h.strip() for h in rows[0]] != CSV_HEADER:
        raise ParseError(f"bad CSV header {rows[0]!r}, expected {CSV_HEADER}")
    benchmark = metric = None
    per_model: dict = {}
    for lineno, row in enumerate(rows[1:], start=2):
        pos = f"line {lineno}"
        if len(row) != len(CSV_HEADER):
            raise ParseError(f"expected {len(CSV_HEADER)} columns, got {len(row)}", pos)
        bench, met, size, arch, datamix, tokens, score = [c.strip() for c in row]
        if benchmark is None:
            benchmark, metric = bench, met
        elif (bench, met) != (benchmark, metric):
            raise ParseError(
                f"benchmark/metric mismatch {bench!r}/{met!r} vs {benchmark!r}/{metric!r}", pos
            )
        try:
            mid = ModelId(size, arch, datamix)
        except UnknownModelToken as exc:
            raise UnknownModelToken(str(exc), pos) from None
        try:
            t, s = float(tokens), float(score)
        except ValueError as exc:
            raise ParseError(f"bad numeric value: {exc}", pos) from None
        if not math.isfinite(s):
            raise NonFiniteScore(f"non-finite score {score!r}", pos)
        per_model.setdefault(mid, []).append((t, s))
    curves = {}
    for mid, pts in per_model.items():
        try:
            curves[mid] = LearningCurve.from_unsorted(pts, metric)
        except ParseError as exc:
            raise type(exc)(f"{mid.label}: {exc}") from None
    return EvaluationDataset(benchmark, metric, curves)


def _model_sort_key(mid: ModelId):
    return (SIZES.index(mid.size), mid.arch, mid.datamix)


def serialize_canonical(dataset: EvaluationDataset) -> bytes:
    """Canonical JSON bytes: models in a fixed order, points ascending.

    parse(serialize(d)) == d, and serialize is a fixed point under
    parse/serialize round trips.
    """
    models = []
    for mid in sorted(dataset.curves, key=_model_sort_key):
        curve = dataset.curves[mid]
        models.append(
            {
                "size": mid.size,
                "arch": mid.arch,
                "datamix": mid.datamix,
                "points": [
                    {"tokens_billions": t, "score": s} for t, s in curve.points
                ],
            }
        )
    doc = {
        "benchmark": dataset.benchmark_name,
        "metric": dataset.metric_name,
        "models": models,
    }
    return (json.dumps(doc, indent=2) + "\n").encode("utf-8")


# ---------------------------------------------------------------------------
# Dataset validation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DatasetPolicy:
    """What a dataset must contain for the metrics the caller wants."""

    min_points: int = 2
    signal_models: tuple = ()       # ModelIds needed for signal quality
    ranking_sizes: tuple = ()       # sizes needing both archs (scikw mixture)
    compliance_pair: tuple = ()     # (size, arch) needing scikw + webonly


@dataclass
class ValidationIssue:
    code: str
    message: str

    def as_dict(self) -> dict:
        return {"code": self.code, "message": self.message}


@dataclass
class ValidationReport:
    issues: list = field(default_factory=list)
    curve_stats: list = field(default_factory=list)

    def ok(self) -> bool:
        return not self.issues

    def add(self, code: str, message: str):
        self.issues.append(ValidationIssue(code, message))

    def as_dict(self) -> dict:
        return {
            "ok": self.ok(),
            "issues": [i.as_dict() for i in self.issues],
            "curves": self.curve_stats,
        }


def validate_dataset(d: EvaluationDataset, policy: DatasetPolicy) -> ValidationReport:
    """Diagnostic pass over a dataset; the report is empty iff it satisfies
    the policy (minimum curve length, required models per metric)."""
    report = ValidationReport()
    for mid in sorted(d.curves, key=_model_sort_key):
        curve = d.curves[mid]
        report.curve_stats.append(
            {
                "model": mid.label,
                "n": len(curve),
                "token_span": [curve.tokens[0], curve.tokens[-1]] if len(curve) else [],
            }
        )
        if len(curve) < policy.min_points:
            report.add(
                "TooFewPoints",
                f"{mid.label}: {len(curve)} points, need at least {policy.min_points}",
            )
    for mid in policy.signal_models:
        if mid not in d.curves:
            report.add("MissingModelForSignal", f"missing curve for {mid.label}")
    for size in policy.ranking_sizes:
        for arch in ARCHS:
            mid = ModelId(size, arch, "scikw")
            if mid not in d.curves:
                report.add("MissingModelForRanking", f"missing curve for {mid.label}")
    if policy.compliance_pair:
        size, arch = policy.compliance_pair
        for datamix in DATAMIXES:
            mid = ModelId(size, arch, datamix)
            if mid not in d.curves:
                report.add("MissingModelForCompliance", f"missing curve for {mid.label}")
    return report
