"""Benchmark submission model, schema validation and answer-leakage check.

Submissions arrive as JSON Lines (one item per line) with a sidecar
manifest {name, metric, format_default}. The leakage check flags
completion-style items whose normalized correct answer appears verbatim
inside the normalized context+question text; MCQ items are skipped since
their expected answer (a choice letter) never appears in the prompt.
"""

from __future__ import annotations

import json
import re
import unicodedata
from dataclasses import dataclass, replace
from pathlib import Path

from .errors import ParseError

MIN_ITEMS = 100
MAX_ITEMS = 15000

_WS_RUN = re.compile(r"\s+")
_EDGE_PUNCT = re.compile(r"^[\W_]+|[\W_]+$")


@dataclass(frozen=True)
class BenchmarkItem:
    id: str
    question: str
    answer_index: int
    choices: tuple = ()
    context: str | None = None
    format: str = "mcq"

    def __post_init__(self):
        if self.format not in ("mcq", "completion"):
            raise ParseError(f"item {self.id}: unknown format {self.format!r}")
        object.__setattr__(self, "choices", tuple(self.choices))

    @property
    def answer(self) -> str:
        return self.choices[self.answer_index]


@dataclass(frozen=True)
class BenchmarkSubmission:
    name: str
    metric_name: str
    items: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "items", tuple(self.items))


@dataclass(frozen=True)
class LeakageReport:
    leaked_ids: tuple
    checked_count: int
    skipped_mcq: int

    @property
    def rate(self) -> float:
        if self.checked_count == 0:
            return 0.0
        return len(self.leaked_ids) / self.checked_count

    def as_dict(self) -> dict:
        return {
            "leaked_ids": list(self.leaked_ids),
            "checked_count": self.checked_count,
            "skipped_mcq": self.skipped_mcq,
            "rate": self.rate,
        }


def load_submission(items_path, manifest_path=None) -> BenchmarkSubmission:
    """Read a JSONL item file plus its sidecar manifest.

    The manifest defaults to ``<stem>.manifest.json`` next to the items
    file; items without an explicit format inherit ``format_default``.
    """
    items_path = Path(items_path)
    if manifest_path is None:
        manifest_path = items_path.parent / (items_path.stem + ".manifest.json")
    manifest_path = Path(manifest_path)
    if not manifest_path.exists():
        raise ParseError(f"missing manifest {manifest_path}")
    try:
        manifest = json.loads(manifest_path.read_text("utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed manifest: {exc}") from None
    fmt_default = manifest.get("format_default", "mcq")
    items = []
    for lineno, line in enumerate(items_path.read_text("utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        try:
            doc = json.loads(line)
            items.append(
                BenchmarkItem(
                    id=str(doc["id"]),
                    question=str(doc["question"]),
                    context=doc.get("context"),
                    choices=tuple(str(c) for c in doc.get("choices", ())),
                    answer_index=int(doc["answer_index"]),
                    format=str(doc.get("format", fmt_default)),
                )
            )
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad item: {exc}", f"line {lineno}") from None
    return BenchmarkSubmission(
        name=str(manifest.get("name", items_path.stem)),
        metric_name=str(manifest.get("metric", "acc")),
        items=tuple(items),
    )


def validate_submission(sub: BenchmarkSubmission):
    """Schema and size checks; returns a ValidationReport (empty iff valid)."""
    from .curves import ValidationReport  # shared diagnostics container

    report = ValidationReport()
    n = len(sub.items)
    if not MIN_ITEMS <= n <= MAX_ITEMS:
        report.add(
            "SizeOutOfBounds",
            f"submission has {n} items, must be between {MIN_ITEMS} and {MAX_ITEMS}",
        )
    seen = set()
    dupes = []
    for item in sub.items:
        if item.id in seen:
            dupes.append(item.id)
        seen.add(item.id)
        if not item.question.strip():
            report.add("EmptyQuestion", f"item {item.id} has an empty question")
        if item.format == "mcq" and len(item.choices) < 2:
            report.add("TooFewChoices", f"item {item.id} has {len(item.choices)} choices")
        if not (item.choices and 0 <= item.answer_index < len(item.choices)):
            report.add(
                "BadAnswerIndex",
                f"item {item.id} answer_index {item.answer_index} out of range "
                f"for {len(item.choices)} choices",
            )
    if dupes:
        report.add("DuplicateIds", f"duplicate ids: {sorted(set(dupes))}")
    return report


def normalize_text(s: str) -> str:
    """Lowercase, NFC-normalize, collapse whitespace, trim edge punctuation."""
    s = unicodedata.normalize("NFC", s).lower()
    s = _WS_RUN.sub(" ", s).strip()
    return _EDGE_PUNCT.sub("", s)


def leakage_check(
    sub: BenchmarkSubmission,
    min_answer_chars: int = 3,
    word_boundary: bool = False,
) -> LeakageReport:
    """Flag completion items whose answer leaks into the prompt text.

    Answers shorter than ``min_answer_chars`` after normalization are never
    flagged; ``word_boundary`` switches from plain substring matching to
    whole-word matching.
    """
    leaked = []
    checked = 0
    skipped_mcq = 0
    for item in sub.items:
        if item.format == "mcq":
            skipped_mcq += 1
            continue
        checked += 1
        answer = normalize_text(item.answer)
        if len(answer) < min_answer_chars:
            continue
        haystack = normalize_text(" ".join(filter(None, (item.context, item.question))))
        if word_boundary:
            hit = re.search(rf"(?<!\w){re.escape(answer)}(?!\w)", haystack) is not None
        else:
            hit = answer in haystack
        if hit:
            leaked.append(item.id)
    return LeakageReport(tuple(leaked), checked, skipped_mcq)


def filter_leaked(sub: BenchmarkSubmission, report: LeakageReport):
    """Drop the leaked items; returns (submission, warnings)."""
    leaked = set(report.leaked_ids)
    kept = tuple(item for item in sub.items if item.id not in leaked)
    warnings = []
    if len(kept) < MIN_ITEMS:
        warnings.append(
            f"filtering left {len(kept)} items, below the {MIN_ITEMS}-item minimum"
        )
    return replace(sub, items=kept), warnings
