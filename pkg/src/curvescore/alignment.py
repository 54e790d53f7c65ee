"""Client for the external zero-shot scientific-alignment classifier.

Each submission item is sent (question + correct answer) to a chat-style
endpoint with a fixed instruction asking for an Accept/Reject label;
the accept rate against a threshold (default 0.80) decides whether the
submission is automatically compliant or flagged for manual review.

A file-backed stub transport with a call ledger ships for offline tests.
"""

from __future__ import annotations

import json
import os
import random
import re
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import requests

from .errors import ConfigError, QuotaExceeded, TransportError
from .submission import BenchmarkItem, BenchmarkSubmission

API_KEY_ENV = "CLASSIFIER_API_KEY"

CLASSIFICATION_INSTRUCTIONS = """\
You are tasked with classifying each of the following question-answer pairs into one of two groups:

## Accept

Classify as Accept if the question requires domain-specific knowledge, scientific understanding, academic expertise, or professional reasoning. This includes but is not limited to:

Scientific & Technical Fields: Biology; Chemistry; Physics; Mathematics; Computer Science; Engineering (all disciplines); Medicine and Health Sciences; Neuroscience; Pharmacology; Veterinary Science; Environmental Science; Earth Science / Astronomy; Statistics & Data Science.

Professional & Applied Domains: Law; Business (e.g., Finance, Accounting, Marketing); Economics; Political Science; Education; Sociology; Anthropology; Linguistics; Communications / Media Studies; Library & Information Science; Social Work; Public Policy; Nursing / Allied Health; Architecture / Urban Planning; Agriculture / Food Science.

Humanities with Reasoning Requirements: History; Philosophy (e.g., logic, ethics, epistemology); Theology / Religious Studies; Art History; Literary Theory.

Any question that falls under these or similar knowledge-intensive domains should be marked Accept, even if it's not explicitly listed.

## Reject

Classify as Reject only if the question is based on:
- General language understanding
- Common sense or cultural knowledge
- Vocabulary, grammar, spelling, or idioms
- Word analogies or word associations
- Trivia or factoids that don't require reasoning
- Sentiment, emotion, or tone recognition
- Simple reading comprehension without technical content
- NLP-specific tasks (e.g., joke detection, paraphrasing, summarization)

These do not require deep subject-matter knowledge and should be marked Reject.

Respond with a single label: Accept or Reject.
"""

_LABEL_TOKEN = re.compile(r"\b(accept|reject)\b", re.IGNORECASE)

ACCEPT = "Accept"
REJECT = "Reject"
UNPARSEABLE = "Unparseable"


def build_classification_request(item: BenchmarkItem) -> dict:
    """Deterministic chat payload for one item: instruction block, then
    optional context, then question and correct answer."""
    parts = []
    if item.context:
        parts.append(f"Context: {item.context}")
    parts.append(f"Question: {item.question}")
    parts.append(f"Answer: {item.answer}")
    return {
        "messages": [
            {"role": "system", "content": CLASSIFICATION_INSTRUCTIONS},
            {"role": "user", "content": "\n\n".join(parts)},
        ],
        "item_id": item.id,
    }


def parse_label(response_text: str) -> str:
    """First standalone accept/reject token decides; else Unparseable."""
    m = _LABEL_TOKEN.search(response_text)
    if m is None:
        return UNPARSEABLE
    return ACCEPT if m.group(1).lower() == "accept" else REJECT


@dataclass(frozen=True)
class AlignmentVerdict:
    per_item: tuple  # (id, label)
    accept_rate: float
    decision: str  # AutoCompliant | ManualReview
    sampled: int
    threshold: float

    def as_dict(self) -> dict:
        return {
            "per_item": [{"id": i, "label": lbl} for i, lbl in self.per_item],
            "accept_rate": self.accept_rate,
            "decision": self.decision,
            "sampled": self.sampled,
            "threshold": self.threshold,
        }


class HttpTransport:
    """Chat-completion endpoint over HTTP; thread-safe (one session lock)."""

    def __init__(self, base_url: str, model: str, api_key: str | None = None, timeout: float = 60.0):
        api_key = api_key if api_key is not None else os.environ.get(API_KEY_ENV)
        if not api_key:
            raise ConfigError(f"no API key: set {API_KEY_ENV} or pass api_key")
        self.base_url = base_url.rstrip("/")
        self.model = model
        self.timeout = timeout
        self._session = requests.Session()
        self._session.headers["Authorization"] = f"Bearer {api_key}"
        self._lock = threading.Lock()

    def send(self, payload: dict) -> str:
        body = {"model": self.model, "messages": payload["messages"]}
        try:
            with self._lock:
                resp = self._session.post(
                    f"{self.base_url}/chat/completions", json=body, timeout=self.timeout
                )
        except requests.RequestException as exc:
            raise TransportError(f"request failed: {exc}") from None
        if resp.status_code == 429:
            raise QuotaExceeded("classifier quota exceeded (HTTP 429)")
        if resp.status_code >= 400:
            raise TransportError(f"classifier returned HTTP {resp.status_code}")
        try:
            return resp.json()["choices"][0]["message"]["content"]
        except (KeyError, IndexError, ValueError) as exc:
            raise TransportError(f"malformed classifier response: {exc}") from None


class StubTransport:
    """Scripted responses keyed by item id, with a call ledger.

    A script value may be a single response string or a list of responses
    consumed one per call (for exercising the retry path); a response of
    "<error>" raises TransportError for that call.
    """

    ERROR_SENTINEL = "<error>"

    def __init__(self, script: dict, default: str = ""):
        self._script = {k: list(v) if isinstance(v, list) else [v] for k, v in script.items()}
        self._default = default
        self.calls: list = []
        self._lock = threading.Lock()

    @classmethod
    def from_file(cls, path) -> "StubTransport":
        doc = json.loads(Path(path).read_text("utf-8"))
        if isinstance(doc, dict) and "responses" in doc:
            return cls(doc["responses"], doc.get("default", ""))
        return cls(doc)

    def send(self, payload: dict) -> str:
        item_id = payload["item_id"]
        with self._lock:
            self.calls.append(item_id)
            queue = self._script.get(item_id)
            if not queue:
                response = self._default
            elif len(queue) == 1:
                response = queue[0]
            else:
                response = queue.pop(0)
        if response == self.ERROR_SENTINEL:
            raise TransportError(f"scripted transport error for item {item_id}")
        return response


def _classify_one(item, transport, max_attempts, backoff_base):
    payload = build_classification_request(item)
    for attempt in range(max_attempts):
        try:
            return parse_label(transport.send(payload))
        except QuotaExceeded:
            raise
        except TransportError:
            if attempt + 1 < max_attempts and backoff_base > 0:
                time.sleep(backoff_base * (2**attempt))
    return UNPARSEABLE


def classify_submission(
    sub: BenchmarkSubmission,
    transport,
    threshold: float = 0.80,
    sample_size: int | None = None,
    seed: int = 0,
    max_attempts: int = 5,
    concurrency: int = 4,
    backoff_base: float = 0.5,
) -> AlignmentVerdict:
    """Label every item (or a seeded uniform sample) and threshold the
    accept rate. Each item contributes exactly once regardless of retries;
    items failing all retries count as Unparseable (against acceptance).
    """
    if not 0 < threshold < 1:
        raise ConfigError("threshold must be in (0, 1)")
    items = list(sub.items)
    if sample_size is not None and sample_size < len(items):
        idx = sorted(random.Random(seed).sample(range(len(items)), sample_size))
        items = [items[i] for i in idx]
    if not items:
        raise ConfigError("nothing to classify: submission is empty")
    with ThreadPoolExecutor(max_workers=max(1, concurrency)) as pool:
        labels = list(
            pool.map(
                lambda it: _classify_one(it, transport, max_attempts, backoff_base),
                items,
            )
        )
    per_item = tuple((item.id, label) for item, label in zip(items, labels))
    accept_rate = sum(1 for _, lbl in per_item if lbl == ACCEPT) / len(per_item)
    decision = "AutoCompliant" if accept_rate > threshold else "ManualReview"
    return AlignmentVerdict(
        per_item=per_item,
        accept_rate=accept_rate,
        decision=decision,
        sampled=len(per_item),
        threshold=threshold,
    )
