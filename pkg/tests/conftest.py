import json
import math
import random

import pytest

from curvescore.curves import EvaluationDataset, LearningCurve, ModelId, serialize_canonical

SIZES = ("0.5B", "1B", "3B")
SIZE_BONUS = {"0.5B": 0.0, "1B": 0.04, "3B": 0.08}
FULL_GRID = [20.0 * i for i in range(1, 51)]  # 20..1000 BT


def synth_curve(grid, base=0.25, bonus=0.0, noise=0.002, seed=0, metric="acc_norm"):
    rng = random.Random(seed)
    pts = []
    for t in grid:
        score = base + 0.5 * (1 - math.exp(-t / 300.0)) + bonus
        pts.append((t, score + rng.uniform(-noise, noise)))
    return LearningCurve(tuple(pts), metric)


def make_paper_shaped_dataset(benchmark="synthbench", seed=0, include_webonly=True):
    """Seven curves on a shared 20BT grid: both architectures per size on
    the science mixture, plus the web-only compliance twin (1B/arch1)."""
    curves = {}
    for i, size in enumerate(SIZES):
        for j, arch in enumerate(("arch1", "arch2")):
            bonus = SIZE_BONUS[size] + (0.02 if arch == "arch1" else 0.0)
            curves[ModelId(size, arch, "scikw")] = synth_curve(
                FULL_GRID, bonus=bonus, seed=seed + 10 * i + j
            )
    if include_webonly:
        curves[ModelId("1B", "arch1", "webonly")] = synth_curve(
            FULL_GRID, bonus=SIZE_BONUS["1B"] - 0.03, seed=seed + 99
        )
    return EvaluationDataset(benchmark, "acc_norm", curves)


@pytest.fixture
def dataset():
    return make_paper_shaped_dataset()


def write_fixture_tree(tmp_path, benchmarks=("alpha", "beta"), seed=0):
    """Canonical JSON curve files for several synthetic benchmarks."""
    paths = []
    for k, name in enumerate(benchmarks):
        ds = make_paper_shaped_dataset(name, seed=seed + 1000 * k)
        path = tmp_path / f"{name}.json"
        path.write_bytes(serialize_canonical(ds))
        paths.append(path)
    return paths


def write_submission(tmp_path, items, name="subm", metric="acc"):
    items_path = tmp_path / f"{name}.jsonl"
    manifest_path = tmp_path / f"{name}.manifest.json"
    lines = [json.dumps(item) for item in items]
    items_path.write_text("\n".join(lines) + "\n", "utf-8")
    manifest_path.write_text(
        json.dumps({"name": name, "metric": metric, "format_default": "mcq"}), "utf-8"
    )
    return items_path


def mcq_item(i, question="What is the boiling point of water at sea level?"):
    return {
        "id": f"q{i:04d}",
        "question": question,
        "choices": ["90 C", "100 C", "110 C", "120 C"],
        "answer_index": 1,
        "format": "mcq",
    }


def completion_item(i, answer="photosynthesis", leak=False):
    context = "Plants convert light into chemical energy."
    if leak:
        context += f" This process is called {answer}."
    return {
        "id": f"c{i:04d}",
        "question": "The process by which plants make food is called what?",
        "context": context,
        "choices": [answer, "respiration", "osmosis"],
        "answer_index": 0,
        "format": "completion",
    }


# Published leaderboard rows: (name, sq, rc, cs, printed_total)
TABLE1_ROWS = [
    ("MMLU-var", 0.959, 0.837, 0.384, 71.7),
    ("ARC-Easy", 0.832, 0.822, 0.394, 65.5),
    ("SciQ", 0.846, 0.772, 0.316, 62.7),
    ("HellaSwag", 0.992, 0.936, 0.000, 59.0),
    ("GSM8K", 0.655, 0.915, 0.369, 56.6),
]

TABLE6_ROWS = [
    ("MMLU-var", 0.959, 0.837, 0.384, 0.717),
    ("ARC-Easy", 0.832, 0.822, 0.394, 0.655),
    ("SciQ", 0.846, 0.772, 0.316, 0.627),
    ("HellaSwag", 0.992, 0.936, 0.000, 0.590),
    ("GSM8K", 0.655, 0.915, 0.369, 0.566),
    ("LAMBADA_Standard", 0.894, 0.752, 0.000, 0.522),
    ("PIQA", 0.842, 0.690, 0.013, 0.495),
    ("IFEval", 0.532, 0.562, 0.353, 0.463),
    ("RACE", 0.677, 0.877, 0.000, 0.426),
    ("WebQuestions", 0.477, 0.573, 0.256, 0.398),
    ("MATH", 0.266, 0.672, 0.494, 0.398),
    ("WinoGrande", 0.590, 0.588, 0.022, 0.363),
    ("MMLU", 0.285, 0.574, 0.400, 0.360),
    ("BBH", 0.352, 0.675, 0.283, 0.357),
    ("DROP", 0.573, 0.386, 0.059, 0.349),
    ("BoolQ", 0.327, 0.771, 0.188, 0.316),
    ("ANLI_r2", 0.296, 0.433, 0.241, 0.288),
    ("MMLU_Pro", 0.342, 0.716, 0.000, 0.243),
    ("GPQA", 0.227, 0.402, 0.049, 0.173),
    ("ANLI_r3", 0.224, 0.425, 0.000, 0.154),
    ("TruthfulQA_mc2", 0.180, 0.625, 0.000, 0.152),
    ("TruthfulQA_mc1", 0.226, 0.355, 0.000, 0.149),
    ("MuSR", 0.116, 0.713, 0.000, 0.129),
    ("ANLI_r1", 0.148, 0.319, 0.000, 0.106),
]
