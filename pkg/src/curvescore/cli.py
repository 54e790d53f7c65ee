"""Command-line surface: scoring, submission validation, leakage scans,
alignment classification and leaderboard rendering.

Exit codes: 0 success / compliant, 1 input or configuration error,
2 validation failure or partial score without --allow-partial,
3 alignment flagged for manual review. Errors go to stderr as JSON.
"""

from __future__ import annotations

import json
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import click

from . import alignment as alignment_mod
from . import plots as plots_mod
from . import scoring as scoring_mod
from . import submission as submission_mod
from .curves import parse_curve_file
from .errors import CurveScoreError, NoInput, ParseError, PartialScore

EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_VALIDATION = 2
EXIT_MANUAL_REVIEW = 3


def _fail(code: str, message: str, exit_code: int = EXIT_INPUT_ERROR):
    sys.stderr.write(json.dumps({"error": code, "message": message}) + "\n")
    raise SystemExit(exit_code)


def _load_config(config_path) -> scoring_mod.ScoringConfig:
    if config_path is None:
        return scoring_mod.ScoringConfig()
    try:
        doc = json.loads(Path(config_path).read_text("utf-8"))
        return scoring_mod.ScoringConfig.from_dict(doc)
    except (OSError, json.JSONDecodeError, CurveScoreError) as exc:
        _fail("ConfigError", f"bad config {config_path}: {exc}")


def _parse_curve_path(path: Path):
    fmt = "csv" if path.suffix.lower() == ".csv" else "canonical_json"
    return parse_curve_file(path.read_bytes(), fmt)


@click.group()
def main():
    """Scoring and validation toolkit for early-training LM benchmarks."""


@main.command()
@click.argument("curve_files", nargs=-1, type=click.Path(exists=True, path_type=Path))
@click.option("--config", "config_path", type=click.Path(exists=True), help="Scoring config JSON.")
@click.option("--out", "out_dir", type=click.Path(path_type=Path), default=Path("reports"),
              show_default=True, help="Output directory.")
@click.option("--format", "formats", default="json,csv,md", show_default=True,
              help="Comma-separated leaderboard formats (json,csv,md).")
@click.option("--plots", "with_plots", is_flag=True, help="Also render SVG curve plots.")
@click.option("--allow-partial", is_flag=True,
              help="Score benchmarks with missing components (substituted with 0).")
@click.option("--parallel", "parallel", default=1, show_default=True,
              help="Benchmarks scored concurrently.")
def score(curve_files, config_path, out_dir, formats, with_plots, allow_partial, parallel):
    """Score curve files and write per-benchmark breakdowns + leaderboard."""
    if not curve_files:
        _fail("NoInput", "no curve files given")
    fmt_set = [f.strip() for f in formats.split(",") if f.strip()]
    bad = set(fmt_set) - {"json", "csv", "md"}
    if bad:
        _fail("ConfigError", f"unknown report formats: {sorted(bad)}")
    cfg = _load_config(config_path)

    datasets = []
    for path in curve_files:
        try:
            datasets.append(_parse_curve_path(path))
        except ParseError as exc:
            _fail(exc.code, f"{path}: {exc}")

    partial_failures = []

    def score_one(dataset):
        try:
            return scoring_mod.score_benchmark(dataset, cfg, allow_partial=allow_partial)
        except PartialScore as exc:
            partial_failures.append((dataset.benchmark_name, str(exc)))
            return exc.breakdown

    with ThreadPoolExecutor(max_workers=max(1, parallel)) as pool:
        breakdowns = list(pool.map(score_one, datasets))

    # all writes funnel through here, in input order, for stable output
    out_dir.mkdir(parents=True, exist_ok=True)
    for dataset, breakdown in zip(datasets, breakdowns):
        (out_dir / f"{dataset.benchmark_name}.breakdown.json").write_bytes(
            breakdown.to_json_bytes()
        )
        for warning in breakdown.warnings:
            click.echo(f"warning: {dataset.benchmark_name}: {warning}", err=True)
        if with_plots:
            _, plot_warnings = plots_mod.render_plots(dataset, breakdown, out_dir)
            for warning in plot_warnings:
                click.echo(f"warning: {dataset.benchmark_name}: {warning}", err=True)

    ranked = scoring_mod.rank_leaderboard(breakdowns)
    writers = {
        "json": ("leaderboard.json", scoring_mod.leaderboard_to_json),
        "csv": ("leaderboard.csv", scoring_mod.leaderboard_to_csv),
        "md": ("leaderboard.md", scoring_mod.leaderboard_to_markdown),
    }
    for fmt in fmt_set:
        name, writer = writers[fmt]
        (out_dir / name).write_bytes(writer(ranked))

    if partial_failures:
        for bench, msg in partial_failures:
            click.echo(f"partial: {msg}", err=True)
        _fail("PartialScore",
              f"{len(partial_failures)} benchmark(s) incomplete; rerun with --allow-partial",
              EXIT_VALIDATION)


@main.command()
@click.argument("submission_path", type=click.Path(exists=True, path_type=Path))
@click.option("--manifest", type=click.Path(exists=True), help="Sidecar manifest JSON.")
@click.option("--strict", is_flag=True, help="Treat leakage findings as failures.")
@click.option("--out", "out_path", type=click.Path(path_type=Path), help="Write report JSON here.")
def validate(submission_path, manifest, strict, out_path):
    """Validate a submission's schema/size and run the leakage check."""
    try:
        sub = submission_mod.load_submission(submission_path, manifest)
    except ParseError as exc:
        _fail(exc.code, str(exc))
    report = submission_mod.validate_submission(sub)
    leakage = submission_mod.leakage_check(sub)
    doc = {"validation": report.as_dict(), "leakage": leakage.as_dict()}
    payload = json.dumps(doc, indent=2) + "\n"
    if out_path:
        out_path.write_text(payload, "utf-8")
    click.echo(payload, nl=False)
    if not report.ok():
        raise SystemExit(EXIT_VALIDATION)
    if leakage.leaked_ids:
        click.echo(f"warning: {len(leakage.leaked_ids)} leaked item(s), "
                   f"rate {leakage.rate:.4f}", err=True)
        if strict:
            raise SystemExit(EXIT_VALIDATION)
    raise SystemExit(EXIT_OK)


@main.command()
@click.argument("submission_path", type=click.Path(exists=True, path_type=Path))
@click.option("--manifest", type=click.Path(exists=True), help="Sidecar manifest JSON.")
@click.option("--filter-out", "filtered_path", type=click.Path(path_type=Path),
              help="Write the submission minus leaked items here (JSONL).")
@click.option("--word-boundary", is_flag=True, help="Match answers at word boundaries only.")
@click.option("--min-answer-chars", default=3, show_default=True)
@click.option("--out", "out_path", type=click.Path(path_type=Path), help="Write report JSON here.")
def leakage(submission_path, manifest, filtered_path, word_boundary, min_answer_chars, out_path):
    """Run the answer-leakage check and optionally emit a filtered copy."""
    try:
        sub = submission_mod.load_submission(submission_path, manifest)
    except ParseError as exc:
        _fail(exc.code, str(exc))
    report = submission_mod.leakage_check(
        sub, min_answer_chars=min_answer_chars, word_boundary=word_boundary
    )
    payload = json.dumps(report.as_dict(), indent=2) + "\n"
    if out_path:
        out_path.write_text(payload, "utf-8")
    click.echo(payload, nl=False)
    if filtered_path:
        filtered, warnings = submission_mod.filter_leaked(sub, report)
        lines = []
        for item in filtered.items:
            lines.append(json.dumps({
                "id": item.id,
                "question": item.question,
                "context": item.context,
                "choices": list(item.choices),
                "answer_index": item.answer_index,
                "format": item.format,
            }))
        filtered_path.write_text("\n".join(lines) + ("\n" if lines else ""), "utf-8")
        for warning in warnings:
            click.echo(f"warning: {warning}", err=True)
    raise SystemExit(EXIT_OK)


@main.command()
@click.argument("submission_path", type=click.Path(exists=True, path_type=Path))
@click.option("--manifest", type=click.Path(exists=True), help="Sidecar manifest JSON.")
@click.option("--endpoint", help="Classifier base URL (chat-completion style).")
@click.option("--model", default="gpt-4o-2024-08-06", show_default=True)
@click.option("--stub", "stub_path", type=click.Path(exists=True),
              help="File-backed stub transport script (JSON).")
@click.option("--threshold", default=0.80, show_default=True)
@click.option("--sample", "sample_size", type=int, help="Classify a seeded uniform sample.")
@click.option("--seed", default=0, show_default=True)
@click.option("--parallel", default=4, show_default=True, help="Max in-flight requests.")
@click.option("--out", "out_path", type=click.Path(path_type=Path),
              default=Path("verdict.json"), show_default=True)
def classify(submission_path, manifest, endpoint, model, stub_path, threshold,
             sample_size, seed, parallel, out_path):
    """Run the scientific-alignment classification and write the verdict."""
    try:
        sub = submission_mod.load_submission(submission_path, manifest)
    except ParseError as exc:
        _fail(exc.code, str(exc))
    try:
        if stub_path:
            transport = alignment_mod.StubTransport.from_file(stub_path)
        elif endpoint:
            transport = alignment_mod.HttpTransport(endpoint, model)
        else:
            raise CurveScoreError("need --endpoint (with CLASSIFIER_API_KEY) or --stub")
    except CurveScoreError as exc:
        _fail("ConfigError", str(exc))
    try:
        verdict = alignment_mod.classify_submission(
            sub, transport, threshold=threshold, sample_size=sample_size,
            seed=seed, concurrency=parallel,
            backoff_base=0.0 if stub_path else 0.5,
        )
    except CurveScoreError as exc:
        _fail(exc.code, str(exc))
    out_path.write_text(json.dumps(verdict.as_dict(), indent=2) + "\n", "utf-8")
    click.echo(f"{verdict.decision}: accept_rate={verdict.accept_rate:.4f} "
               f"over {verdict.sampled} item(s)")
    raise SystemExit(EXIT_OK if verdict.decision == "AutoCompliant" else EXIT_MANUAL_REVIEW)


@main.command()
@click.argument("breakdown_files", nargs=-1, type=click.Path(exists=True, path_type=Path))
@click.option("--out", "out_dir", type=click.Path(path_type=Path), default=Path("reports"),
              show_default=True)
@click.option("--format", "formats", default="json,csv,md", show_default=True)
def report(breakdown_files, out_dir, formats):
    """Re-render a leaderboard from existing breakdown JSON files."""
    if not breakdown_files:
        _fail("NoInput", "no breakdown files given")
    fmt_set = [f.strip() for f in formats.split(",") if f.strip()]
    bad = set(fmt_set) - {"json", "csv", "md"}
    if bad:
        _fail("ConfigError", f"unknown report formats: {sorted(bad)}")
    breakdowns = []
    for path in breakdown_files:
        try:
            breakdowns.append(
                scoring_mod.ScoreBreakdown.from_dict(json.loads(path.read_text("utf-8")))
            )
        except (json.JSONDecodeError, KeyError) as exc:
            _fail("ParseError", f"{path}: {exc}")
    ranked = scoring_mod.rank_leaderboard(breakdowns)
    out_dir.mkdir(parents=True, exist_ok=True)
    writers = {
        "json": ("leaderboard.json", scoring_mod.leaderboard_to_json),
        "csv": ("leaderboard.csv", scoring_mod.leaderboard_to_csv),
        "md": ("leaderboard.md", scoring_mod.leaderboard_to_markdown),
    }
    for fmt in fmt_set:
        name, writer = writers[fmt]
        (out_dir / name).write_bytes(writer(ranked))
    raise SystemExit(EXIT_OK)


if __name__ == "__main__":
    main()
