"""Learning-curve figures rendered to SVG files next to the reports.

Output must be byte-stable for identical inputs (visual regression), so
the SVG backend is pinned: fixed hash salt, no embedded date metadata.
"""

from __future__ import annotations

import io
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .curves import EvaluationDataset, _model_sort_key

_SIZE_COLOR = {"0.5B": "tab:blue", "1B": "tab:orange", "3B": "tab:green"}
_ARCH_STYLE = {"arch1": "-", "arch2": "--"}


def render_dataset_svg(dataset: EvaluationDataset, breakdown=None):
    """One figure per benchmark: score vs tokens for every model, with the
    subscore summary in the title when a breakdown is supplied.

    Returns ``(svg_bytes, warnings)``."""
    warnings = []
    rc = {"svg.hashsalt": dataset.benchmark_name, "svg.fonttype": "none"}
    with plt.rc_context(rc):
        fig, ax = plt.subplots(figsize=(8, 4.5))
        plotted = 0
        for mid in sorted(dataset.curves, key=_model_sort_key):
            curve = dataset.curves[mid]
            if len(curve) == 0:
                warnings.append(f"empty curve for {mid.label}, excluded from plot")
                continue
            ax.plot(
                curve.tokens,
                curve.scores,
                _ARCH_STYLE.get(mid.arch, "-"),
                color=_SIZE_COLOR.get(mid.size),
                alpha=0.5 if mid.datamix == "webonly" else 1.0,
                label=mid.label,
            )
            plotted += 1
        title = dataset.benchmark_name
        if breakdown is not None:
            parts = [
                f"{name}={v:.4f}" if v is not None else f"{name}=–"
                for name, v in (
                    ("SQ", breakdown.sq),
                    ("RC", breakdown.rc),
                    ("CS", breakdown.cs),
                    ("total", breakdown.total),
                )
            ]
            title += "  [" + "  ".join(parts) + "]"
        ax.set_title(title, fontsize=10)
        ax.set_xlabel("tokens trained (billions)")
        ax.set_ylabel(dataset.metric_name)
        if plotted:
            ax.legend(fontsize=7)
        buf = io.BytesIO()
        fig.savefig(buf, format="svg", metadata={"Date": None})
        plt.close(fig)
    return buf.getvalue(), warnings


def render_plots(dataset: EvaluationDataset, breakdown, out_dir) -> list:
    """Write ``<benchmark>.svg`` into out_dir; returns (paths, warnings)."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    svg, warnings = render_dataset_svg(dataset, breakdown)
    path = out_dir / f"{dataset.benchmark_name}.svg"
    path.write_bytes(svg)
    return [path], warnings
