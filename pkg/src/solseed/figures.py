"""Render report figures next to the CSV outputs.

Each chart mirrors one delimited report: injection rates per operator
(stats.csv), recall/FNR per operator (scores.csv), and net side-effect
counts per detector (side_effects.csv).
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .campaign import CampaignStats
from .detection import DetectionOutcome, ScoreTable, side_effect_counts

STATS_PNG = "stats.png"
SCORES_PNG = "scores.png"
SIDE_EFFECTS_PNG = "side_effects.png"

_BAR_COLOR = "#4878a8"
_FNR_COLOR = "#c44e52"


def render_stats_figure(stats: CampaignStats, path: str | Path) -> Path:
    """Bar chart of per-operator injection rates with mutant counts."""
    rows = stats.sorted_rows()
    fig, ax = plt.subplots(figsize=(7, 4))
    names = [row.operator for row in rows]
    rates = [row.injection_rate * 100 for row in rows]
    bars = ax.bar(names, rates, color=_BAR_COLOR)
    for bar, row in zip(bars, rows):
        ax.annotate(
            f"{row.mutants}",
            (bar.get_x() + bar.get_width() / 2, bar.get_height()),
            ha="center",
            va="bottom",
            fontsize=8,
        )
    ax.set_ylabel("Injection rate (% of parsed contracts)")
    ax.set_xlabel("Operator")
    ax.set_title(
        f"Injection rates ({stats.total_mutants} mutants over "
        f"{stats.parsed_contracts} contracts)"
    )
    ax.set_ylim(0, max(rates, default=1) * 1.2 or 1)
    fig.tight_layout()
    return _save(fig, path)


def render_scores_figure(table: ScoreTable, path: str | Path) -> Path:
    """Grouped bars of recall and FNR per operator."""
    rows = table.rows
    fig, ax = plt.subplots(figsize=(7, 4))
    xs = range(len(rows))
    width = 0.38
    recalls = [_as_float(row.recall) for row in rows]
    fnrs = [_as_float(row.fnr) for row in rows]
    ax.bar([x - width / 2 for x in xs], recalls, width, label="Recall", color=_BAR_COLOR)
    ax.bar([x + width / 2 for x in xs], fnrs, width, label="FNR", color=_FNR_COLOR)
    ax.set_xticks(list(xs))
    ax.set_xticklabels([row.operator for row in rows])
    ax.set_ylim(0, 1.05)
    ax.set_ylabel("Rate")
    ax.set_xlabel("Operator")
    total = table.total
    ax.set_title(f"Detection of injected vulnerabilities (TP={total.tp}, FN={total.fn})")
    ax.legend()
    fig.tight_layout()
    return _save(fig, path)


def render_side_effects_figure(
    outcomes: list[DetectionOutcome], path: str | Path
) -> Path:
    """Horizontal bars of net added/removed findings per (operator, detector)."""
    counts = side_effect_counts(outcomes)
    fig, ax = plt.subplots(figsize=(7, max(2.5, 0.35 * len(counts) + 1.5)))
    if counts:
        labels = [f"{op}: {det}" for op, det, _, _ in counts][::-1]
        added = [a for _, _, a, _ in counts][::-1]
        removed = [-r for _, _, _, r in counts][::-1]
        ys = range(len(labels))
        ax.barh(ys, added, color=_BAR_COLOR, label="added")
        ax.barh(ys, removed, color=_FNR_COLOR, label="removed")
        ax.set_yticks(list(ys))
        ax.set_yticklabels(labels, fontsize=8)
        ax.axvline(0, color="black", linewidth=0.8)
        ax.legend()
    else:
        ax.text(0.5, 0.5, "no side effects", ha="center", va="center")
        ax.set_axis_off()
    ax.set_xlabel("Findings changed by mutation")
    ax.set_title("Side effects per operator and detector")
    fig.tight_layout()
    return _save(fig, path)


def _as_float(ratio: str) -> float:
    return 0.0 if ratio == "-" else float(ratio)


def _save(fig, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
