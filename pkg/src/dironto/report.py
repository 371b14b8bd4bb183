"""Figure rendering for the tabulation report.

One stacked bar per (article, slot) showing how the extraction scored
against the gold annotations; written next to the CSV tables.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .tables import HitMark  # noqa: E402

_MARK_STYLE = [
    (HitMark.CORRECT, "correct", "#2a9d4e"),
    (HitMark.INCOMPLETE, "incomplete", "#e9a13b"),
    (HitMark.WRONG, "wrong", "#c94040"),
    (HitMark.NOT_APPLICABLE, "n/a", "#9aa0a6"),
]
_SLOTS = ("subject", "verb", "object")


def render_hit_summary(summary: dict, path) -> Path:
    """Stacked hit-mark counts per article and slot; returns the file path."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)

    articles = sorted(summary)
    labels = [f"Art. {a}\n{slot}" for a in articles for slot in _SLOTS]
    xs = range(len(labels))

    fig, ax = plt.subplots(figsize=(max(6.0, 0.85 * len(labels)), 4.0))
    bottoms = [0.0] * len(labels)
    for mark, label, color in _MARK_STYLE:
        heights = [
            summary[a][slot].get(mark, 0)
            for a in articles for slot in _SLOTS
        ]
        ax.bar(xs, heights, bottom=bottoms, label=label, color=color,
               width=0.7, edgecolor="white", linewidth=0.5)
        bottoms = [b + h for b, h in zip(bottoms, heights)]

    ax.set_xticks(list(xs))
    ax.set_xticklabels(labels, fontsize=8)
    ax.set_ylabel("rows")
    ax.set_title("Extraction hit marks vs. gold annotations")
    ax.yaxis.get_major_locator().set_params(integer=True)
    ax.legend(fontsize=8, ncols=len(_MARK_STYLE))
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
