"""Score panels: per-bin average feature scores with Q1/Q3 whiskers."""

from pathlib import Path

import numpy as np

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def score_panels(records, path, title=None):
    """One panel per bin count: mean usefulness score per feature with
    Q1/Q3 bars, annotated with the models' average test accuracy."""
    by_bins = {}
    for record in records:
        by_bins.setdefault(record.bins, []).append(record)
    bins_list = sorted(by_bins)
    fig, axes = plt.subplots(1, len(bins_list),
                             figsize=(5.5 * len(bins_list), 4.2), squeeze=False)
    for ax, bins in zip(axes[0], bins_list):
        group = by_bins[bins]
        features = sorted(group[0].usefulness_scores)
        matrix = np.array([[r.usefulness_scores[f] for f in features] for r in group],
                          dtype=float)
        mean = matrix.mean(axis=0)
        q1 = np.percentile(matrix, 25, axis=0)
        q3 = np.percentile(matrix, 75, axis=0)
        order = np.argsort(-mean)
        xs = np.arange(len(features))
        ax.bar(xs, mean[order], color="#4878b0")
        ax.errorbar(xs, mean[order], yerr=[mean[order] - q1[order], q3[order] - mean[order]],
                    fmt="none", ecolor="#303030", capsize=3)
        ax.set_xticks(xs)
        ax.set_xticklabels([features[i] for i in order], rotation=60, ha="right",
                           fontsize=8)
        accuracy = float(np.mean([r.test_accuracy for r in group]))
        ax.set_title(f"{bins} bins (avg test acc {accuracy:.3f})")
        ax.set_ylabel("usefulness score")
    if title:
        fig.suptitle(title)
    fig.tight_layout()
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
