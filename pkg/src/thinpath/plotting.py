"""Figure rendering for experiment output (headless, file-target only)."""

from typing import Sequence, Tuple

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be pinned first)

from .harness import ExperimentRow

GOLDEN = (1 + 5**0.5) / 2


def figure_size(width: float = 6.4) -> Tuple[float, float]:
    return (width, width / GOLDEN)


def plot_experiment_rows(rows: Sequence[ExperimentRow], path: str) -> str:
    """Render mean width ratios vs instance size to an image file.

    Returns the path written.  One marker per row; the reference line at
    ratio 1 is the unreachable ideal (the reference width itself).
    """
    ns = [r.n for r in rows]
    fig, ax = plt.subplots(figsize=figure_size())
    ax.plot(ns, [r.mean_spba for r in rows], marker="o", label="SPBA")
    ax.plot(ns, [r.mean_tsba for r in rows], marker="s", label="TSBA")
    ax.axhline(1.0, color="gray", linestyle=":", linewidth=1, label="reference")
    ax.set_xlabel("instance size n")
    ax.set_ylabel("mean width ratio")
    ax.set_title("Approximation quality on random disk hypergraphs")
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
