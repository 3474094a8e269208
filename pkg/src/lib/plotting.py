"""Marginal histograms: the counts behind the plots, and deterministic SVG export."""

import logging
from typing import Mapping, Optional, Tuple

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from src.lib.error_handler import InputError  # noqa: E402

logger = logging.getLogger(__name__)

# fixed salt and no date metadata keep the SVG bytes stable across runs
matplotlib.rcParams["svg.hashsalt"] = "precond-lmc"


def histogram_counts(
    samples: np.ndarray, bins: int = 50, value_range: Optional[Tuple[float, float]] = None
) -> Tuple[np.ndarray, np.ndarray]:
    """Returns (counts, edges) of a 1-D sample."""
    samples = np.asarray(samples, dtype=float).reshape(-1)
    if samples.size == 0:
        raise InputError("cannot histogram an empty sample")
    if bins < 1:
        raise InputError(f"bins must be >= 1, got {bins}")
    return np.histogram(samples, bins=bins, range=value_range)


def save_histogram_svg(
    path: str,
    series: Mapping[str, np.ndarray],
    bins: int = 50,
    title: str = "",
    xlabel: str = "",
) -> None:
    """
    Overlaid density histograms of each named sample on one shared bin grid.
    """
    if not series:
        raise InputError("no samples to plot")
    pooled = np.concatenate([np.asarray(v, dtype=float).reshape(-1) for v in series.values()])
    if pooled.size == 0:
        raise InputError("cannot histogram an empty sample")
    edges = np.histogram_bin_edges(pooled, bins=bins)

    fig, ax = plt.subplots(figsize=(6, 4))
    for label, values in series.items():
        ax.hist(np.asarray(values, dtype=float).reshape(-1), bins=edges, density=True,
                alpha=0.5, label=label)
    ax.set_title(title)
    ax.set_xlabel(xlabel)
    ax.set_ylabel("density")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    logger.info(f"Wrote histogram to {path}")
