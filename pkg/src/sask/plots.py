"""Figure rendering for benchmark reports."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402


def render_solution_figure(x: np.ndarray, computed: np.ndarray,
                           reference: np.ndarray, path: str | Path,
                           title: str = "") -> Path:
    """Computed solution (markers) against the reference (line), plus error."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig, (ax0, ax1) = plt.subplots(
        2, 1, figsize=(7, 6), sharex=True,
        gridspec_kw={"height_ratios": [3, 1]})
    ax0.plot(x, reference, "-", color="k", lw=1.2, label="reference")
    ax0.plot(x, computed, "o", ms=4, mfc="none", color="tab:blue",
             label="computed")
    ax0.set_ylabel("u")
    ax0.legend(frameon=False)
    if title:
        ax0.set_title(title)
    ax1.semilogy(x, np.abs(computed - reference) + 1e-300, ".-",
                 color="tab:red", lw=0.8, ms=3)
    ax1.set_xlabel("x")
    ax1.set_ylabel("|error|")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_comparison_figure(x: np.ndarray, solutions: dict[str, np.ndarray],
                             reference: np.ndarray, path: str | Path,
                             title: str = "") -> Path:
    """Overlay several solvers' solutions and their pointwise errors."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig, (ax0, ax1) = plt.subplots(
        2, 1, figsize=(7, 6), sharex=True,
        gridspec_kw={"height_ratios": [3, 1]})
    ax0.plot(x, reference, "-", color="k", lw=1.2, label="reference")
    markers = ["o", "s", "^", "v"]
    for (label, y), marker in zip(solutions.items(), markers):
        ax0.plot(x, y, marker, ms=4, mfc="none", label=label)
        ax1.semilogy(x, np.abs(y - reference) + 1e-300, ".-", lw=0.8, ms=3,
                     label=label)
    ax0.set_ylabel("u")
    ax0.legend(frameon=False)
    if title:
        ax0.set_title(title)
    ax1.set_xlabel("x")
    ax1.set_ylabel("|error|")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
