"""Figures written next to the CSV/JSON outputs of a run."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence, Tuple

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

DISTANCE_COLUMNS = ("l1_dist", "weighted_l1_dist", "sup_dist", "pair_l1_dist")


def plot_diagnostics(series, path: Path, title: str = ""):
    """Distances on a log scale and sandwich margins against the clock."""
    clocks = series.clocks
    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(7, 6), sharex=True)
    for name in DISTANCE_COLUMNS:
        if not series.records or name not in series.records[0]:
            continue
        y = series.column(name)
        if np.all(np.isnan(y)):
            continue
        ax1.semilogy(clocks, np.where(y > 0, y, np.nan), label=name)
    ax1.set_ylabel("distance")
    ax1.legend(loc="best", fontsize=8)
    for name in ("sandwich_margin_low", "sandwich_margin_high", "coeff_bound_margin"):
        y = series.column(name)
        if not np.all(np.isnan(y)):
            ax2.plot(clocks, y, label=name)
    ax2.axhline(0.0, color="k", lw=0.5)
    ax2.set_xlabel("clock")
    ax2.set_ylabel("margin")
    handles, _ = ax2.get_legend_handles_labels()
    if handles:
        ax2.legend(loc="best", fontsize=8)
    if title:
        fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_profiles(snapshots: Sequence[Tuple[float, object]], path: Path, reference=None, title: str = ""):
    """Snapshots of ``u (1 + r^2)``, which flattens the ``c/r^2`` far field."""
    fig, ax = plt.subplots(figsize=(7, 4))
    for clock, profile in snapshots:
        r = profile.grid.nodes
        ax.plot(r, profile.values * (1 + r**2), label=f"clock {clock:.4g}")
    if reference is not None:
        r = reference.grid.nodes
        ax.plot(r, reference.values * (1 + r**2), "k--", label="reference")
    ax.set_xlabel("r")
    ax.set_ylabel("u (1 + r^2)")
    ax.legend(loc="best", fontsize=8)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_curve(x, y, path: Path, xlabel: str, ylabel: str, title: str = "", marker=None):
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(x, y, "o-")
    if marker is not None:
        ax.axvline(marker, color="r", lw=0.8)
    ax.axhline(0.0, color="k", lw=0.5)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_table(radii, times, table, path: Path):
    fig, ax = plt.subplots(figsize=(6, 4))
    for j, t in enumerate(times):
        ax.plot(radii, table[:, j], "o-", label=f"t = {t:g}")
    ax.set_xlabel("r")
    ax.set_ylabel("B_k(r, t)")
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
