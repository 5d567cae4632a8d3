# src/traveling_wave_lab/plotting.py

"""Static SVG figures: profiles, heat kernels, front traces and region maps."""

from __future__ import annotations

from pathlib import Path

import matplotlib as mpl

mpl.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
import pandas as pd  # noqa: E402

from .shock_classify import jms_admissible_set, jms_beta  # noqa: E402

SVG_RC = {
    "svg.hashsalt": "traveling-wave-lab",
    "svg.fonttype": "none",
    "font.family": "sans-serif",
    "font.size": 9,
    "axes.labelsize": 9,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "figure.figsize": (5.5, 3.4),
    "lines.linewidth": 1.2,
}
mpl.rcParams.update(SVG_RC)

REGION_COLORS = {
    "Monostable": "#9ecae1",
    "Bistable": "#fdae6b",
    "Unstable": "#d9d9d9",
    "NegativeOnInterval": "#f7f7f7",
    "ReversedMonostable": "#c7e9c0",
    "Degenerate": "#000000",
}


def new(nrows: int = 1, ncols: int = 1):
    fig, ax = plt.subplots(nrows=nrows, ncols=ncols, layout="constrained")
    return fig, ax


def save(fig, path: str | Path) -> None:
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def profile_figure(profile_df: pd.DataFrame, title: str = "", reference: pd.DataFrame | None = None):
    """ū(ξ) with an optional reference curve (exact solution, other solver)."""
    fig, ax = new()
    ax.plot(profile_df["xi"], profile_df["u"], label="profile")
    if reference is not None:
        ax.plot(reference["xi"], reference["u"], "--", label="reference")
        ax.legend(frameon=False)
    ax.axvline(0.0, color="0.7", linewidth=0.6)
    ax.set_xlabel(r"$\xi$")
    ax.set_ylabel(r"$\bar u$")
    ax.set_title(title)
    return fig


def kernel_figure(kernel_df: pd.DataFrame, title: str = ""):
    fig, ax = new()
    ax.plot(kernel_df["x"], kernel_df["density"])
    ax.set_xlabel("x")
    ax.set_ylabel("G(x, t)")
    ax.set_title(title)
    return fig


def region_figure(region_df: pd.DataFrame, eps: float | None = None, delta: float | None = None, title: str = ""):
    """
    Reaction classes of -h over the (u_-, u_+) plane.

    With (eps, delta) the admissible endstate sets are shaded and the
    undercompressive halfline u_+ = -u_- + β, u_- > 2β, is drawn thick.
    """
    fig, ax = new()
    fig.set_size_inches(5.0, 4.6)
    for label, color in REGION_COLORS.items():
        part = region_df[region_df["reaction_class"] == label]
        if not part.empty:
            ax.scatter(part["u_minus"], part["u_plus"], s=2, marker="s", c=color, label=label, linewidths=0)
    lo = float(region_df["u_minus"].min())
    hi = float(region_df["u_minus"].max())
    grid = np.linspace(lo, hi, 2)
    ax.plot(grid, -grid, color="0.3", linewidth=0.6)
    if eps is not None and delta is not None:
        beta = jms_beta(eps, delta)
        um = np.linspace(max(lo, 0.0), hi, 400)[1:] if hi > 0 else np.empty(0)
        if um.size:
            bounds = np.array([jms_admissible_set(float(u), eps, delta).intervals[0] for u in um])
            ax.fill_between(um, bounds[:, 0], bounds[:, 1], color="0.2", alpha=0.18, linewidth=0, label="admissible")
        if hi > 2.0 * beta:
            halfline = np.array([max(lo, 2.0 * beta), hi])
            ax.plot(halfline, -halfline + beta, "k-", linewidth=2.4, label="undercompressive")
        ax.axvline(2.0 * beta, color="0.3", linestyle=":", linewidth=0.6)
    else:
        line = region_df[region_df["on_undercompressive_line"]]
        if not line.empty:
            ax.plot(line["u_minus"], line["u_plus"], "k.", markersize=2, label="undercompressive")
    ax.set_xlabel(r"$u_-$")
    ax.set_ylabel(r"$u_+$")
    ax.legend(frameon=False, markerscale=4, loc="lower left")
    ax.set_title(title)
    return fig
