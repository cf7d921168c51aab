"""Figure rendering for the report paths (written to files, Agg backend)."""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def save_grid_heatmap(means, m_values, n_values, path, title="Mean propagation time on m x n grids"):
    """Annotated heatmap of grid means, rows m and columns n."""
    data = np.full((len(m_values), len(n_values)), np.nan)
    for i, m in enumerate(m_values):
        for j, n in enumerate(n_values):
            s = means.get((m, n))
            if s is not None and not math.isnan(s.mean):
                data[i, j] = s.mean
    fig, ax = plt.subplots(figsize=(1.0 + 0.62 * len(n_values), 0.9 + 0.52 * len(m_values)))
    im = ax.imshow(data, cmap="viridis", aspect="auto")
    ax.set_xticks(range(len(n_values)), [str(n) for n in n_values])
    ax.set_yticks(range(len(m_values)), [str(m) for m in m_values])
    ax.set_xlabel("n")
    ax.set_ylabel("m")
    ax.set_title(title)
    if len(m_values) * len(n_values) <= 400:
        vmid = np.nanmean(data) if np.isfinite(data).any() else 0.0
        for i in range(len(m_values)):
            for j in range(len(n_values)):
                if np.isfinite(data[i, j]):
                    color = "white" if data[i, j] < vmid else "black"
                    ax.text(j, i, f"{data[i, j]:.2f}", ha="center", va="center",
                            fontsize=7, color=color)
    fig.colorbar(im, ax=ax, label="mean steps")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_hypercube_curve(summaries, dims, path, title="Mean propagation time on hypercubes"):
    """Means vs dimension with error bars and the dim + 0.8 advisory guide."""
    xs = [d for d in dims if d in summaries and not math.isnan(summaries[d].mean)]
    ys = [summaries[d].mean for d in xs]
    es = [0.0 if math.isnan(summaries[d].std_error) else summaries[d].std_error
          for d in xs]
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    ax.errorbar(xs, ys, yerr=es, fmt="o-", capsize=3, label="simulated mean")
    if xs:
        ax.plot(xs, [d + 0.8 for d in xs], "--", color="gray",
                label="dim + 0.8 (advisory)")
    ax.set_xlabel("dimension")
    ax.set_ylabel("mean steps")
    ax.set_title(title)
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_profile_figure(profile, path, level_bounds=None):
    """Dyadic-level step means (blue-growth and white-shrink phases)."""
    ks = [ls.k for ls in profile.levels]
    blue = [ls.blue_mean for ls in profile.levels]
    white = [ls.white_mean for ls in profile.levels]
    x = np.arange(len(ks))
    width = 0.38
    fig, ax = plt.subplots(figsize=(6.8, 4.2))
    ax.bar(x - width / 2, blue, width, label="blue count in [2^k, 2^(k+1))")
    ax.bar(x + width / 2, white, width, label="white count in (2^k, 2^(k+1)]")
    if level_bounds:
        bx = [i for i, k in enumerate(ks) if k in level_bounds]
        by = [level_bounds[ks[i]] for i in bx]
        ax.plot(bx, by, "k--x", label="level bound")
        ax.set_yscale("log")
    ax.set_xticks(x, [str(k) for k in ks])
    ax.set_xlabel("level k")
    ax.set_ylabel("mean steps in level")
    ax.set_title(f"Dyadic level profile: {profile.graph}, rule {profile.rule}")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
