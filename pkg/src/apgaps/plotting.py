"""Figure rendering for CLI reports.

Every function writes a file and returns the path; nothing opens a window
(the Agg backend is forced).  Figures accompany the delimited output, they
never replace it.
"""

from __future__ import annotations

import math
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .fit import GumbelParams, LognormalParams, PowerLawFit, QuadFit, TauModelFit
from .fit import gumbel_pdf, lognormal_pdf
from .stats import Histogram

_DPI = 150


def _finish(fig, path: str) -> str:
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return path


def plot_quad_fit(
    points: Sequence[tuple[int, float]], fit: QuadFit, title: str, path: str
) -> str:
    fig, ax = plt.subplots(figsize=(6, 4))
    ns = [n for n, _ in points]
    ys = [y for _, y in points]
    ax.plot(ns, ys, "o", color="tab:blue", label="data")
    grid = np.linspace(min(ns), max(ns), 200)
    ax.plot(grid, [fit.value(n) for n in grid], "-", color="tab:red",
            label=f"{fit.a:.3g} n^2 + {fit.b:.3g} n" + (f" + {fit.c:.3g}" if fit.c else ""))
    ax.set_xlabel("record index n")
    ax.set_ylabel("gap")
    ax.set_title(title)
    ax.legend()
    return _finish(fig, path)


def plot_distribution_fit(
    hist: Histogram,
    params: GumbelParams | LognormalParams,
    title: str,
    path: str,
) -> str:
    fig, ax = plt.subplots(figsize=(6, 4))
    centers = np.array(hist.bin_centers())
    widths = np.diff(hist.bin_edges)
    ax.bar(centers, hist.densities(), width=widths, color="tab:gray",
           alpha=0.6, edgecolor="black", label="empirical density")
    grid = np.linspace(hist.bin_edges[0], hist.bin_edges[-1], 400)
    if isinstance(params, GumbelParams):
        curve = gumbel_pdf(grid, params)
        label = f"Gumbel(mu={params.mu:.4g}, beta={params.beta:.4g})"
    else:
        curve = lognormal_pdf(grid, params)
        label = f"lognormal(mu={params.log_mu:.4g}, sigma={params.log_sigma:.4g})"
    ax.plot(grid, curve, "-", color="tab:red", label=label)
    ax.set_xlabel("gap")
    ax.set_ylabel("density")
    ax.set_title(title)
    ax.legend()
    return _finish(fig, path)


def plot_power_law(
    points: Sequence[tuple[int, float]], fit: PowerLawFit, title: str, path: str
) -> str:
    fig, ax = plt.subplots(figsize=(6, 4))
    ns = [n for n, _ in points]
    ss = [s for _, s in points]
    ax.loglog(ns, ss, "o", color="tab:blue", label="skewness")
    grid = np.geomspace(min(ns), max(ns), 200)
    ax.loglog(grid, [fit.value(n) for n in grid], "-", color="tab:red",
              label=f"{fit.c:.3g} n^(-{fit.alpha:.3g})")
    ax.set_xlabel("record index n")
    ax.set_ylabel("skewness")
    ax.set_title(title)
    ax.legend()
    return _finish(fig, path)


def plot_tau(
    points: Sequence[tuple[int, float]], fit: TauModelFit, title: str, path: str
) -> str:
    fig, ax = plt.subplots(figsize=(6, 4))
    xs = [x for x, _ in points]
    ts = [t for _, t in points]
    ax.semilogx(xs, ts, "o", color="tab:blue", label="tau-hat")
    grid = np.geomspace(min(xs), max(xs), 300)
    ax.semilogx(grid, [fit.value(x) for x in grid], "-", color="tab:red",
                label=f"2 - {fit.kappa:.3g}/(ln x - {fit.delta:.3g})")
    ax.axhline(2.0, color="black", linewidth=0.8, linestyle="--", label="limit 2")
    ax.set_xlabel("x")
    ax.set_ylabel("records per e-fold")
    ax.set_title(title)
    ax.legend()
    return _finish(fig, path)


def plot_iid_histogram(
    hist: Histogram, expected: float, title: str, path: str
) -> str:
    fig, ax = plt.subplots(figsize=(6, 4))
    centers = np.array(hist.bin_centers())
    widths = np.diff(hist.bin_edges)
    ax.bar(centers, hist.counts, width=widths, color="tab:gray",
           alpha=0.7, edgecolor="black", label="record counts")
    ax.axvline(expected, color="tab:red", linestyle="--",
               label=f"harmonic expectation {expected:.4g}")
    ax.set_xlabel("records per trial")
    ax.set_ylabel("trials")
    ax.set_title(title)
    ax.legend()
    return _finish(fig, path)
