"""Matplotlib renderings of the emitted grids: the conductor CDF with
its (lambda/496)^(5/6) comparison curve, the finite-difference PDF,
and the empirical-vs-theory overlay.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .theory import DISC_SUP, DistributionGrid


def plot_cdf(grid: DistributionGrid, path: str) -> str:
    """CDF curve with the (lambda/496)^(5/6) reference overlaid."""
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.plot(grid.lambdas, grid.cdf, color="tab:red", lw=1.5,
            label=f"{grid.source} CDF of N/H")
    lam = np.clip(grid.lambdas, 0.0, DISC_SUP)
    ax.plot(grid.lambdas, (lam / DISC_SUP) ** (5.0 / 6.0), color="black",
            lw=1.0, ls="--", label=r"$(\lambda/496)^{5/6}$")
    ax.set_xlabel(r"$\lambda$")
    ax.set_ylabel("cumulative fraction")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_pdf(pairs, path: str, dlam: float) -> str:
    """Finite-difference density curve."""
    lam = [x for x, _ in pairs]
    den = [y for _, y in pairs]
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.plot(lam, den, color="tab:blue", lw=1.2,
            label=rf"density, $\Delta\lambda = {dlam}$")
    ax.set_xlabel(r"$\lambda$")
    ax.set_ylabel("density of N/H")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_comparison(empirical: DistributionGrid, theory: DistributionGrid,
                    path: str) -> str:
    """Empirical and theoretical CDFs on one axis, difference below."""
    fig, (ax, axd) = plt.subplots(
        2, 1, figsize=(7, 6), sharex=True,
        gridspec_kw={"height_ratios": [3, 1]},
    )
    ax.plot(empirical.lambdas, empirical.cdf, color="tab:red", lw=1.2,
            label="empirical")
    ax.plot(theory.lambdas, theory.cdf, color="black", lw=1.0, ls="--",
            label="theory")
    ax.set_ylabel("CDF of N/H")
    ax.legend()
    axd.plot(empirical.lambdas, empirical.cdf - theory.cdf,
             color="tab:gray", lw=1.0)
    axd.axhline(0.0, color="black", lw=0.5)
    axd.set_xlabel(r"$\lambda$")
    axd.set_ylabel("difference")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
