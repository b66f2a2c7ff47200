"""Static plot emission for the experiment drivers.

Plots are rendered from the already-written data arrays; they are a viewing
convenience and never an acceptance surface. matplotlib is imported lazily
with the Agg backend so headless runs work.
"""

from __future__ import annotations

import numpy as np


def _plt():
    import matplotlib

    matplotlib.use("Agg", force=False)
    import matplotlib.pyplot as plt

    return plt


def overlay(path, x, curves, title, xlabel="x", ylabel="u"):
    """curves: iterable of (label, y)."""
    plt = _plt()
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for label, y in curves:
        ax.plot(x, y, label=label, lw=1.2)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def energy_series(path, t, ratios, title):
    plt = _plt()
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for label, r in ratios:
        ax.plot(t, r, label=label, lw=1.0)
    ax.set_xlabel("t")
    ax.set_ylabel("E(t)/E(0)")
    ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def loglog_errors(path, series, title):
    """series: iterable of (label, resolutions, errors)."""
    plt = _plt()
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for label, ns, errs in series:
        ax.loglog(ns, errs, "o-", label=label)
    ax.set_xlabel("N")
    ax.set_ylabel("relative L2 error")
    ax.set_title(title)
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def spacetime(path, x, times, fields, title):
    """fields: array (n_times, n_nodes); x descending is handled."""
    plt = _plt()
    order = np.argsort(x)
    fig, ax = plt.subplots(figsize=(6.4, 4.6))
    mesh = ax.pcolormesh(
        np.asarray(x)[order],
        np.asarray(times),
        np.asarray(fields)[:, order],
        shading="nearest",
        cmap="viridis",
    )
    fig.colorbar(mesh, ax=ax, label="u")
    ax.set_xlabel("x")
    ax.set_ylabel("t")
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
