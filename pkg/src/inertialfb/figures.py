"""Matplotlib renderings of the experiment outputs: iterate trajectories on
the toy objective's contour map, ISNR curves, and image panels."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .experiments import DeblurExperimentResult
from .objectives import TOY_CRITICAL_POINTS, toy_f_value, toy_g_value


def _toy_objective_grid(lim: float = 9.0, n: int = 300):
    xs = np.linspace(-lim, lim, n)
    ys = np.linspace(-lim, lim, n)
    zz = np.empty((n, n))
    for i, y in enumerate(ys):
        for j, x in enumerate(xs):
            p = np.array([x, y])
            zz[i, j] = toy_f_value(p) + toy_g_value(p)
    return xs, ys, zz


def render_toy_figure(results: list, path) -> Path:
    """One contour panel per momentum value, trajectories from every start
    overlaid, critical points marked."""
    betas = sorted({r.beta for r in results})
    xs, ys, zz = _toy_objective_grid()
    fig, axes = plt.subplots(1, len(betas), figsize=(4.2 * len(betas), 4.2), squeeze=False)
    for ax, beta in zip(axes[0], betas):
        ax.contour(xs, ys, zz, levels=25, linewidths=0.5, colors="gray")
        for r in (r for r in results if r.beta == beta):
            traj = np.array(r.result.iterates)
            ax.plot(traj[:, 0], traj[:, 1], ".-", markersize=2.5, linewidth=0.8,
                    label=f"start ({r.start[0]:g},{r.start[1]:g})")
        for c in TOY_CRITICAL_POINTS:
            ax.plot(*c, "r*", markersize=11)
        ax.set_title(f"momentum beta = {beta:g}")
        ax.set_xlabel("x1")
        ax.set_ylabel("x2")
        ax.set_aspect("equal")
    axes[0][0].legend(fontsize=7, loc="lower left")
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_deblur_figures(result: DeblurExperimentResult, out_dir) -> list:
    """ISNR-vs-iteration curves for every momentum value plus an image panel
    (original, observed, best restoration)."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []

    fig, ax = plt.subplots(figsize=(6.5, 4.5))
    for r in result.runs:
        ns = [rec.n for rec in r.result.records]
        ax.plot(ns, r.isnr_trace, label=f"beta = {r.beta:g}")
    ax.set_xlabel("iteration")
    ax.set_ylabel("ISNR [dB]")
    ax.legend(fontsize=8)
    ax.grid(True, linewidth=0.3)
    fig.tight_layout()
    p = out_dir / "deblur_isnr.png"
    fig.savefig(p, dpi=150)
    plt.close(fig)
    written.append(p)

    best = max(result.runs, key=lambda r: r.final_isnr)
    fig, axes = plt.subplots(1, 3, figsize=(10.5, 3.8))
    panels = [
        (result.original, "original"),
        (result.observed, "blurred + noisy"),
        (best.restored, f"restored (beta = {best.beta:g}, ISNR {best.final_isnr:.3f} dB)"),
    ]
    for ax, (img, title) in zip(axes, panels):
        ax.imshow(img, cmap="gray", vmin=0.0, vmax=1.0)
        ax.set_title(title, fontsize=9)
        ax.axis("off")
    fig.tight_layout()
    p = out_dir / "deblur_images.png"
    fig.savefig(p, dpi=150)
    plt.close(fig)
    written.append(p)
    return written
