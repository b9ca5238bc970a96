"""The two reproduction experiments: the 2D toy problem over a grid of
momentum values and starting corners, and wavelet-regularized deblurring of
a blurred noisy image with an ISNR sweep over momentum values."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .errors import BadDimensions, ImageLoadError
from .objectives import (
    DeblurProblem,
    TOY_CRITICAL_POINTS,
    TOY_LIP_GRAD,
    make_toy_problem,
    toy_critical_point_check,
)
from .operators import GaussianBlurConfig, HaarConfig, make_blur_operator, operator_norm
from .pgm import pgm_read, pgm_write
from .solver import RunResult, SolverParams, run, write_trace_csv

DEFAULT_TOY_STARTS = ((-8.0, -8.0), (-8.0, 8.0), (8.0, -8.0), (8.0, 8.0))
DEFAULT_TOY_BETAS = (0.0, 0.199, 0.299)
DEFAULT_DEBLUR_BETAS = (0.4, 0.2, 0.01, 0.0001, 1e-7, 0.0)


def toy_alpha_rule(beta: float) -> float:
    return (0.99999 - 2.0 * beta) / TOY_LIP_GRAD


def deblur_alpha_rule(beta: float, lip_grad_g: float = 2.0) -> float:
    return (0.999999 - 2.0 * beta) / lip_grad_g


def isnr(original: np.ndarray, observed: np.ndarray, estimate: np.ndarray) -> float:
    """Improvement in signal-to-noise ratio, in dB. Returns +inf when the
    estimate matches the original exactly."""
    x = np.asarray(original, dtype=float).ravel()
    b = np.asarray(observed, dtype=float).ravel()
    e = np.asarray(estimate, dtype=float).ravel()
    if x.shape != b.shape or x.shape != e.shape:
        raise ValueError("original, observed and estimate must share a shape")
    err = float(np.sum((x - e) ** 2))
    ref = float(np.sum((x - b) ** 2))
    if err == 0.0:
        return math.inf
    return 10.0 * math.log10(ref / err)


def gaussian_noise(shape, seed: int, std: float) -> np.ndarray:
    """Seeded zero-mean white Gaussian noise. std = 0 gives exact zeros."""
    if std < 0:
        raise ValueError("std must be nonnegative")
    if std == 0.0:
        return np.zeros(shape)
    return std * np.random.default_rng(seed).standard_normal(shape)


def synthetic_image(size: int = 128) -> np.ndarray:
    """Deterministic grayscale test scene: smooth ramps plus piecewise
    constant shapes, values in [0, 1]. Used when no image file is given."""
    yy, xx = np.mgrid[0:size, 0:size] / (size - 1.0)
    img = 0.30 + 0.40 * xx + 0.08 * np.sin(4.0 * np.pi * yy)
    img += 0.35 * (((xx - 0.35) ** 2 + (yy - 0.40) ** 2) < 0.06)
    img -= 0.25 * ((np.abs(xx - 0.70) < 0.12) & (np.abs(yy - 0.65) < 0.18))
    img += 0.15 * ((xx + yy) > 1.45)
    return np.clip(img, 0.0, 1.0)


def _beta_tag(beta: float) -> str:
    return f"{beta:g}".replace("-", "m")


# --- Toy experiment ---------------------------------------------------------

@dataclass(frozen=True)
class ToyExperimentConfig:
    starts: Sequence[tuple] = DEFAULT_TOY_STARTS
    betas: Sequence[float] = DEFAULT_TOY_BETAS
    iterations: int = 100


@dataclass
class ToyRunResult:
    start: tuple
    beta: float
    alpha: float
    result: RunResult
    terminal: np.ndarray
    nearest_critical: np.ndarray
    distance: float
    is_critical: bool


def toy_params(beta: float, iterations: int) -> SolverParams:
    return SolverParams.constant(
        toy_alpha_rule(beta), beta, iterations, lip_grad_g=TOY_LIP_GRAD
    )


def run_toy_experiment(
    config: ToyExperimentConfig = ToyExperimentConfig(),
    out_dir: Optional[Path] = None,
) -> list[ToyRunResult]:
    problem = make_toy_problem()
    results = []
    for start in config.starts:
        for beta in config.betas:
            params = toy_params(beta, config.iterations)
            x0 = np.asarray(start, dtype=float)
            res = run(problem, params, x0, x0, keep_iterates=True)
            terminal = res.final.x_curr
            dists = [float(np.linalg.norm(terminal - c)) for c in TOY_CRITICAL_POINTS]
            k = int(np.argmin(dists))
            results.append(
                ToyRunResult(
                    start=tuple(start),
                    beta=beta,
                    alpha=params.alpha_lower,
                    result=res,
                    terminal=terminal,
                    nearest_critical=TOY_CRITICAL_POINTS[k],
                    distance=dists[k],
                    is_critical=toy_critical_point_check(terminal, 1e-3),
                )
            )
    if out_dir is not None:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        for r in results:
            tag = f"b{_beta_tag(r.beta)}_s{r.start[0]:g}_{r.start[1]:g}"
            write_trace_csv(out_dir / f"toy_trace_{tag}.csv", r.result.records)
            with open(out_dir / f"toy_trajectory_{tag}.csv", "w", newline="") as fh:
                w = csv.writer(fh)
                w.writerow(["n", "x1", "x2"])
                for n, x in enumerate(r.result.iterates):
                    w.writerow([n, f"{x[0]:.12e}", f"{x[1]:.12e}"])
        with open(out_dir / "toy_summary.csv", "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(
                ["beta", "start_x", "start_y", "final_obj", "final_gap", "isnr_or_critpoint", "distance"]
            )
            for r in results:
                crit = f"({r.nearest_critical[0]:g},{r.nearest_critical[1]:g})"
                w.writerow(
                    [
                        f"{r.beta:g}", f"{r.start[0]:g}", f"{r.start[1]:g}",
                        f"{r.result.final.obj:.12e}", f"{r.result.final.gap:.12e}",
                        crit, f"{r.distance:.12e}",
                    ]
                )
    return results


# --- Deblurring experiment --------------------------------------------------

@dataclass(frozen=True)
class DeblurExperimentConfig:
    image_path: Optional[str] = None  # None -> synthetic 128x128 scene
    kernel_size: int = 9
    kernel_sigma: float = 4.0
    boundary: str = "symmetric"
    noise_std: float = 1e-6
    noise_seed: int = 12345
    lam: float = 1e-5
    betas: Sequence[float] = DEFAULT_DEBLUR_BETAS
    iterations: int = 300
    haar_levels: int = 4
    lip_grad_g: float = 2.0


@dataclass
class DeblurRunResult:
    beta: float
    alpha: float
    result: RunResult
    restored: np.ndarray
    isnr_trace: list  # ISNR at every recorded state
    final_isnr: float
    distance_to_original: float


@dataclass
class DeblurExperimentResult:
    config: DeblurExperimentConfig
    original: np.ndarray
    observed: np.ndarray
    measured_norm: float
    runs: list  # DeblurRunResult per beta


def load_grayscale_image(path) -> np.ndarray:
    try:
        image, _ = pgm_read(path)
    except OSError as exc:
        raise ImageLoadError(f"cannot read image {path}: {exc}") from exc
    return image


def deblur_params(beta: float, iterations: int, lip_grad_g: float = 2.0) -> SolverParams:
    return SolverParams.constant(
        deblur_alpha_rule(beta, lip_grad_g), beta, iterations, lip_grad_g=lip_grad_g
    )


def run_deblur_experiment(
    config: DeblurExperimentConfig = DeblurExperimentConfig(),
    out_dir: Optional[Path] = None,
) -> DeblurExperimentResult:
    if config.image_path is None:
        original = synthetic_image(128)
    else:
        original = load_grayscale_image(config.image_path)
    rows, cols = original.shape
    d = 1 << config.haar_levels
    if rows % d or cols % d:
        raise BadDimensions(f"image dimensions {rows}x{cols} must be divisible by {d}")

    blur_config = GaussianBlurConfig(
        image_rows=rows, image_cols=cols,
        kernel_size=config.kernel_size, sigma=config.kernel_sigma,
        boundary=config.boundary,
    )
    blur = make_blur_operator(blur_config)
    haar = HaarConfig(image_rows=rows, image_cols=cols, levels=config.haar_levels)
    observed = blur.apply(original) + gaussian_noise(
        original.shape, config.noise_seed, config.noise_std
    )
    measured_norm = operator_norm(blur, iters=50, seed=0)
    problem = DeblurProblem(
        blur=blur, observed=observed, haar=haar, lam=config.lam,
        lip_grad_g=config.lip_grad_g,
    ).handle()

    runs = []
    for beta in config.betas:
        params = deblur_params(beta, config.iterations, config.lip_grad_g)
        isnr_trace = []
        res = run(
            problem, params, observed, observed,
            callback=lambda s: isnr_trace.append(isnr(original, observed, s.x_curr)),
        )
        restored = res.final.x_curr
        runs.append(
            DeblurRunResult(
                beta=beta,
                alpha=params.alpha_lower,
                result=res,
                restored=restored,
                isnr_trace=isnr_trace,
                final_isnr=isnr_trace[-1],
                distance_to_original=float(np.linalg.norm(original - restored)),
            )
        )

    out = DeblurExperimentResult(
        config=config, original=original, observed=observed,
        measured_norm=measured_norm, runs=runs,
    )
    if out_dir is not None:
        _write_deblur_artifacts(out, out_dir)
    return out


def _write_deblur_artifacts(result: DeblurExperimentResult, out_dir) -> None:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    pgm_write(out_dir / "original.pgm", result.original)
    pgm_write(out_dir / "observed.pgm", result.observed)
    image_name = result.config.image_path or "synthetic-128"
    for r in result.runs:
        tag = f"b{_beta_tag(r.beta)}"
        write_trace_csv(out_dir / f"deblur_trace_{tag}.csv", r.result.records)
        with open(out_dir / f"deblur_isnr_{tag}.csv", "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["n", "isnr"])
            for rec, v in zip(r.result.records, r.isnr_trace):
                w.writerow([rec.n, f"{v:.12e}"])
        pgm_write(out_dir / f"restored_{tag}.pgm", r.restored)
    with open(out_dir / "deblur_summary.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["beta", "image", "final_obj", "final_gap", "isnr_or_critpoint", "distance"])
        for r in result.runs:
            w.writerow(
                [
                    f"{r.beta:g}", image_name,
                    f"{r.result.final.obj:.12e}", f"{r.result.final.gap:.12e}",
                    f"{r.final_isnr:.12e}", f"{r.distance_to_original:.12e}",
                ]
            )
    with open(out_dir / "deblur_meta.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["key", "value"])
        c = result.config
        for key, value in [
            ("measured_operator_norm", f"{result.measured_norm:.12e}"),
            ("lambda", f"{c.lam:g}"),
            ("noise_std", f"{c.noise_std:g}"),
            ("noise_seed", c.noise_seed),
            ("boundary", c.boundary),
            ("iterations", c.iterations),
            ("image", image_name),
        ]:
            w.writerow([key, value])
