"""Linear operators for the image-restoration experiment: Gaussian blur with
an exact adjoint under three boundary rules, and the multilevel orthonormal
2D Haar transform. Plus a power-iteration norm estimator."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.signal import correlate

from .errors import BadDimensions, DimensionMismatch, InvalidKernel, ZeroVector

_PAD_MODES = {"symmetric": "symmetric", "zero": "constant", "periodic": "wrap"}


@dataclass(frozen=True)
class LinearOperatorHandle:
    """Matrix-free operator: apply/adjoint callables plus shape metadata.

    `apply` maps arrays of shape `in_shape` to `out_shape`; `adjoint` the
    reverse. `in_dim`/`out_dim` are the flattened sizes.
    """

    in_shape: tuple
    out_shape: tuple
    apply: Callable[[np.ndarray], np.ndarray]
    adjoint: Callable[[np.ndarray], np.ndarray]

    @property
    def in_dim(self) -> int:
        return int(np.prod(self.in_shape))

    @property
    def out_dim(self) -> int:
        return int(np.prod(self.out_shape))


def identity_operator(shape) -> LinearOperatorHandle:
    shape = tuple(shape)
    return LinearOperatorHandle(shape, shape, lambda x: np.array(x, dtype=float), lambda y: np.array(y, dtype=float))


def gaussian_kernel(size: int, sigma: float) -> np.ndarray:
    """Normalized 2D Gaussian kernel, entries exp(-(i^2+j^2)/(2 sigma^2))."""
    if size % 2 == 0 or size < 1:
        raise InvalidKernel(f"kernel size must be odd and positive, got {size}")
    if sigma <= 0:
        raise InvalidKernel(f"sigma must be positive, got {sigma}")
    r = size // 2
    i, j = np.mgrid[-r : r + 1, -r : r + 1]
    k = np.exp(-(i * i + j * j) / (2.0 * sigma * sigma))
    return k / k.sum()


@dataclass(frozen=True)
class GaussianBlurConfig:
    image_rows: int
    image_cols: int
    kernel_size: int = 9
    sigma: float = 4.0
    boundary: str = "symmetric"  # or "zero", "periodic"

    def __post_init__(self):
        if self.boundary not in _PAD_MODES:
            raise ValueError(f"unknown boundary rule {self.boundary!r}")
        gaussian_kernel(self.kernel_size, self.sigma)  # validates size/sigma
        r = self.kernel_size // 2
        if self.image_rows <= r or self.image_cols <= r:
            raise BadDimensions("image smaller than the kernel radius")


def _check_image(x, rows, cols) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != (rows, cols):
        raise DimensionMismatch(f"expected {(rows, cols)} image, got {x.shape}")
    return x


def make_blur_operator(config: GaussianBlurConfig) -> LinearOperatorHandle:
    """Blur operator: pad by the configured boundary rule, correlate with the
    kernel, crop. The adjoint is built as the exact transpose: correlate the
    zero-embedded input with the flipped kernel, then fold the padded border
    contributions back onto their source pixels."""
    kernel = gaussian_kernel(config.kernel_size, config.sigma)
    flipped = kernel[::-1, ::-1]
    r = config.kernel_size // 2
    rows, cols = config.image_rows, config.image_cols
    pad_mode = _PAD_MODES[config.boundary]

    # Flat index of the source pixel behind each padded position; drives the
    # fold-back accumulation that realizes the transpose of the padding step.
    src = np.pad(
        np.arange(rows * cols).reshape(rows, cols), r, mode=pad_mode
    ).ravel() if pad_mode != "constant" else None

    def apply(x: np.ndarray) -> np.ndarray:
        x = _check_image(x, rows, cols)
        padded = np.pad(x, r, mode=pad_mode)
        return correlate(padded, kernel, mode="valid", method="direct")

    def adjoint(y: np.ndarray) -> np.ndarray:
        y = _check_image(y, rows, cols)
        full = correlate(np.pad(y, 2 * r, mode="constant"), flipped, mode="valid", method="direct")
        if src is None:  # zero padding: transpose is a plain crop
            return full[r : r + rows, r : r + cols]
        out = np.zeros(rows * cols)
        np.add.at(out, src, full.ravel())
        return out.reshape(rows, cols)

    shape = (rows, cols)
    return LinearOperatorHandle(shape, shape, apply, adjoint)


@dataclass(frozen=True)
class HaarConfig:
    image_rows: int
    image_cols: int
    levels: int = 4

    def __post_init__(self):
        d = 1 << self.levels
        if self.levels < 1:
            raise BadDimensions("need at least one decomposition level")
        if self.image_rows % d or self.image_cols % d:
            raise BadDimensions(
                f"image dimensions {(self.image_rows, self.image_cols)} not divisible by {d}"
            )


_SQRT2 = math.sqrt(2.0)


def haar_forward(image: np.ndarray, config: HaarConfig) -> np.ndarray:
    """Multilevel orthonormal 2D Haar analysis. Per level: pairwise
    (a, b) -> ((a+b)/sqrt2, (a-b)/sqrt2) along columns then rows, recursing
    on the approximation quadrant (stored top-left)."""
    c = _check_image(image, config.image_rows, config.image_cols).copy()
    s, t = c.shape
    for _ in range(config.levels):
        a = c[:s, :t]
        lo = (a[:, 0::2] + a[:, 1::2]) / _SQRT2
        hi = (a[:, 0::2] - a[:, 1::2]) / _SQRT2
        a = np.concatenate([lo, hi], axis=1)
        lo = (a[0::2, :] + a[1::2, :]) / _SQRT2
        hi = (a[0::2, :] - a[1::2, :]) / _SQRT2
        c[:s, :t] = np.concatenate([lo, hi], axis=0)
        s //= 2
        t //= 2
    return c


def haar_inverse(coeffs: np.ndarray, config: HaarConfig) -> np.ndarray:
    """Exact inverse of `haar_forward` (synthesis, coarsest level first)."""
    x = _check_image(coeffs, config.image_rows, config.image_cols).copy()
    sizes = [(x.shape[0] >> k, x.shape[1] >> k) for k in range(config.levels)]
    for s, t in reversed(sizes):
        a = x[:s, :t]
        lo, hi = a[: s // 2, :], a[s // 2 :, :]
        b = np.empty((s, t))
        b[0::2, :] = (lo + hi) / _SQRT2
        b[1::2, :] = (lo - hi) / _SQRT2
        lo, hi = b[:, : t // 2], b[:, t // 2 :]
        a2 = np.empty((s, t))
        a2[:, 0::2] = (lo + hi) / _SQRT2
        a2[:, 1::2] = (lo - hi) / _SQRT2
        x[:s, :t] = a2
    return x


def make_haar_operator(config: HaarConfig) -> LinearOperatorHandle:
    shape = (config.image_rows, config.image_cols)
    return LinearOperatorHandle(
        shape,
        shape,
        lambda x: haar_forward(x, config),
        lambda c: haar_inverse(c, config),
    )


def operator_norm(op: LinearOperatorHandle, iters: int = 50, seed: int = 0) -> float:
    """Power-iteration estimate of the spectral norm of `op` (applied to
    op^T op, so general non-symmetric operators are handled)."""
    if iters < 1:
        raise ValueError("iters must be >= 1")
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(op.in_shape)
    norm_v = np.linalg.norm(v.ravel())
    if norm_v == 0:
        raise ZeroVector("degenerate starting vector")
    v /= norm_v
    est = 0.0
    for _ in range(iters):
        w = op.adjoint(op.apply(v))
        norm_w = np.linalg.norm(w.ravel())
        if norm_w == 0:
            raise ZeroVector("power iteration collapsed to zero")
        est = math.sqrt(norm_w)
        v = w / norm_w
    return est


def adjoint_mismatch(op: LinearOperatorHandle, seed: int = 0, trials: int = 1) -> float:
    """Largest |<Ax, y> - <x, A^T y>| over random pairs; used in tests."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        x = rng.standard_normal(op.in_shape)
        y = rng.standard_normal(op.out_shape)
        lhs = float(np.vdot(op.apply(x), y))
        rhs = float(np.vdot(x, op.adjoint(y)))
        worst = max(worst, abs(lhs - rhs))
    return worst
