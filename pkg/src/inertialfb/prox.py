"""Closed-form scalar proximal maps, their separable lifts, and a brute-force
grid oracle used to validate them.

All maps here are set-valued in principle (the underlying penalties are
nonconvex); each function returns one deterministic element, with the
tie-break rule exposed as an argument.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import DimensionMismatch, EmptyGrid, NotOrthogonal


def prox_abs(x: float, gamma: float) -> float:
    """Shrinkage (soft threshold): prox of gamma*|.| at x."""
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    return x - np.sign(x) * min(abs(x), gamma)


def prox_neg_abs(x: float, gamma: float, tie_break: str = "keep_positive") -> float:
    """Prox of gamma*(-|.|) at x: pushes the argument away from zero by gamma.

    At x = 0 the minimizer set is {-gamma, +gamma}; `tie_break` selects
    +gamma ("keep_positive") or -gamma ("keep_negative").
    """
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    if x > 0:
        return x + gamma
    if x < 0:
        return x - gamma
    return gamma if tie_break == "keep_positive" else -gamma


def prox_l0(t: float, threshold_sq: float, tie_break: str = "keep_zero") -> float:
    """Hard threshold: prox of the weighted counting penalty at t.

    Keeps t when t**2 exceeds `threshold_sq` (equal to twice the penalty
    weight), zeroes it when below. At exact equality the minimizer set is
    {0, t}; the default tie-break prefers the sparse element.
    """
    if threshold_sq <= 0:
        raise ValueError("threshold_sq must be positive")
    t2 = t * t
    if t2 > threshold_sq:
        return t
    if t2 < threshold_sq:
        return 0.0
    return t if tie_break == "keep_value" else 0.0


def hard_threshold(u: np.ndarray, threshold_sq: float, tie_break: str = "keep_zero") -> np.ndarray:
    """Vectorized `prox_l0` over an array."""
    if threshold_sq <= 0:
        raise ValueError("threshold_sq must be positive")
    u = np.asarray(u, dtype=float)
    if tie_break == "keep_value":
        keep = u * u >= threshold_sq
    else:
        keep = u * u > threshold_sq
    return np.where(keep, u, 0.0)


_DEFAULT_TIE_BREAKS = {"abs": "keep_value", "neg_abs": "keep_positive", "l0": "keep_zero"}


@dataclass(frozen=True)
class ScalarProxSpec:
    """One coordinate's prox: which penalty, its weight, and the tie-break."""

    kind: str  # "abs" | "neg_abs" | "l0"
    weight: float  # gamma for abs/neg_abs, 2*lambda*gamma threshold for l0
    tie_break: str = ""

    def __post_init__(self):
        if self.kind not in _DEFAULT_TIE_BREAKS:
            raise ValueError(f"unknown prox kind {self.kind!r}")
        if self.weight <= 0:
            raise ValueError("weight must be positive")
        if not self.tie_break:
            object.__setattr__(self, "tie_break", _DEFAULT_TIE_BREAKS[self.kind])

    def __call__(self, x: float) -> float:
        if self.kind == "abs":
            return prox_abs(x, self.weight)
        if self.kind == "neg_abs":
            return prox_neg_abs(x, self.weight, self.tie_break)
        return prox_l0(x, self.weight, self.tie_break)

    def penalty(self, u: float) -> float:
        """The scalar penalty term this prox corresponds to (weight folded in
        for l0, where `weight` is the squared threshold 2*w)."""
        if self.kind == "abs":
            return abs(u)
        if self.kind == "neg_abs":
            return -abs(u)
        return 0.0 if u == 0 else 0.5 * self.weight


def prox_separable(x: np.ndarray, specs: Sequence[ScalarProxSpec]) -> np.ndarray:
    """Apply scalar proxes coordinatewise."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or len(specs) != x.shape[0]:
        raise DimensionMismatch(
            f"need one spec per coordinate: {len(specs)} specs, shape {x.shape}"
        )
    return np.array([spec(xi) for spec, xi in zip(specs, x)])


def prox_orthogonal_conjugate(
    x: np.ndarray,
    transform: "LinearOperatorHandle",
    inner_prox: Callable[[np.ndarray], np.ndarray],
    verify: bool = True,
    rtol: float = 1e-8,
) -> np.ndarray:
    """Prox of f(x) = h(Wx) for orthogonal W via adjoint conjugation:
    W^T inner_prox(W x).

    With `verify` the round trip W^T W x = x is checked on the given x and
    NotOrthogonal raised if it drifts beyond `rtol` relative to ||x||.
    """
    x = np.asarray(x, dtype=float)
    wx = transform.apply(x)
    if verify:
        back = transform.adjoint(wx)
        err = np.linalg.norm((back - x).ravel())
        if err > rtol * (1.0 + np.linalg.norm(x.ravel())):
            raise NotOrthogonal(f"round-trip error {err:g} exceeds tolerance")
    return transform.adjoint(inner_prox(wx))


def brute_force_prox_oracle(
    x: float,
    gamma: float,
    f_scalar: Callable[[np.ndarray], np.ndarray],
    lo: float | None = None,
    hi: float | None = None,
    step: float = 1e-4,
    f_values: np.ndarray | None = None,
) -> float:
    """Grid argmin of u -> (u-x)^2/(2*gamma) + f(u), independent of any
    closed form. Ties are resolved toward the smallest |u|.

    `f_scalar` must accept an ndarray. The default grid covers
    [x - 10*gamma - 10, x + 10*gamma + 10]; `f_values` may carry
    precomputed penalty values on exactly that grid (bulk testing).
    """
    if lo is None:
        lo = x - 10.0 * gamma - 10.0
    if hi is None:
        hi = x + 10.0 * gamma + 10.0
    u = np.arange(lo, hi + step, step)
    if u.size == 0:
        raise EmptyGrid(f"empty grid [{lo}, {hi}] step {step}")
    fv = f_scalar(u) if f_values is None else f_values
    t = u - x
    t *= t
    t *= 1.0 / (2.0 * gamma)
    t += fv
    i = int(np.argmin(t))
    ties = np.flatnonzero(t == t[i])
    if ties.size > 1:
        i = ties[np.argmin(np.abs(u[ties]))]
    return float(u[i])


class CachedProxOracle:
    """Brute-force oracle over a fixed master grid with the penalty values
    computed once; repeated queries slice the shared grid.

    Functionally identical to `brute_force_prox_oracle` restricted to the
    master range; exists because scanning millions of grid points per query
    from scratch is too slow for bulk validation.
    """

    def __init__(self, f_scalar, lo: float = -80.0, hi: float = 80.0, step: float = 1e-4):
        self.lo = lo
        self.step = step
        # integer-indexed so that 0.0 (and every multiple of step) is exact
        self.grid = np.arange(round(lo / step), round(hi / step) + 1) * step
        if self.grid.size == 0:
            raise EmptyGrid(f"empty grid [{lo}, {hi}] step {step}")
        self.f_values = np.asarray(f_scalar(self.grid), dtype=float)
        self._buf = np.empty_like(self.grid)

    def __call__(self, x: float, gamma: float) -> float:
        lo = x - 10.0 * gamma - 10.0
        hi = x + 10.0 * gamma + 10.0
        i0 = max(0, int(np.ceil((lo - self.lo) / self.step)))
        i1 = min(self.grid.size, int(np.floor((hi - self.lo) / self.step)) + 1)
        if i1 <= i0:
            raise EmptyGrid(f"query range [{lo}, {hi}] outside master grid")
        u = self.grid[i0:i1]
        t = self._buf[: i1 - i0]
        np.subtract(u, x, out=t)
        np.multiply(t, t, out=t)
        t *= 1.0 / (2.0 * gamma)
        t += self.f_values[i0:i1]
        i = int(np.argmin(t))
        ties = np.flatnonzero(t == t[i])
        if ties.size > 1:
            i = ties[np.argmin(np.abs(u[ties]))]
        return float(u[i])
