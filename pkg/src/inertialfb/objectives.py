"""The two concrete composite problems used by the experiments.

Toy problem (2D): minimize |x1| - |x2| + x1^2 - log(1 + x1^2) + x2^2. The
smooth part has gradient Lipschitz constant 9/4 and the problem has exactly
two critical points, (0, 1/2) and (0, -1/2), both global minimizers.

Deblurring problem: Student-t misfit of the blur residual plus a counting
penalty on the Haar coefficients, lambda * #nonzero(Wx).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch
from .operators import HaarConfig, LinearOperatorHandle, haar_forward, haar_inverse
from .prox import hard_threshold, prox_abs, prox_neg_abs
from .solver import ProblemHandle

# --- Toy problem ------------------------------------------------------------

TOY_LIP_GRAD = 9.0 / 4.0
TOY_CRITICAL_POINTS = (np.array([0.0, 0.5]), np.array([0.0, -0.5]))


def _as_2vector(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != (2,):
        raise DimensionMismatch(f"expected a 2-vector, got shape {x.shape}")
    return x


def toy_g_value(x) -> float:
    x1, x2 = _as_2vector(x)
    return x1 * x1 - math.log1p(x1 * x1) + x2 * x2


def toy_g_gradient(x) -> np.ndarray:
    x1, x2 = _as_2vector(x)
    return np.array([2.0 * x1 - 2.0 * x1 / (1.0 + x1 * x1), 2.0 * x2])


def toy_f_value(x) -> float:
    x1, x2 = _as_2vector(x)
    return abs(x1) - abs(x2)


def toy_f_prox(x, gamma: float) -> np.ndarray:
    x1, x2 = _as_2vector(x)
    return np.array([prox_abs(x1, gamma), prox_neg_abs(x2, gamma)])


def make_toy_problem() -> ProblemHandle:
    return ProblemHandle(
        g_value=toy_g_value,
        g_gradient=toy_g_gradient,
        lip_grad_g=TOY_LIP_GRAD,
        f_value=toy_f_value,
        f_prox=toy_f_prox,
    )


def toy_critical_point_check(x, tol: float) -> bool:
    """First-order criticality: -grad g(x) must lie in the product of the
    subdifferentials of |.| at x1 and of -|.| at x2, within `tol`.

    Coordinates within `tol` of zero use the zero-point subdifferential
    ([-1, 1] for |.|, {-1, 1} for -|.|).
    """
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    x1, x2 = _as_2vector(x)
    v1, v2 = -toy_g_gradient(x)

    if abs(x1) <= tol:
        dist1 = max(0.0, abs(v1) - 1.0)  # distance to [-1, 1]
    else:
        dist1 = abs(v1 - math.copysign(1.0, x1))
    if abs(x2) <= tol:
        dist2 = min(abs(v2 - 1.0), abs(v2 + 1.0))  # distance to {-1, 1}
    else:
        dist2 = abs(v2 + math.copysign(1.0, x2))
    return dist1 <= tol and dist2 <= tol


# --- Deblurring problem -----------------------------------------------------

def student_t_value(x, blur: LinearOperatorHandle, observed: np.ndarray) -> float:
    """Sum of log(1 + r^2) over the blur residual r = Ax - b."""
    r = blur.apply(x) - observed
    return float(np.sum(np.log1p(r * r)))


def student_t_gradient(x, blur: LinearOperatorHandle, observed: np.ndarray) -> np.ndarray:
    r = blur.apply(x) - observed
    return blur.adjoint(2.0 * r / (1.0 + r * r))


class _StudentTOracles:
    """Student-t misfit value/gradient with the blur residual and gradient
    memoized per input array (matched by identity).

    The solver evaluates the misfit and its gradient at the same iterate
    several times per step (forward step, subgradient residual, objective
    trace) and the blur operator dominates the cost, so each iterate's
    residual r = Ax - b and gradient are computed once and reused.
    """

    def __init__(self, blur: LinearOperatorHandle, observed: np.ndarray, keep: int = 4):
        self.blur = blur
        self.observed = observed
        self.keep = keep
        self._entries = []  # (x, residual, gradient-or-None), newest last

    def _entry(self, x):
        for e in self._entries:
            if e[0] is x:
                return e
        e = [x, self.blur.apply(x) - self.observed, None]
        self._entries.append(e)
        del self._entries[: -self.keep]
        return e

    def value(self, x) -> float:
        r = self._entry(x)[1]
        return float(np.sum(np.log1p(r * r)))

    def gradient(self, x) -> np.ndarray:
        e = self._entry(x)
        if e[2] is None:
            r = e[1]
            e[2] = self.blur.adjoint(2.0 * r / (1.0 + r * r))
        return e[2]


def l0_wavelet_value(x, haar: HaarConfig, lam: float) -> float:
    """lambda times the number of exactly-nonzero Haar coefficients of x.

    Exact-zero counting is deliberate: zeros only ever enter through the
    hard-threshold prox, which produces them exactly.
    """
    return lam * float(np.count_nonzero(haar_forward(np.asarray(x, dtype=float), haar)))


@dataclass(frozen=True)
class DeblurProblem:
    """Blur operator, observed image, Haar setup and regularization weight,
    bundled with the derived composite-problem oracles."""

    blur: LinearOperatorHandle
    observed: np.ndarray
    haar: HaarConfig
    lam: float
    lip_grad_g: float = 2.0  # 2 * ||A||^2 <= 2 for a normalized kernel

    def handle(self) -> ProblemHandle:
        blur, b, haar, lam = self.blur, self.observed, self.haar, self.lam
        if lam < 0:
            raise ValueError("lam must be nonnegative")
        smooth = _StudentTOracles(blur, b)
        if lam == 0.0:  # no regularization: f vanishes and the prox is the identity
            return ProblemHandle(
                g_value=smooth.value,
                g_gradient=smooth.gradient,
                lip_grad_g=self.lip_grad_g,
                f_value=lambda x: 0.0,
                f_prox=lambda x, gamma: np.asarray(x, dtype=float),
            )

        # Re-transforming an inverse-transformed sparse coefficient array
        # turns its exact zeros into ~1e-16 noise, which would corrupt the
        # nonzero count. The count therefore rides along with the array the
        # prox returned; recomputation is the fallback for foreign inputs.
        last = {"x": None, "count": 0}

        def f_prox(x, gamma):
            # prox of lambda*||W.||_0 via orthogonality of W:
            # hard-threshold the coefficients at sqrt(2*lambda*gamma).
            coeffs = hard_threshold(haar_forward(x, haar), 2.0 * lam * gamma)
            out = haar_inverse(coeffs, haar)
            last["x"] = out
            last["count"] = int(np.count_nonzero(coeffs))
            return out

        def f_value(x):
            if x is last["x"]:
                return lam * last["count"]
            return l0_wavelet_value(x, haar, lam)

        return ProblemHandle(
            g_value=smooth.value,
            g_gradient=smooth.gradient,
            lip_grad_g=self.lip_grad_g,
            f_value=f_value,
            f_prox=f_prox,
        )
