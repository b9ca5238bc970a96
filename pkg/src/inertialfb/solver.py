"""Inertial forward-backward iteration with descent diagnostics.

One step combines a gradient step on the smooth part, a momentum
extrapolation from the previous iterate, and a proximal step on the
nonsmooth part. The admissible parameter region guarantees a strict
decrease of the merit value (f+g)(x) + M2*||x - x_prev||^2, which the run
loop records alongside a subgradient residual certifying approximate
criticality.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Optional

import numpy as np

from .errors import DimensionMismatch, NonFiniteIterate, ParamViolation


# --- Bregman generators -----------------------------------------------------

@dataclass(frozen=True)
class BregmanGenerator:
    """Strongly convex generator for the proximity-defining distance."""

    value: Callable[[np.ndarray], float]
    gradient: Callable[[np.ndarray], np.ndarray]
    sigma: float  # strong-convexity modulus
    lip_grad: float  # gradient Lipschitz constant


HALF_SQUARED_NORM = BregmanGenerator(
    value=lambda x: 0.5 * float(np.vdot(x, x)),
    gradient=lambda x: np.asarray(x, dtype=float),
    sigma=1.0,
    lip_grad=1.0,
)

BREGMAN_GENERATORS = {"half_squared_norm": HALF_SQUARED_NORM}


def bregman_distance(generator, x: np.ndarray, y: np.ndarray) -> float:
    """D(x, y) = F(x) - F(y) - <grad F(y), x - y> for the given generator
    (a `BregmanGenerator` or a registered tag)."""
    if isinstance(generator, str):
        generator = BREGMAN_GENERATORS[generator]
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise DimensionMismatch(f"shape mismatch {x.shape} vs {y.shape}")
    return generator.value(x) - generator.value(y) - float(np.vdot(generator.gradient(y), x - y))


# --- Problem and parameter containers ---------------------------------------

@dataclass(frozen=True)
class ProblemHandle:
    """Oracle bundle for one composite problem f + g.

    `f_value` may return math.inf outside dom f. `f_prox(x, gamma)` returns
    one minimizer of u -> ||u - x||^2 / (2 gamma) + f(u); for nonconvex f the
    selection must be deterministic.
    """

    g_value: Callable[[np.ndarray], float]
    g_gradient: Callable[[np.ndarray], np.ndarray]
    lip_grad_g: float
    f_value: Callable[[np.ndarray], float]
    f_prox: Callable[[np.ndarray, float], np.ndarray]
    bregman_generator: str = "half_squared_norm"

    def objective(self, x: np.ndarray) -> float:
        return float(self.f_value(x)) + float(self.g_value(x))


@dataclass(frozen=True)
class SolverParams:
    """Step/inertia schedules and the constants they must satisfy.

    The schedules map the iteration index n >= 1 to alpha_n in
    [alpha_lower, alpha_upper] and beta_n in [0, beta_max].
    """

    alpha_lower: float
    alpha_upper: float
    beta_max: float
    max_iters: int
    alpha_schedule: Callable[[int], float]
    beta_schedule: Callable[[int], float]
    mu: float = 1.0
    sigma: float = 1.0
    lip_grad_g: float = 0.0
    lip_grad_F: float = 1.0
    gap_tol: float = 0.0
    residual_tol: float = 0.0

    @staticmethod
    def constant(alpha: float, beta: float, max_iters: int, **kwargs) -> "SolverParams":
        return SolverParams(
            alpha_lower=alpha,
            alpha_upper=alpha,
            beta_max=beta,
            max_iters=max_iters,
            alpha_schedule=lambda n: alpha,
            beta_schedule=lambda n: beta,
            **kwargs,
        )


@dataclass(frozen=True)
class DecreaseConstants:
    """Certified decrease constants derived from an admissible parameter set."""

    m1: float
    m2: float
    m: float  # m1 - m2
    n_bound: float  # residual bound constant


def validate_params(params: SolverParams) -> DecreaseConstants:
    """Check the admissibility inequalities and derive the decrease constants.

    Raises ParamViolation naming the first failed inequality. Succeeds iff
    mu*(sigma - lip_grad_g*alpha_lower) > beta_max*(mu^2 + 1) and the derived
    M1 exceeds M2.
    """
    p = params
    for name in ("alpha_lower", "alpha_upper", "beta_max", "mu", "sigma", "lip_grad_g", "lip_grad_F"):
        v = getattr(p, name)
        if not math.isfinite(v):
            raise ParamViolation(f"{name} must be finite, got {v}")
    if p.mu <= 0 or p.sigma <= 0 or p.alpha_lower <= 0 or p.alpha_upper <= 0 or p.lip_grad_F <= 0:
        raise ParamViolation("mu, sigma, alpha bounds and lip_grad_F must be positive")
    if p.beta_max < 0 or p.lip_grad_g < 0:
        raise ParamViolation("beta_max and lip_grad_g must be nonnegative")
    if p.alpha_lower > p.alpha_upper:
        raise ParamViolation(
            f"step bounds out of order: alpha_lower={p.alpha_lower} > alpha_upper={p.alpha_upper}"
        )
    lhs = p.mu * (p.sigma - p.lip_grad_g * p.alpha_lower)
    rhs = p.beta_max * (p.mu * p.mu + 1.0)
    if lhs <= rhs:
        raise ParamViolation(
            "momentum admissibility failed: "
            f"mu*(sigma - lip_grad_g*alpha_lower) = {lhs:g} must exceed "
            f"beta_max*(mu^2 + 1) = {rhs:g}"
        )
    m1 = (p.sigma - p.alpha_upper * p.lip_grad_g) / (2.0 * p.alpha_upper) - (
        p.mu * p.beta_max
    ) / (2.0 * p.alpha_lower)
    m2 = p.beta_max / (2.0 * p.mu * p.alpha_lower)
    if m1 <= m2:
        raise ParamViolation(
            f"decrease constants out of order: M1 = {m1:g} must exceed M2 = {m2:g} "
            "(shrink alpha_upper or beta_max)"
        )
    n_bound = max(
        p.lip_grad_F / p.alpha_lower + p.lip_grad_g + 4.0 * m2,
        p.beta_max / p.alpha_lower,
    )
    return DecreaseConstants(m1=m1, m2=m2, m=m1 - m2, n_bound=n_bound)


# --- Iteration state and diagnostics ----------------------------------------

@dataclass(frozen=True)
class SolverState:
    n: int
    x_curr: np.ndarray
    x_prev: np.ndarray
    obj: float
    gap: float  # ||x_curr - x_prev||
    lyapunov: float  # obj + m2 * gap^2
    residual_norm: Optional[float]  # None before the first step


@dataclass(frozen=True)
class IterationRecord:
    n: int
    obj: float
    gap: float
    lyapunov: float
    residual_norm: Optional[float]
    alpha: Optional[float] = None
    beta: Optional[float] = None


def lyapunov_value(x: np.ndarray, y: np.ndarray, problem: ProblemHandle, m2: float) -> float:
    """Merit value (f+g)(x) + m2 * ||x - y||^2."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise DimensionMismatch(f"shape mismatch {x.shape} vs {y.shape}")
    d = (x - y).ravel()
    return problem.objective(x) + m2 * float(np.dot(d, d))


def subgradient_residual(
    x_prev: np.ndarray,
    x_curr: np.ndarray,
    x_next: np.ndarray,
    problem: ProblemHandle,
    alpha_n: float,
    beta_n: float,
) -> tuple[np.ndarray, float]:
    """Element of the limiting subdifferential of f+g at x_next implied by
    three consecutive iterates, and its norm.

    With the quadratic generator the element is
    (x_curr - x_next)/alpha + grad g(x_next) - grad g(x_curr)
    + (beta/alpha)(x_curr - x_prev).
    """
    gen = BREGMAN_GENERATORS[problem.bregman_generator]
    arrays = [np.asarray(a, dtype=float) for a in (x_prev, x_curr, x_next)]
    if not (arrays[0].shape == arrays[1].shape == arrays[2].shape):
        raise DimensionMismatch("the three iterates must share a shape")
    x_prev, x_curr, x_next = arrays
    y = (gen.gradient(x_curr) - gen.gradient(x_next)) / alpha_n
    y = y + problem.g_gradient(x_next) - problem.g_gradient(x_curr)
    if beta_n != 0.0:
        y = y + (beta_n / alpha_n) * (x_curr - x_prev)
    return y, float(np.linalg.norm(y.ravel()))


def residual_norm_bound(
    gap_next: float, gap_curr: float, problem: ProblemHandle, params: SolverParams,
    alpha_n: float, beta_n: float,
) -> float:
    """Upper bound on the subgradient-residual norm implied by consecutive
    iterate gaps."""
    gen = BREGMAN_GENERATORS[problem.bregman_generator]
    return (gen.lip_grad + alpha_n * problem.lip_grad_g) / alpha_n * gap_next + (
        beta_n / alpha_n
    ) * gap_curr


def initial_state(problem: ProblemHandle, x0: np.ndarray, x1: np.ndarray, m2: float = 0.0) -> SolverState:
    x0 = np.asarray(x0, dtype=float)
    x1 = np.asarray(x1, dtype=float)
    if x0.shape != x1.shape:
        raise DimensionMismatch(f"shape mismatch {x0.shape} vs {x1.shape}")
    gap = float(np.linalg.norm((x1 - x0).ravel()))
    obj = problem.objective(x1)
    return SolverState(
        n=1,
        x_curr=x1,
        x_prev=x0,
        obj=obj,
        gap=gap,
        lyapunov=obj + m2 * gap * gap,
        residual_norm=None,
    )


def step(
    state: SolverState,
    problem: ProblemHandle,
    alpha_n: float,
    beta_n: float,
    m2: float = 0.0,
) -> SolverState:
    """One iteration: forward gradient step plus momentum, then prox."""
    forward = state.x_curr - alpha_n * problem.g_gradient(state.x_curr)
    if beta_n != 0.0:
        forward = forward + beta_n * (state.x_curr - state.x_prev)
    x_next = np.asarray(problem.f_prox(forward, alpha_n), dtype=float)
    if not np.all(np.isfinite(x_next)):
        raise NonFiniteIterate(
            f"non-finite coordinate after iteration {state.n}", iteration=state.n
        )
    _, res = subgradient_residual(state.x_prev, state.x_curr, x_next, problem, alpha_n, beta_n)
    gap = float(np.linalg.norm((x_next - state.x_curr).ravel()))
    obj = problem.objective(x_next)
    return SolverState(
        n=state.n + 1,
        x_curr=x_next,
        x_prev=state.x_curr,
        obj=obj,
        gap=gap,
        lyapunov=obj + m2 * gap * gap,
        residual_norm=res,
    )


@dataclass
class RunResult:
    records: list  # IterationRecord per recorded state, starting at n=1
    final: SolverState
    constants: DecreaseConstants
    iterates: Optional[list] = None  # x_n arrays when keep_iterates


def run(
    problem: ProblemHandle,
    params: SolverParams,
    x0: np.ndarray,
    x1: np.ndarray,
    keep_iterates: bool = False,
    callback: Optional[Callable[[SolverState], None]] = None,
) -> RunResult:
    """Iterate from the pair (x0, x1) until max_iters or a tolerance fires.

    The trace records the initial state (n=1, no residual yet) and every
    produced iterate. Stopping: n reaches max_iters + 1, or gap <= gap_tol,
    or residual_norm <= residual_tol (each tolerance only when positive).
    """
    constants = validate_params(params)
    state = initial_state(problem, x0, x1, m2=constants.m2)
    records = [
        IterationRecord(state.n, state.obj, state.gap, state.lyapunov, state.residual_norm)
    ]
    iterates = [state.x_prev.copy(), state.x_curr.copy()] if keep_iterates else None
    if callback is not None:
        callback(state)
    for n in range(1, params.max_iters + 1):
        alpha_n = params.alpha_schedule(n)
        beta_n = params.beta_schedule(n)
        if not (params.alpha_lower <= alpha_n <= params.alpha_upper):
            raise ParamViolation(
                f"alpha_schedule({n}) = {alpha_n:g} outside [{params.alpha_lower:g}, {params.alpha_upper:g}]"
            )
        if not (0.0 <= beta_n <= params.beta_max):
            raise ParamViolation(
                f"beta_schedule({n}) = {beta_n:g} outside [0, {params.beta_max:g}]"
            )
        state = step(state, problem, alpha_n, beta_n, m2=constants.m2)
        records.append(
            IterationRecord(
                state.n, state.obj, state.gap, state.lyapunov, state.residual_norm,
                alpha=alpha_n, beta=beta_n,
            )
        )
        if keep_iterates:
            iterates.append(state.x_curr.copy())
        if callback is not None:
            callback(state)
        if params.gap_tol > 0.0 and state.gap <= params.gap_tol:
            break
        if params.residual_tol > 0.0 and state.residual_norm <= params.residual_tol:
            break
    return RunResult(records=records, final=state, constants=constants, iterates=iterates)


def write_trace_csv(path, records: Iterable[IterationRecord]) -> None:
    """Trace export: columns n, obj, gap, lyapunov, residual_norm with 13
    significant digits."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["n", "obj", "gap", "lyapunov", "residual_norm"])
        for r in records:
            res = "" if r.residual_norm is None else f"{r.residual_norm:.12e}"
            writer.writerow([r.n, f"{r.obj:.12e}", f"{r.gap:.12e}", f"{r.lyapunov:.12e}", res])
