"""Inertial forward-backward splitting for nonconvex nonsmooth composite
minimization, with the toy and image-deblurring experiments built on it."""

from .errors import (
    BadDimensions,
    DimensionMismatch,
    EmptyGrid,
    ImageLoadError,
    InertialFBError,
    InvalidKernel,
    MalformedPGM,
    NonFiniteIterate,
    NotOrthogonal,
    ParamViolation,
    ZeroVector,
)
from .experiments import (
    DeblurExperimentConfig,
    ToyExperimentConfig,
    gaussian_noise,
    isnr,
    run_deblur_experiment,
    run_toy_experiment,
    synthetic_image,
)
from .objectives import (
    DeblurProblem,
    make_toy_problem,
    toy_critical_point_check,
    toy_g_gradient,
)
from .operators import (
    GaussianBlurConfig,
    HaarConfig,
    LinearOperatorHandle,
    gaussian_kernel,
    haar_forward,
    haar_inverse,
    make_blur_operator,
    make_haar_operator,
    operator_norm,
)
from .pgm import pgm_read, pgm_write
from .prox import (
    ScalarProxSpec,
    brute_force_prox_oracle,
    prox_abs,
    prox_l0,
    prox_neg_abs,
    prox_orthogonal_conjugate,
    prox_separable,
)
from .solver import (
    BregmanGenerator,
    DecreaseConstants,
    IterationRecord,
    ProblemHandle,
    RunResult,
    SolverParams,
    SolverState,
    bregman_distance,
    lyapunov_value,
    run,
    step,
    subgradient_residual,
    validate_params,
    write_trace_csv,
)

__version__ = "0.1.0"
