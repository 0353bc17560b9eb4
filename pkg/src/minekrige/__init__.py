"""Kriging-based mean and variance estimation for sampled deposits.

Weights come from the bordered (Lagrange-constrained) kriging system; an
exhaustive grid search picks the node where ``|w'r + mu|`` is smallest and
reports the weighted mean, weighted variance and MSE there.
"""

from .core import (
    DEFAULT_GRID,
    CorrelogramModel,
    DuplicateLocation,
    EmptyGrid,
    EmptyInput,
    EstimateReport,
    GridSpec,
    InputError,
    KrigeError,
    KrigingSolution,
    LengthMismatch,
    NegativeDistance,
    NonFiniteField,
    SampleSet,
    SamplePoint,
    SingularMatrix,
    validate_samples,
)
from .correlogram import build_lambda, build_r, evaluate
from .io import builtin_table1, read_samples_csv, write_report, write_surface_csv
from .kernels import BACKEND as KERNEL_BACKEND
from .kriging import estimate_at, estimate_gls, estimate_mean, estimate_variance, mse_mean, objective
from .linalg import (
    BorderedPrecompute,
    Factorization,
    factorize,
    gls_weights,
    precompute,
    solve_bordered_direct,
    solve_bordered_fast,
)
from .search import Surface, SurfacePoint, grid_search, objective_surface

__version__ = "0.1.0"
