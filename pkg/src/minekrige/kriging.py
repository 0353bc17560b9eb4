"""Mean, variance and MSE estimators built on the kriging weights."""

from __future__ import annotations

from typing import Optional, Tuple

import numpy as np

from .core import CorrelogramModel, EstimateReport, KrigingSolution, LengthMismatch, SampleSet
from .correlogram import build_lambda, build_r
from .linalg import BorderedPrecompute, gls_weights, precompute, solve_bordered_direct, solve_bordered_fast


def objective(solution: KrigingSolution, r: np.ndarray) -> float:
    """``|w'r + mu|``; zero when the weights satisfy the search condition exactly."""
    r = np.asarray(r, dtype=float)
    if r.shape != solution.weights.shape:
        raise LengthMismatch(r.shape[0], solution.weights.shape[0])
    return abs(float(solution.weights @ r) + solution.mu)


def _check_lengths(weights, values):
    weights = np.asarray(weights, dtype=float)
    values = np.asarray(values, dtype=float)
    if weights.shape != values.shape:
        raise LengthMismatch(weights.size, values.size)
    return weights, values


def estimate_mean(weights, values) -> float:
    weights, values = _check_lengths(weights, values)
    return float(weights @ values)


def estimate_variance(weights, values, mean: float) -> float:
    """Weighted second moment minus the squared mean, ``w'(v*v) - m**2``.

    May come out negative when some weights are negative; returned as is.
    """
    weights, values = _check_lengths(weights, values)
    return float(weights @ (values * values)) - mean * mean


def mse_mean(variance: float, solution: KrigingSolution, r: np.ndarray) -> float:
    """Mean squared error of the mean estimate, ``variance * (w'r - mu)``."""
    r = np.asarray(r, dtype=float)
    if r.shape != solution.weights.shape:
        raise LengthMismatch(r.shape[0], solution.weights.shape[0])
    return variance * (float(solution.weights @ r) - solution.mu)


def report_from_solution(solution: KrigingSolution, r: np.ndarray, values: np.ndarray) -> EstimateReport:
    m = estimate_mean(solution.weights, values)
    var = estimate_variance(solution.weights, values, m)
    return EstimateReport(
        node=solution.target,
        mean=m,
        variance=var,
        mse=mse_mean(var, solution, r),
        mu=solution.mu,
        objective=objective(solution, r),
        weights=solution.weights,
    )


def estimate_at(
    samples: SampleSet,
    model: CorrelogramModel,
    target: Tuple[float, float],
    pre: Optional[BorderedPrecompute] = None,
    solver: str = "fast",
) -> EstimateReport:
    """Krige a single target and fill in every estimate.

    Pass ``pre`` to reuse one factorization across many targets.
    ``solver="direct"`` solves the full bordered matrix instead.
    """
    target = (float(target[0]), float(target[1]))
    r = build_r(samples, target, model)
    if solver == "direct":
        sol = solve_bordered_direct(build_lambda(samples, model), r, target)
    elif solver == "fast":
        if pre is None:
            pre = precompute(build_lambda(samples, model))
        sol = solve_bordered_fast(pre, r, target)
    else:
        raise ValueError(f"unknown solver {solver!r}")
    return report_from_solution(sol, r, samples.values)


def estimate_gls(
    samples: SampleSet, model: CorrelogramModel, lam: Optional[np.ndarray] = None
) -> EstimateReport:
    """Mean and variance from the least-squares weights.

    ``lam`` overrides the correlation matrix (e.g. the identity, which
    turns the weights into the plain arithmetic mean). No target exists,
    so ``node``, ``mse``, ``mu`` and ``objective`` are None.
    """
    if lam is None:
        lam = build_lambda(samples, model)
    weights = gls_weights(precompute(lam))
    m = estimate_mean(weights, samples.values)
    var = estimate_variance(weights, samples.values, m)
    return EstimateReport(node=None, mean=m, variance=var, mse=None, mu=None, objective=None, weights=weights)
