"""Correlogram evaluation and assembly of the correlation matrix and vector."""

from __future__ import annotations

from typing import Tuple

import numpy as np

from .core import CorrelogramModel, InputError, NegativeDistance, SampleSet


def evaluate(model: CorrelogramModel, h):
    """Correlation at lag distance ``h`` (scalar or array).

    Zero lag returns ``model.sill`` through its own branch rather than as
    the limit of the exponential.
    """
    h_arr = np.asarray(h, dtype=float)
    if np.any(h_arr < 0) or not np.all(np.isfinite(h_arr)):
        raise NegativeDistance(f"lag distance must be finite and >= 0, got {h!r}")
    scaled = h_arr / model.practical_range
    rho = model.sill * np.exp(-3.0 * scaled**model.shape_exponent)
    rho = np.where(h_arr == 0.0, model.sill, rho)
    if rho.ndim == 0:
        return float(rho)
    return rho


def distances(ax, ay, bx, by) -> np.ndarray:
    """Euclidean distances between point sets ``a`` (rows) and ``b`` (columns)."""
    dx = np.subtract.outer(np.asarray(ax, float), np.asarray(bx, float))
    dy = np.subtract.outer(np.asarray(ay, float), np.asarray(by, float))
    return np.sqrt(dx * dx + dy * dy)


def build_lambda(samples: SampleSet, model: CorrelogramModel) -> np.ndarray:
    """Dense ``n x n`` autocorrelation matrix between sample locations."""
    d = distances(samples.east, samples.north, samples.east, samples.north)
    # the subtraction is antisymmetric, so d is already exactly symmetric
    return evaluate(model, d)


def build_r(samples: SampleSet, target: Tuple[float, float], model: CorrelogramModel) -> np.ndarray:
    """Correlation between every sample and a single target location."""
    te, tn = float(target[0]), float(target[1])
    if not (np.isfinite(te) and np.isfinite(tn)):
        raise InputError(f"target must be finite, got {target!r}")
    dx = samples.east - te
    dy = samples.north - tn
    return np.atleast_1d(evaluate(model, np.sqrt(dx * dx + dy * dy)))
