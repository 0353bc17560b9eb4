"""Exhaustive grid search for the node minimizing ``|w'r + mu|``."""

from __future__ import annotations

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterator, Optional, Tuple

import numpy as np

from .core import CorrelogramModel, EmptyGrid, EstimateReport, GridSpec, SampleSet
from .correlogram import build_lambda, build_r
from . import kernels
from .kernels import get_scan_row
from .kriging import estimate_at
from .linalg import BorderedPrecompute, precompute, solve_bordered_direct

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SurfacePoint:
    east: float
    north: float
    objective: float
    mean: float


@dataclass(frozen=True, eq=False)
class Surface:
    """Objective and mean at every grid node, flattened row-major
    (north outer ascending, east inner ascending)."""

    east: np.ndarray
    north: np.ndarray
    objective: np.ndarray
    mean: np.ndarray

    def __len__(self) -> int:
        return self.objective.shape[0]

    def __getitem__(self, k: int) -> SurfacePoint:
        return SurfacePoint(float(self.east[k]), float(self.north[k]), float(self.objective[k]), float(self.mean[k]))

    def __iter__(self) -> Iterator[SurfacePoint]:
        for k in range(len(self)):
            yield self[k]

    def argmin(self) -> int:
        # first minimum in row-major order == smallest north, then smallest east
        return int(np.argmin(np.where(np.isnan(self.objective), np.inf, self.objective)))


def resolve_workers(workers: int) -> int:
    if workers < 0:
        raise ValueError("workers must be >= 0")
    return workers or (os.cpu_count() or 1)


class _RowScanner:
    """Per-call view of the shared precompute in the layout the kernels take."""

    def __init__(self, samples, model, pre, easts, backend=None):
        fac = pre.factorization
        self.backend = backend or kernels.BACKEND
        self.scan_row = get_scan_row(self.backend)
        self.lu = fac.lu
        self.piv = fac.piv
        self.w = np.ascontiguousarray(pre.w)
        self.s = pre.s
        self.xs = np.ascontiguousarray(samples.east)
        self.ys = np.ascontiguousarray(samples.north)
        self.vs = np.ascontiguousarray(samples.values)
        self.wv = float(pre.w @ samples.values)
        self.model = model
        self.easts = np.ascontiguousarray(easts, dtype=float)
        self.east_factor = None
        if self.backend == "cython" and model.shape_exponent == 2.0:
            t = np.subtract.outer(self.xs, self.easts) / model.practical_range
            self.east_factor = np.ascontiguousarray(np.exp(-3.0 * t * t))

    def row(self, north: float, out_obj: np.ndarray, out_mean: np.ndarray) -> None:
        m = self.model
        self.scan_row(self.lu, self.piv, self.w, self.s, self.xs, self.ys, self.vs, self.wv,
                      m.sill, m.practical_range, m.shape_exponent, float(north), self.easts,
                      out_obj, out_mean, self.east_factor)


def _row_blocks(n_rows: int, workers: int):
    bounds = np.linspace(0, n_rows, min(workers, n_rows) + 1).round().astype(int)
    return [(int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]


def _scan(samples, model, grid, pre, workers, backend, keep_surface):
    """Run the kernel over every row; returns per-row minima and optionally the full arrays."""
    if grid.size <= 0:
        raise EmptyGrid("grid has no nodes")
    easts = np.ascontiguousarray(grid.east_nodes())
    scanner = _RowScanner(samples, model, pre, easts, backend)
    norths = grid.north_nodes()
    n_e, n_n = easts.shape[0], norths.shape[0]
    row_best = np.full(n_n, np.inf)
    row_arg = np.zeros(n_n, dtype=np.intp)
    obj_all = np.empty((n_n, n_e)) if keep_surface else None
    mean_all = np.empty((n_n, n_e)) if keep_surface else None

    def work(block):
        obj = np.empty(n_e)
        mean = np.empty(n_e)
        for j in range(*block):
            o = obj_all[j] if keep_surface else obj
            mv = mean_all[j] if keep_surface else mean
            scanner.row(norths[j], o, mv)
            masked = np.where(np.isnan(o), np.inf, o)
            k = int(np.argmin(masked))
            row_best[j] = masked[k]
            row_arg[j] = k

    blocks = _row_blocks(n_n, workers)
    if len(blocks) == 1:
        work(blocks[0])
    else:
        with ThreadPoolExecutor(max_workers=len(blocks)) as ex:
            list(ex.map(work, blocks))
    return easts, norths, row_best, row_arg, obj_all, mean_all


def _reduce(row_best: np.ndarray, row_arg: np.ndarray) -> Tuple[int, int]:
    # rows are visited in ascending north; np.argmin keeps the first of equal minima
    j = int(np.argmin(row_best))
    if not np.isfinite(row_best[j]):
        raise EmptyGrid("objective is undefined at every grid node")
    return int(row_arg[j]), j


def grid_search(
    samples: SampleSet,
    model: CorrelogramModel,
    grid: GridSpec,
    workers: int = 1,
    backend: Optional[str] = None,
    solver: str = "fast",
    pre: Optional[BorderedPrecompute] = None,
) -> Tuple[EstimateReport, Tuple[int, int]]:
    """Find the grid node with the smallest ``|w'r + mu|``.

    Parameters
    ----------
    workers : int
        Threads to spread north-row blocks over; 0 means one per CPU.
        The chosen node and report do not depend on this value.
    backend : str, optional
        Kernel backend (``"cython"`` or ``"python"``); default is the
        one selected at import.
    solver : str
        ``"fast"`` for the factor-once kernel scan, ``"direct"`` to solve
        the full bordered system at every node (reference runs on small
        grids only).

    Returns
    -------
    report : EstimateReport
        Full estimates at the chosen node.
    index : (int, int)
        ``(i_east, i_north)`` of the chosen node.

    Ties resolve to the smallest north, then the smallest east.
    """
    if pre is None:
        pre = precompute(build_lambda(samples, model))
    if solver == "direct":
        i, j = _reduce_surface(_direct_surface(samples, model, grid), grid)
    elif solver == "fast":
        _, _, row_best, row_arg, _, _ = _scan(samples, model, grid, pre, resolve_workers(workers), backend, False)
        i, j = _reduce(row_best, row_arg)
    else:
        raise ValueError(f"unknown solver {solver!r}")
    node = grid.node(i, j)
    log.debug("grid minimum at %s (index %d, %d)", node, i, j)
    return estimate_at(samples, model, node, pre=pre), (i, j)


def _direct_surface(samples, model, grid) -> Surface:
    lam = build_lambda(samples, model)
    easts, norths = grid.east_nodes(), grid.north_nodes()
    ee, nn = np.meshgrid(easts, norths)
    obj = np.empty(ee.size)
    mean = np.empty(ee.size)
    for k, (e, n) in enumerate(zip(ee.ravel(), nn.ravel())):
        r = build_r(samples, (e, n), model)
        sol = solve_bordered_direct(lam, r)
        obj[k] = sol.objective
        mean[k] = float(sol.weights @ samples.values)
    return Surface(ee.ravel(), nn.ravel(), obj, mean)


def _reduce_surface(surface: Surface, grid: GridSpec) -> Tuple[int, int]:
    k = surface.argmin()
    return k % grid.n_east, k // grid.n_east


def objective_surface(
    samples: SampleSet,
    model: CorrelogramModel,
    grid: GridSpec,
    workers: int = 1,
    backend: Optional[str] = None,
    solver: str = "fast",
) -> Surface:
    """Objective and mean estimate at every node, row-major."""
    if solver == "direct":
        return _direct_surface(samples, model, grid)
    pre = precompute(build_lambda(samples, model))
    easts, norths, _, _, obj, mean = _scan(samples, model, grid, pre, resolve_workers(workers), backend, True)
    ee, nn = np.meshgrid(easts, norths)
    return Surface(ee.ravel(), nn.ravel(), obj.ravel(), mean.ravel())
