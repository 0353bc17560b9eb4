"""Dense solvers for the bordered kriging system.

Two routes are provided and are meant to check each other:

* :func:`solve_bordered_direct` factors the full ``(n+1) x (n+1)`` bordered
  matrix with row pivoting and solves it in one go.
* :func:`solve_bordered_fast` factors ``Lambda`` once (:func:`precompute`)
  and eliminates the border analytically, so each new target costs one
  pair of triangular solves.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
import scipy.linalg

from .core import InputError, KrigingSolution, LengthMismatch, SingularMatrix

PIVOT_RTOL = 1e-12


@dataclass(frozen=True, eq=False)
class Factorization:
    """Row-pivoted LU factors of a square matrix.

    ``lu`` packs the unit lower and upper triangles (LAPACK ``getrf``
    layout), ``piv`` is the 0-based sequence of row interchanges.
    """

    lu: np.ndarray
    piv: np.ndarray
    rcond_pivot: float

    @property
    def n(self) -> int:
        return self.lu.shape[0]

    def solve(self, b: np.ndarray) -> np.ndarray:
        b = np.asarray(b, dtype=float)
        if b.shape[0] != self.n:
            raise LengthMismatch(b.shape[0], self.n)
        return scipy.linalg.lu_solve((self.lu, self.piv), b, check_finite=False)


def factorize(matrix: np.ndarray) -> Factorization:
    """LU-factor ``matrix`` with partial pivoting.

    Raises :class:`SingularMatrix` when a pivot is zero or smaller than
    ``1e-12`` times the largest pivot magnitude.
    """
    a = np.asarray(matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise InputError(f"expected a non-empty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InputError("matrix has non-finite entries")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(a, check_finite=False)
    pivots = np.abs(np.diag(lu))
    biggest = pivots.max()
    bad = np.flatnonzero(~(pivots > PIVOT_RTOL * biggest))
    if biggest == 0.0 or bad.size:
        k = int(bad[0]) if bad.size else 0
        raise SingularMatrix(k, float(pivots[k]))
    lu = np.ascontiguousarray(lu)
    lu.flags.writeable = False
    piv = np.asarray(piv, dtype=np.intp)
    piv.flags.writeable = False
    return Factorization(lu, piv, float(pivots.min() / biggest))


@dataclass(frozen=True, eq=False)
class BorderedPrecompute:
    """Everything the fast solve needs that does not depend on the target.

    ``w = Lambda^-1 F`` and ``s = F' Lambda^-1 F`` with ``F`` all ones.
    """

    factorization: Factorization
    w: np.ndarray
    s: float

    @property
    def n(self) -> int:
        return self.factorization.n


def precompute(lam: np.ndarray) -> BorderedPrecompute:
    fac = factorize(lam)
    w = fac.solve(np.ones(fac.n))
    s = float(w.sum())
    # s is the pivot left after eliminating the border; same tolerance applies
    if not abs(s) > PIVOT_RTOL * np.abs(np.diag(fac.lu)).max():
        raise SingularMatrix(fac.n, abs(s))
    w.flags.writeable = False
    return BorderedPrecompute(fac, w, s)


def bordered_matrix(lam: np.ndarray) -> np.ndarray:
    lam = np.asarray(lam, dtype=float)
    n = lam.shape[0]
    a = np.zeros((n + 1, n + 1))
    a[:n, :n] = lam
    a[:n, n] = 1.0
    a[n, :n] = 1.0
    return a


def _solution(weights: np.ndarray, mu: float, r: np.ndarray, target) -> KrigingSolution:
    obj = abs(float(weights @ r) + mu)
    weights.flags.writeable = False
    return KrigingSolution(weights, mu, obj, target)


def solve_bordered_direct(
    lam: np.ndarray, r: np.ndarray, target: Optional[Tuple[float, float]] = None
) -> KrigingSolution:
    """Solve ``[[Lambda, F], [F', 0]] [w; mu] = [r; 1]`` with one pivoted LU."""
    r = np.asarray(r, dtype=float)
    n = np.shape(lam)[0]
    if r.shape != (n,):
        raise LengthMismatch(r.shape[0], n)
    fac = factorize(bordered_matrix(lam))
    x = fac.solve(np.append(r, 1.0))
    return _solution(x[:n].copy(), float(x[n]), r, target)


def solve_bordered_fast(
    pre: BorderedPrecompute, r: np.ndarray, target: Optional[Tuple[float, float]] = None
) -> KrigingSolution:
    """Block-elimination solve against a shared precompute.

    ``y = Lambda^-1 r``, ``mu = (F'y - 1) / s``, ``w = y - mu * Lambda^-1 F``.
    Read-only on ``pre``; safe to call from many threads.
    """
    r = np.asarray(r, dtype=float)
    if r.shape != (pre.n,):
        raise LengthMismatch(r.shape[0], pre.n)
    y = pre.factorization.solve(r)
    mu = (float(y.sum()) - 1.0) / pre.s
    return _solution(y - mu * pre.w, mu, r, target)


def gls_weights(pre: BorderedPrecompute) -> np.ndarray:
    """Least-squares weights ``Lambda^-1 F / (F' Lambda^-1 F)``."""
    return pre.w / pre.s
