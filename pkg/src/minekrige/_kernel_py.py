"""Numpy implementation of the grid-row scan; used when the extension is absent."""

import numpy as np
import scipy.linalg


def scan_row(lu, piv, w, s, xs, ys, vs, wv, sill, rng, shape, north, easts, out_obj, out_mean, east_factor=None):
    """Objective ``|w'r + mu|`` and mean estimate for every node of one grid row.

    All nodes of the row are solved as one multi-right-hand-side system.
    Results are written into ``out_obj`` and ``out_mean``. ``east_factor``
    is accepted for signature parity with the compiled kernel and ignored.
    """
    dx = xs[:, None] - easts[None, :]
    dy = ys - north
    h = np.sqrt(dx * dx + (dy * dy)[:, None])
    r = sill * np.exp(-3.0 * (h / rng) ** shape)
    r[h == 0.0] = sill
    y = scipy.linalg.lu_solve((lu, piv), r, check_finite=False)
    mu = (y.sum(axis=0) - 1.0) / s
    yr = np.einsum("ij,ij->j", y, r)
    wr = w @ r
    np.abs(yr - mu * wr + mu, out=out_obj)
    out_mean[:] = vs @ y - mu * wv
