# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled grid-row scan.

Same contract as ``_kernel_py.scan_row``, plus an optional
``east_factor[i, j] = exp(-3 ((xs[i] - easts[j]) / rng) ** 2)`` table that
lets shape-2 models skip the per-node exponentials. The whole row is solved as one
block with the node index innermost, so the substitution loops run over
contiguous memory. Each node's arithmetic does not depend on the row
length, which keeps results identical however rows are partitioned.
"""

from libc.math cimport exp, fabs, pow, sqrt
from libc.stdlib cimport free, malloc

# nodes per tile in the triangular solves; keeps a tile's column block in L1
cdef Py_ssize_t TILE = 64


cdef inline void _sub_rows(double *yi, const double *y, Py_ssize_t m, Py_ssize_t jn,
                           const double *coef, Py_ssize_t k0, Py_ssize_t k1) noexcept nogil:
    """yi[j] -= sum_k coef[k] * y[k * m + j] for k in [k0, k1), subtracting in k order."""
    cdef Py_ssize_t j, k = k0
    cdef double v, a0, a1, a2, a3
    cdef const double *y0
    cdef const double *y1
    cdef const double *y2
    cdef const double *y3
    while k + 4 <= k1:
        a0 = coef[k]
        a1 = coef[k + 1]
        a2 = coef[k + 2]
        a3 = coef[k + 3]
        y0 = y + k * m
        y1 = y0 + m
        y2 = y1 + m
        y3 = y2 + m
        for j in range(jn):
            v = yi[j] - a0 * y0[j]
            v = v - a1 * y1[j]
            v = v - a2 * y2[j]
            yi[j] = v - a3 * y3[j]
        k += 4
    while k < k1:
        a0 = coef[k]
        y0 = y + k * m
        for j in range(jn):
            yi[j] = yi[j] - a0 * y0[j]
        k += 1


def scan_row(const double[:, ::1] lu, const Py_ssize_t[::1] piv, const double[::1] w, double s,
             const double[::1] xs, const double[::1] ys, const double[::1] vs, double wv,
             double sill, double rng, double shape, double north, const double[::1] easts,
             double[::1] out_obj, double[::1] out_mean, const double[:, ::1] east_factor=None):
    cdef Py_ssize_t n = lu.shape[0]
    cdef Py_ssize_t m = easts.shape[0]
    cdef Py_ssize_t i, j, k, j0, jn
    cdef double dx, dy, h, t, a, mu
    cdef bint square = shape == 2.0
    cdef bint separable = east_factor is not None
    cdef double *r
    cdef double *y
    cdef double *yi
    cdef double *yk
    cdef double *acc

    if piv.shape[0] != n or w.shape[0] != n or xs.shape[0] != n or ys.shape[0] != n or vs.shape[0] != n:
        raise ValueError("inconsistent sample dimensions")
    if out_obj.shape[0] != m or out_mean.shape[0] != m:
        raise ValueError("output buffers must match the row length")
    if separable and (not square or east_factor.shape[0] != n or east_factor.shape[1] != m):
        raise ValueError("east_factor needs shape 2 and an (n, m) table")

    # r, y: n x m row-major; acc: 4 x m reductions (sum y, y.r, w.r, y.v)
    r = <double *> malloc(n * m * sizeof(double))
    y = <double *> malloc(n * m * sizeof(double))
    acc = <double *> malloc(4 * m * sizeof(double))
    if r == NULL or y == NULL or acc == NULL:
        free(r)
        free(y)
        free(acc)
        raise MemoryError()
    try:
        with nogil:
            for i in range(n):
                dy = ys[i] - north
                if separable:
                    # exp(-3 (dx^2 + dy^2) / a^2) split into cached east part and row part
                    t = dy / rng
                    a = sill * exp(-3.0 * t * t)
                    for j in range(m):
                        r[i * m + j] = a * east_factor[i, j]
                    continue
                for j in range(m):
                    dx = xs[i] - easts[j]
                    h = sqrt(dx * dx + dy * dy)
                    if h == 0.0:
                        r[i * m + j] = sill
                    else:
                        t = h / rng
                        if square:
                            t = t * t
                        else:
                            t = pow(t, shape)
                        r[i * m + j] = sill * exp(-3.0 * t)
            for i in range(n * m):
                y[i] = r[i]
            # row interchanges
            for i in range(n):
                k = piv[i]
                if k != i:
                    yi = y + i * m
                    yk = y + k * m
                    for j in range(m):
                        a = yi[j]
                        yi[j] = yk[j]
                        yk[j] = a
            # triangular solves tile by tile over the nodes
            j0 = 0
            while j0 < m:
                jn = min(TILE, m - j0)
                for i in range(1, n):
                    _sub_rows(y + i * m + j0, y + j0, m, jn, &lu[i, 0], 0, i)
                for i in range(n - 1, -1, -1):
                    yi = y + i * m + j0
                    _sub_rows(yi, y + j0, m, jn, &lu[i, 0], i + 1, n)
                    a = lu[i, i]
                    for j in range(jn):
                        yi[j] = yi[j] / a
                j0 += TILE
            for j in range(4 * m):
                acc[j] = 0.0
            for i in range(n):
                yi = y + i * m
                yk = r + i * m
                a = w[i]
                t = vs[i]
                for j in range(m):
                    acc[j] = acc[j] + yi[j]
                    acc[m + j] = acc[m + j] + yi[j] * yk[j]
                    acc[2 * m + j] = acc[2 * m + j] + a * yk[j]
                    acc[3 * m + j] = acc[3 * m + j] + t * yi[j]
            for j in range(m):
                mu = (acc[j] - 1.0) / s
                out_obj[j] = fabs(acc[m + j] - mu * acc[2 * m + j] + mu)
                out_mean[j] = acc[3 * m + j] - mu * wv
    finally:
        free(r)
        free(y)
        free(acc)
