# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled one-sided Jacobi kernels for small dense complex matrices.

Every entry point mirrors a function of the same name in ``_kernel_py``;
the two modules must stay numerically interchangeable.
"""

import numpy as np

from libc.math cimport sqrt, fabs, copysign, pow
from libc.stdlib cimport malloc, free

cdef double ROT_TOL = 1e-14
cdef int MAX_SWEEPS = 60
# columns below NEGLIGIBLE * ||W||_F are never rotated: their phases are noise
cdef double NEGLIGIBLE = 1e-30


cdef int _jacobi(double* wr, double* wi, int rows, int cols,
                 double* vr, double* vi) noexcept nogil:
    # Orthogonalizes the columns of W (column-major, rows >= cols) in place.
    # When vr is not NULL the rotations are accumulated into V (cols x cols).
    cdef int sweep, i, j, k, rotated
    cdef double alpha, beta, gr, gi, absg, pr, pim, zeta, t, c, s, floor
    cdef double ar, ai, br, bi, xr, xi
    cdef double* ci
    cdef double* cj
    cdef double* di
    cdef double* dj
    floor = 0.0
    for k in range(rows * cols):
        floor += wr[k] * wr[k] + wi[k] * wi[k]
    floor *= NEGLIGIBLE * NEGLIGIBLE
    for sweep in range(MAX_SWEEPS):
        rotated = 0
        for i in range(cols - 1):
            for j in range(i + 1, cols):
                alpha = 0.0
                beta = 0.0
                gr = 0.0
                gi = 0.0
                ci = wr + i * rows
                cj = wr + j * rows
                di = wi + i * rows
                dj = wi + j * rows
                for k in range(rows):
                    ar = ci[k]
                    ai = di[k]
                    br = cj[k]
                    bi = dj[k]
                    alpha += ar * ar + ai * ai
                    beta += br * br + bi * bi
                    gr += ar * br + ai * bi
                    gi += ar * bi - ai * br
                absg = sqrt(gr * gr + gi * gi)
                if absg == 0.0 or alpha <= floor or beta <= floor:
                    continue
                if absg <= ROT_TOL * sqrt(alpha) * sqrt(beta):
                    continue
                rotated = 1
                pr = gr / absg
                pim = gi / absg
                zeta = (beta - alpha) / (2.0 * absg)
                t = copysign(1.0, zeta) / (fabs(zeta) + sqrt(1.0 + zeta * zeta))
                c = 1.0 / sqrt(1.0 + t * t)
                s = c * t
                for k in range(rows):
                    ar = ci[k]
                    ai = di[k]
                    # b = conj(phase) * w_j
                    xr = pr * cj[k] + pim * dj[k]
                    xi = pr * dj[k] - pim * cj[k]
                    ci[k] = c * ar - s * xr
                    di[k] = c * ai - s * xi
                    cj[k] = s * ar + c * xr
                    dj[k] = s * ai + c * xi
                if vr != NULL:
                    ci = vr + i * cols
                    cj = vr + j * cols
                    di = vi + i * cols
                    dj = vi + j * cols
                    for k in range(cols):
                        ar = ci[k]
                        ai = di[k]
                        xr = pr * cj[k] + pim * dj[k]
                        xi = pr * dj[k] - pim * cj[k]
                        ci[k] = c * ar - s * xr
                        di[k] = c * ai - s * xi
                        cj[k] = s * ar + c * xr
                        dj[k] = s * ai + c * xi
        if not rotated:
            return sweep + 1
    return MAX_SWEEPS + 1


cdef void _load(const double complex[:, ::1] a, double* wr, double* wi,
                int m, int n) noexcept nogil:
    # Column-major copy of a (m >= n) or of a^H (m < n).
    cdef int i, j
    if m >= n:
        for j in range(n):
            for i in range(m):
                wr[j * m + i] = a[i, j].real
                wi[j * m + i] = a[i, j].imag
    else:
        for j in range(m):
            for i in range(n):
                wr[j * n + i] = a[j, i].real
                wi[j * n + i] = -a[j, i].imag


cdef void _load_profile(const double complex[:, ::1] a, double gamma,
                        const double complex[::1] eta, const double complex[::1] xi,
                        double* wr, double* wi, int m, int n) noexcept nogil:
    # Same as _load for the matrix a - gamma * eta xi^*.
    cdef int i, j
    cdef double er, ei, fr, fi
    if m >= n:
        for j in range(n):
            fr = xi[j].real
            fi = -xi[j].imag
            for i in range(m):
                er = eta[i].real
                ei = eta[i].imag
                wr[j * m + i] = a[i, j].real - gamma * (er * fr - ei * fi)
                wi[j * m + i] = a[i, j].imag - gamma * (er * fi + ei * fr)
    else:
        for j in range(m):
            er = eta[j].real
            ei = eta[j].imag
            for i in range(n):
                fr = xi[i].real
                fi = -xi[i].imag
                wr[j * n + i] = a[j, i].real - gamma * (er * fr - ei * fi)
                wi[j * n + i] = -(a[j, i].imag - gamma * (er * fi + ei * fr))


cdef double _power_sum(double* wr, double* wi, int rows, int cols, double p) noexcept nogil:
    cdef int j, k
    cdef double nrm, total = 0.0
    for j in range(cols):
        nrm = 0.0
        for k in range(rows):
            nrm += wr[j * rows + k] * wr[j * rows + k] + wi[j * rows + k] * wi[j * rows + k]
        if nrm > 0.0:
            total += pow(nrm, 0.5 * p)
    return total


def jacobi_svd(const double complex[:, ::1] a):
    """Raw one-sided Jacobi factorization.

    Returns ``(w, v, flipped, sweeps)`` where ``w`` has orthogonal columns and
    ``w = a @ v`` (or ``w = a^H @ v`` when ``flipped``).
    """
    cdef int m = a.shape[0]
    cdef int n = a.shape[1]
    cdef int rows = m if m >= n else n
    cdef int cols = n if m >= n else m
    cdef int i, sweeps
    cdef double* buf = <double*> malloc(sizeof(double) * 2 * (rows * cols + cols * cols))
    if buf == NULL:
        raise MemoryError()
    cdef double* wr = buf
    cdef double* wi = buf + rows * cols
    cdef double* vr = wi + rows * cols
    cdef double* vi = vr + cols * cols
    try:
        with nogil:
            _load(a, wr, wi, m, n)
            for i in range(cols * cols):
                vr[i] = 0.0
                vi[i] = 0.0
            for i in range(cols):
                vr[i * cols + i] = 1.0
            sweeps = _jacobi(wr, wi, rows, cols, vr, vi)
        w = np.empty((cols, rows), dtype=np.complex128)
        v = np.empty((cols, cols), dtype=np.complex128)
        wv = w.reshape(-1)
        vv = v.reshape(-1)
        _export(wr, wi, rows * cols, wv)
        _export(vr, vi, cols * cols, vv)
    finally:
        free(buf)
    return w.T.copy(), v.T.copy(), m < n, sweeps


cdef void _export(double* re, double* im, int size, double complex[::1] out) noexcept:
    cdef int i
    for i in range(size):
        out[i] = re[i] + 1j * im[i]


def singular_values(const double complex[:, ::1] a):
    """Singular values in non-increasing order."""
    cdef int m = a.shape[0]
    cdef int n = a.shape[1]
    cdef int rows = m if m >= n else n
    cdef int cols = n if m >= n else m
    cdef int j, k
    cdef double nrm
    cdef double* wr = <double*> malloc(sizeof(double) * 2 * rows * cols)
    if wr == NULL:
        raise MemoryError()
    cdef double* wi = wr + rows * cols
    out = np.empty(cols, dtype=np.float64)
    cdef double[::1] o = out
    with nogil:
        _load(a, wr, wi, m, n)
        _jacobi(wr, wi, rows, cols, NULL, NULL)
        for j in range(cols):
            nrm = 0.0
            for k in range(rows):
                nrm += wr[j * rows + k] * wr[j * rows + k] + wi[j * rows + k] * wi[j * rows + k]
            o[j] = sqrt(nrm)
    free(wr)
    out[::-1].sort()
    return out


def schatten_pp(const double complex[:, ::1] a, double p):
    """Sum of the p-th powers of the singular values of ``a``."""
    cdef int m = a.shape[0]
    cdef int n = a.shape[1]
    cdef int rows = m if m >= n else n
    cdef int cols = n if m >= n else m
    cdef double total
    cdef double* wr = <double*> malloc(sizeof(double) * 2 * rows * cols)
    if wr == NULL:
        raise MemoryError()
    cdef double* wi = wr + rows * cols
    with nogil:
        _load(a, wr, wi, m, n)
        _jacobi(wr, wi, rows, cols, NULL, NULL)
        total = _power_sum(wr, wi, rows, cols, p)
    free(wr)
    return total


def schatten_pp_batch(const double complex[:, :, ::1] stack, double p):
    """``schatten_pp`` over the leading axis of ``stack``."""
    cdef Py_ssize_t b, nb = stack.shape[0]
    cdef int m = stack.shape[1]
    cdef int n = stack.shape[2]
    cdef int rows = m if m >= n else n
    cdef int cols = n if m >= n else m
    out = np.empty(nb, dtype=np.float64)
    cdef double[::1] o = out
    cdef double* wr = <double*> malloc(sizeof(double) * 2 * rows * cols)
    if wr == NULL:
        raise MemoryError()
    cdef double* wi = wr + rows * cols
    with nogil:
        for b in range(nb):
            _load(stack[b], wr, wi, m, n)
            _jacobi(wr, wi, rows, cols, NULL, NULL)
            o[b] = _power_sum(wr, wi, rows, cols, p)
    free(wr)
    return out


def profile_pp(const double complex[:, ::1] a, double gamma,
               const double complex[::1] eta, const double complex[::1] xi, double p):
    """``schatten_pp(a - gamma * outer(eta, conj(xi)), p)`` without temporaries."""
    cdef int m = a.shape[0]
    cdef int n = a.shape[1]
    cdef int rows = m if m >= n else n
    cdef int cols = n if m >= n else m
    cdef double total
    cdef double* wr = <double*> malloc(sizeof(double) * 2 * rows * cols)
    if wr == NULL:
        raise MemoryError()
    cdef double* wi = wr + rows * cols
    with nogil:
        _load_profile(a, gamma, eta, xi, wr, wi, m, n)
        _jacobi(wr, wi, rows, cols, NULL, NULL)
        total = _power_sum(wr, wi, rows, cols, p)
    free(wr)
    return total


def profile_pp_batch(const double complex[:, ::1] a, double gamma,
                     const double complex[:, ::1] etas, const double complex[:, ::1] xis,
                     double p):
    """``profile_pp`` for each row pair of ``etas`` and ``xis``."""
    cdef Py_ssize_t b, nb = etas.shape[0]
    cdef int m = a.shape[0]
    cdef int n = a.shape[1]
    cdef int rows = m if m >= n else n
    cdef int cols = n if m >= n else m
    out = np.empty(nb, dtype=np.float64)
    cdef double[::1] o = out
    cdef double* wr = <double*> malloc(sizeof(double) * 2 * rows * cols)
    if wr == NULL:
        raise MemoryError()
    cdef double* wi = wr + rows * cols
    with nogil:
        for b in range(nb):
            _load_profile(a, gamma, etas[b], xis[b], wr, wi, m, n)
            _jacobi(wr, wi, rows, cols, NULL, NULL)
            o[b] = _power_sum(wr, wi, rows, cols, p)
    free(wr)
    return out


def profile_pp_packed(const double complex[:, ::1] a, double gamma,
                      const double[:, ::1] pts, double p):
    """Profile at packed, not necessarily normalized, vector pairs.

    Row ``k`` of ``pts`` is ``(Re eta, Im eta, Re xi, Im xi)``; ``eta`` and
    ``xi`` are normalized before forming ``a - gamma * eta xi^*``.
    """
    cdef Py_ssize_t b, nb = pts.shape[0]
    cdef int m = a.shape[0]
    cdef int n = a.shape[1]
    cdef int rows = m if m >= n else n
    cdef int cols = n if m >= n else m
    cdef int i
    cdef double ne, nx
    out = np.empty(nb, dtype=np.float64)
    cdef double[::1] o = out
    eta_arr = np.empty(m, dtype=np.complex128)
    xi_arr = np.empty(n, dtype=np.complex128)
    cdef double complex[::1] eta = eta_arr
    cdef double complex[::1] xi = xi_arr
    cdef double* wr = <double*> malloc(sizeof(double) * 2 * rows * cols)
    if wr == NULL:
        raise MemoryError()
    cdef double* wi = wr + rows * cols
    with nogil:
        for b in range(nb):
            ne = 0.0
            for i in range(m):
                ne += pts[b, i] * pts[b, i] + pts[b, m + i] * pts[b, m + i]
            nx = 0.0
            for i in range(n):
                nx += pts[b, 2 * m + i] * pts[b, 2 * m + i] + pts[b, 2 * m + n + i] * pts[b, 2 * m + n + i]
            ne = 1.0 / sqrt(ne)
            nx = 1.0 / sqrt(nx)
            for i in range(m):
                eta[i] = ne * pts[b, i] + 1j * ne * pts[b, m + i]
            for i in range(n):
                xi[i] = nx * pts[b, 2 * m + i] + 1j * nx * pts[b, 2 * m + n + i]
            _load_profile(a, gamma, eta, xi, wr, wi, m, n)
            _jacobi(wr, wi, rows, cols, NULL, NULL)
            o[b] = _power_sum(wr, wi, rows, cols, p)
    free(wr)
    return out
