# cython: boundscheck=False, wraparound=False, cdivision=True
# cython: language_level=3
"""Compiled line-advection kernels (OpenMP backend).

Entry points mirror ``_kernels_py`` exactly.  Per-line arithmetic follows
the Python backend operation for operation, and every line is processed
independently, so results are identical across worker counts and across
the transpose/strided sweep strategies.

Layout note: the contiguous spline path is organised as two full passes
(all coefficient solves, then all evaluations) over array-sized buffers;
together with the transposed source copy and the out-of-place result this
is a deliberate throughput-over-footprint trade.  The strided paths update
in place through per-thread block scratch, which is what keeps the lean
strategy lean.  No fast-math: the strategies must agree bitwise.
"""

import numpy as np

cimport numpy as cnp
from cython.parallel cimport prange, threadid
from libc.math cimport floor
from libc.string cimport memcpy

from ._kernels_py import _factors

cnp.import_array()


cdef inline long long _wrap(long long v, long long n) noexcept nogil:
    v = v % n
    if v < 0:
        v += n
    return v


cdef void _solve_line(
    const double* u,
    double* y,
    const double* mult,
    const double* denom,
    const double* z,
    double sden,
    Py_ssize_t n,
) noexcept nogil:
    # Mirrors cyclic_solve_lines in _kernels_py (same factors, same order).
    cdef Py_ssize_t i
    cdef double fac
    for i in range(n):
        y[i] = 6.0 * u[i]
    for i in range(1, n):
        y[i] = y[i] - mult[i] * y[i - 1]
    y[n - 1] = y[n - 1] / denom[n - 1]
    for i in range(n - 2, -1, -1):
        y[i] = y[i] - y[i + 1]
        y[i] = y[i] / denom[i]
    fac = (y[0] - 0.25 * y[n - 1]) / sden
    for i in range(n):
        y[i] = y[i] - fac * z[i]


cdef void _eval_line(
    const double* om,
    double* out,
    double shift,
    double h,
    Py_ssize_t n,
) noexcept nogil:
    cdef double s = shift / h
    cdef double off = floor(-s)
    cdef double theta = -s - off
    cdef long long o
    cdef Py_ssize_t i, j0, j1, j2, j3
    cdef double omt, w0, w1, w2, w3
    if theta >= 1.0:
        off += 1.0
        theta = 0.0
    o = <long long> off
    omt = 1.0 - theta
    w0 = omt * omt * omt / 6.0
    w1 = (4.0 - 6.0 * theta * theta + 3.0 * theta * theta * theta) / 6.0
    w2 = (4.0 - 6.0 * omt * omt + 3.0 * omt * omt * omt) / 6.0
    w3 = theta * theta * theta / 6.0
    j0 = <Py_ssize_t> _wrap(o - 1, n)
    j1 = j0 + 1 if j0 + 1 < n else 0
    j2 = j1 + 1 if j1 + 1 < n else 0
    j3 = j2 + 1 if j2 + 1 < n else 0
    for i in range(n):
        out[i] = w0 * om[j0] + w1 * om[j1] + w2 * om[j2] + w3 * om[j3]
        j0 = j0 + 1 if j0 + 1 < n else 0
        j1 = j1 + 1 if j1 + 1 < n else 0
        j2 = j2 + 1 if j2 + 1 < n else 0
        j3 = j3 + 1 if j3 + 1 < n else 0


cdef void _dg_line(
    const double* u,
    double* out,
    const double* amat,
    const double* bmat,
    long long q,
    double alpha,
    Py_ssize_t nc,
    Py_ssize_t p,
) noexcept nogil:
    cdef Py_ssize_t c, j, m, lowc, upc
    cdef double acc_a, acc_b
    if alpha == 0.0:
        # Whole-cell shift: exact circular copy, out cell c <- cell (c - q).
        for c in range(nc):
            memcpy(out + c * p, u + _wrap(c - q, nc) * p, p * sizeof(double))
        return
    for c in range(nc):
        lowc = <Py_ssize_t> _wrap(c - q - 1, nc)
        upc = <Py_ssize_t> _wrap(c - q, nc)
        for j in range(p):
            acc_a = 0.0
            for m in range(p):
                acc_a = acc_a + amat[j * p + m] * u[lowc * p + m]
            acc_b = 0.0
            for m in range(p):
                acc_b = acc_b + bmat[j * p + m] * u[upc * p + m]
            out[c * p + j] = acc_a + acc_b


def spline_sweep_contig(
    double[:, ::1] lines,
    const cnp.int64_t[::1] idx,
    const double[::1] table,
    double h,
    int threads,
):
    cdef Py_ssize_t nlines = lines.shape[0]
    cdef Py_ssize_t n = lines.shape[1]
    mult_a, denom_a, z_a, sden_f = _factors(n)
    cdef const double[::1] mult = mult_a
    cdef const double[::1] denom = denom_a
    cdef const double[::1] z = z_a
    cdef double sden = sden_f
    om_arr = np.empty((nlines, n))
    out_arr = np.empty((nlines, n))
    cdef double[:, ::1] om = om_arr
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t r
    for r in prange(nlines, nogil=True, num_threads=threads, schedule='static'):
        _solve_line(&lines[r, 0], &om[r, 0], &mult[0], &denom[0], &z[0], sden, n)
    for r in prange(nlines, nogil=True, num_threads=threads, schedule='static'):
        _eval_line(&om[r, 0], &out[r, 0], table[idx[r]], h, n)
    return out_arr


def spline_sweep_strided(
    double[:, :, :, :] view,
    const cnp.int64_t[::1] idx,
    const double[::1] table,
    double h,
    int block,
    int threads,
):
    cdef Py_ssize_t l0 = view.shape[0]
    cdef Py_ssize_t l1 = view.shape[1]
    cdef Py_ssize_t l2 = view.shape[2]
    cdef Py_ssize_t n = view.shape[3]
    cdef Py_ssize_t total = l0 * l1 * l2
    cdef Py_ssize_t nblocks = (total + block - 1) // block
    mult_a, denom_a, z_a, sden_f = _factors(n)
    cdef const double[::1] mult = mult_a
    cdef const double[::1] denom = denom_a
    cdef const double[::1] z = z_a
    cdef double sden = sden_f
    gbuf = np.empty((threads, block * n))
    obuf = np.empty((threads, n))
    ibuf = np.empty((threads, 3 * block), dtype=np.int64)
    cdef double[:, ::1] g = gbuf
    cdef double[:, ::1] om = obuf
    cdef cnp.int64_t[:, ::1] ii = ibuf
    cdef Py_ssize_t blk, li, k, r0, bcount, r
    cdef int tid
    for blk in prange(nblocks, nogil=True, num_threads=threads, schedule='static'):
        tid = threadid()
        r0 = blk * block
        bcount = total - r0
        if bcount > block:
            bcount = block
        for li in range(bcount):
            r = r0 + li
            ii[tid, 3 * li] = r // (l1 * l2)
            ii[tid, 3 * li + 1] = (r // l2) % l1
            ii[tid, 3 * li + 2] = r % l2
        for k in range(n):
            for li in range(bcount):
                g[tid, li * n + k] = view[ii[tid, 3 * li], ii[tid, 3 * li + 1], ii[tid, 3 * li + 2], k]
        for li in range(bcount):
            r = r0 + li
            _solve_line(&g[tid, li * n], &om[tid, 0], &mult[0], &denom[0], &z[0], sden, n)
            _eval_line(&om[tid, 0], &g[tid, li * n], table[idx[r]], h, n)
        for k in range(n):
            for li in range(bcount):
                view[ii[tid, 3 * li], ii[tid, 3 * li + 1], ii[tid, 3 * li + 2], k] = g[tid, li * n + k]


def dg_sweep_contig(
    double[:, ::1] lines,
    const cnp.int64_t[::1] idx,
    const double[:, :, ::1] a,
    const double[:, :, ::1] b,
    const cnp.int64_t[::1] q,
    const double[::1] alpha,
    int ncells,
    int nloc,
    int threads,
):
    cdef Py_ssize_t nlines = lines.shape[0]
    cdef Py_ssize_t n = lines.shape[1]
    out_arr = np.empty((nlines, n))
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t r
    cdef cnp.int64_t pi
    for r in prange(nlines, nogil=True, num_threads=threads, schedule='static'):
        pi = idx[r]
        _dg_line(
            &lines[r, 0], &out[r, 0], &a[pi, 0, 0], &b[pi, 0, 0],
            q[pi], alpha[pi], ncells, nloc,
        )
    return out_arr


def dg_sweep_strided(
    double[:, :, :, :] view,
    const cnp.int64_t[::1] idx,
    const double[:, :, ::1] a,
    const double[:, :, ::1] b,
    const cnp.int64_t[::1] q,
    const double[::1] alpha,
    int ncells,
    int nloc,
    int block,
    int threads,
):
    cdef Py_ssize_t l0 = view.shape[0]
    cdef Py_ssize_t l1 = view.shape[1]
    cdef Py_ssize_t l2 = view.shape[2]
    cdef Py_ssize_t n = view.shape[3]
    cdef Py_ssize_t total = l0 * l1 * l2
    cdef Py_ssize_t nblocks = (total + block - 1) // block
    gbuf = np.empty((threads, block * n))
    obuf = np.empty((threads, n))
    ibuf = np.empty((threads, 3 * block), dtype=np.int64)
    cdef double[:, ::1] g = gbuf
    cdef double[:, ::1] res = obuf
    cdef cnp.int64_t[:, ::1] ii = ibuf
    cdef Py_ssize_t blk, li, k, r0, bcount, r
    cdef cnp.int64_t pi
    cdef int tid
    for blk in prange(nblocks, nogil=True, num_threads=threads, schedule='static'):
        tid = threadid()
        r0 = blk * block
        bcount = total - r0
        if bcount > block:
            bcount = block
        for li in range(bcount):
            r = r0 + li
            ii[tid, 3 * li] = r // (l1 * l2)
            ii[tid, 3 * li + 1] = (r // l2) % l1
            ii[tid, 3 * li + 2] = r % l2
        for k in range(n):
            for li in range(bcount):
                g[tid, li * n + k] = view[ii[tid, 3 * li], ii[tid, 3 * li + 1], ii[tid, 3 * li + 2], k]
        for li in range(bcount):
            r = r0 + li
            pi = idx[r]
            _dg_line(
                &g[tid, li * n], &res[tid, 0], &a[pi, 0, 0], &b[pi, 0, 0],
                q[pi], alpha[pi], ncells, nloc,
            )
            memcpy(&g[tid, li * n], &res[tid, 0], n * sizeof(double))
        for k in range(n):
            for li in range(bcount):
                view[ii[tid, 3 * li], ii[tid, 3 * li + 1], ii[tid, 3 * li + 2], k] = g[tid, li * n + k]
