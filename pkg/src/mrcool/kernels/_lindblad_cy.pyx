# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled master-equation stepper; hot twin of the numpy fallback.

Same generator and stage arithmetic as `_lindblad_np`, with the CSR product
and the dissipator stencil fused into row passes parallelized over threads.
All writes are row-local, so results are bit-identical for any thread count.
"""

import numpy as np

cimport numpy as cnp
from cython.parallel cimport prange

cnp.import_array()

ctypedef double complex cplx


cdef void _csr_row(cplx[:, ::1] out, cplx[::1] h_data, long[::1] h_indices,
                   long[::1] h_indptr, cplx[:, ::1] rho, Py_ssize_t d,
                   Py_ssize_t i) noexcept nogil:
    cdef Py_ssize_t j, p, k
    cdef cplx hij
    for j in range(d):
        out[i, j] = 0
    for p in range(h_indptr[i], h_indptr[i + 1]):
        k = h_indices[p]
        hij = h_data[p]
        for j in range(d):
            out[i, j] = out[i, j] + hij * rho[k, j]


cdef void _rhs_row(cplx[:, ::1] k_out, cplx[:, ::1] c, cplx[:, ::1] rho,
                   Py_ssize_t m, double g_down, double g_up, double g_relax,
                   double g_phi, double[::1] sq, Py_ssize_t i) noexcept nogil:
    cdef Py_ssize_t d = 2 * m
    cdef Py_ssize_t j, mi, mj, qi, qj
    cdef cplx acc, comm
    cdef double up_i, up_j
    qi = 1 if i >= m else 0
    mi = i - m if qi else i
    # a a^dag of the truncated raising operator: n+1 below the edge, 0 at it.
    up_i = mi + 1.0 if mi < m - 1 else 0.0
    for j in range(d):
        qj = 1 if j >= m else 0
        mj = j - m if qj else j
        comm = c[i, j] - c[j, i].conjugate()
        acc = comm.imag - 1j * comm.real
        if g_down != 0.0:
            if mi < m - 1 and mj < m - 1:
                acc = acc + g_down * sq[mi + 1] * sq[mj + 1] * rho[i + 1, j + 1]
            acc = acc - 0.5 * g_down * (mi + mj) * rho[i, j]
        if g_up != 0.0:
            if mi > 0 and mj > 0:
                acc = acc + g_up * sq[mi] * sq[mj] * rho[i - 1, j - 1]
            up_j = mj + 1.0 if mj < m - 1 else 0.0
            acc = acc - 0.5 * g_up * (up_i + up_j) * rho[i, j]
        if g_relax != 0.0:
            if qi == 0 and qj == 0:
                acc = acc + g_relax * rho[i + m, j + m]
            acc = acc - 0.5 * g_relax * (qi + qj) * rho[i, j]
        if g_phi != 0.0 and qi != qj:
            acc = acc - g_phi * rho[i, j]
        k_out[i, j] = acc


cdef void _stage(cplx[:, ::1] k_out, cplx[:, ::1] c, cplx[:, ::1] rho_stage,
                 cplx[::1] h_data, long[::1] h_indices, long[::1] h_indptr,
                 Py_ssize_t m, double g_down, double g_up, double g_relax,
                 double g_phi, double[::1] sq) noexcept nogil:
    cdef Py_ssize_t d = 2 * m
    cdef Py_ssize_t i
    for i in prange(d, schedule="static"):
        _csr_row(c, h_data, h_indices, h_indptr, rho_stage, d, i)
    for i in prange(d, schedule="static"):
        _rhs_row(k_out, c, rho_stage, m, g_down, g_up, g_relax, g_phi, sq, i)


cdef void _axpy_into(cplx[:, ::1] out, cplx[:, ::1] a, cplx[:, ::1] b,
                     double w, Py_ssize_t d) noexcept nogil:
    # out = a + w * b
    cdef Py_ssize_t i, j
    for i in prange(d, schedule="static"):
        for j in range(d):
            out[i, j] = a[i, j] + w * b[i, j]


cdef void _accumulate(cplx[:, ::1] acc, cplx[:, ::1] k, double w, Py_ssize_t d) noexcept nogil:
    cdef Py_ssize_t i, j
    for i in prange(d, schedule="static"):
        for j in range(d):
            acc[i, j] = acc[i, j] + w * k[i, j]


cdef void _symmetrize(cplx[:, ::1] rho, Py_ssize_t d) noexcept nogil:
    # Each off-diagonal pair is owned by exactly one row thread.
    cdef Py_ssize_t i, j
    cdef cplx v
    for i in prange(d, schedule="static"):
        rho[i, i] = rho[i, i].real + 0j
        for j in range(i + 1, d):
            v = 0.5 * (rho[i, j] + rho[j, i].conjugate())
            rho[i, j] = v
            rho[j, i] = v.conjugate()


def rk4_evolve(rho, h_data, h_indices, h_indptr, m_levels, g_down, g_up,
               g_relax, g_phi, dt, n_steps):
    """Advance rho by n_steps classical RK4 steps, re-Hermitizing each step."""
    cdef Py_ssize_t m = m_levels
    cdef Py_ssize_t d = 2 * m
    cdef double h_step = dt
    cdef Py_ssize_t steps = n_steps
    cdef double gd = g_down, gu = g_up, gr = g_relax, gp = g_phi

    rho_arr = np.array(rho, dtype=np.complex128, order="C")
    data_arr = np.ascontiguousarray(h_data, dtype=np.complex128)
    idx_arr = np.ascontiguousarray(h_indices, dtype=np.int64)
    ptr_arr = np.ascontiguousarray(h_indptr, dtype=np.int64)
    sq_arr = np.sqrt(np.arange(m + 1, dtype=np.float64))

    cdef cplx[:, ::1] r = rho_arr
    cdef cplx[::1] hd = data_arr
    cdef long[::1] hi = idx_arr
    cdef long[::1] hp = ptr_arr
    cdef double[::1] sq = sq_arr

    k_arr = np.empty((d, d), dtype=np.complex128)
    tmp_arr = np.empty((d, d), dtype=np.complex128)
    acc_arr = np.empty((d, d), dtype=np.complex128)
    c_arr = np.empty((d, d), dtype=np.complex128)
    cdef cplx[:, ::1] k = k_arr
    cdef cplx[:, ::1] tmp = tmp_arr
    cdef cplx[:, ::1] acc = acc_arr
    cdef cplx[:, ::1] c = c_arr

    cdef Py_ssize_t step
    with nogil:
        for step in range(steps):
            # k1
            _stage(k, c, r, hd, hi, hp, m, gd, gu, gr, gp, sq)
            _axpy_into(acc, r, k, h_step / 6.0, d)
            _axpy_into(tmp, r, k, 0.5 * h_step, d)
            # k2
            _stage(k, c, tmp, hd, hi, hp, m, gd, gu, gr, gp, sq)
            _accumulate(acc, k, h_step / 3.0, d)
            _axpy_into(tmp, r, k, 0.5 * h_step, d)
            # k3
            _stage(k, c, tmp, hd, hi, hp, m, gd, gu, gr, gp, sq)
            _accumulate(acc, k, h_step / 3.0, d)
            _axpy_into(tmp, r, k, h_step, d)
            # k4
            _stage(k, c, tmp, hd, hi, hp, m, gd, gu, gr, gp, sq)
            _axpy_into(r, acc, k, h_step / 6.0, d)
            _symmetrize(r, d)
    return rho_arr
