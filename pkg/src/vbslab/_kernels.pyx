# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled loops for the dense state-vector kernels.

Same signatures and results as :mod:`vbslab._kernels_py`.
"""

import numpy as np
cimport numpy as cnp

cnp.import_array()


def _strides(dims):
    strides = np.ones(len(dims), dtype=np.int64)
    for i in range(len(dims) - 2, -1, -1):
        strides[i] = strides[i + 1] * dims[i + 1]
    return strides


def _bases(dims, skip):
    strides = _strides(dims)
    bases = np.zeros(1, dtype=np.int64)
    for s in range(len(dims)):
        if s in skip:
            continue
        bases = (bases[:, None] + np.arange(dims[s], dtype=np.int64)[None, :] * strides[s]).reshape(-1)
    return bases


def block_offsets(dims, sites):
    strides = _strides(dims)
    offs = np.zeros(1, dtype=np.int64)
    for s in sites:
        offs = (offs[:, None] + np.arange(dims[s], dtype=np.int64)[None, :] * strides[s]).reshape(-1)
    return offs


def env_bases(dims, sites):
    return _bases(dims, set(sites))


def apply_two_site(psi, dims, int k, int l, op):
    """Loop over the non-zero entries of ``op`` only; bond terms conserve total Sz.

    Complex products are spelled out on real and imaginary parts, which keeps
    the C compiler from routing them through its NaN-safe library call.
    """
    dims = [int(d) for d in dims]
    src_arr = np.ascontiguousarray(psi, dtype=np.complex128).reshape(-1)
    cdef double[::1] src = src_arr.view(np.float64)
    op = np.ascontiguousarray(op, dtype=np.complex128)
    strides = _strides(dims)
    cdef long long sk = strides[k]
    cdef long long sl = strides[l]
    cdef int dl = dims[l]
    rows_np, cols_np = np.nonzero(op)
    nz = op[rows_np, cols_np]
    cdef double[::1] vre = np.ascontiguousarray(nz.real)
    cdef double[::1] vim = np.ascontiguousarray(nz.imag)
    cdef long long[::1] rpos = 2 * ((rows_np // dl) * sk + (rows_np % dl) * sl)
    cdef long long[::1] cpos = 2 * ((cols_np // dl) * sk + (cols_np % dl) * sl)
    cdef long long[::1] bases = 2 * _bases(dims, {k, l})
    out_arr = np.zeros(src_arr.shape[0], dtype=np.complex128)
    cdef double[::1] out = out_arr.view(np.float64)
    cdef Py_ssize_t t, b
    cdef Py_ssize_t nnz = vre.shape[0]
    cdef long long base, r, c
    cdef double xr, xi
    for b in range(bases.shape[0]):
        base = bases[b]
        for t in range(nnz):
            c = base + cpos[t]
            xr = src[c]
            xi = src[c + 1]
            if xr == 0 and xi == 0:
                continue
            r = base + rpos[t]
            out[r] += vre[t] * xr - vim[t] * xi
            out[r + 1] += vre[t] * xi + vim[t] * xr
    return out_arr


def matrix_unit_expectations(psi, dims, sites):
    """Accumulate ``psi[a, e] conj(psi[b, e])`` over the non-zero amplitudes of each environment slice."""
    cdef double complex[::1] src = np.ascontiguousarray(psi, dtype=np.complex128).reshape(-1)
    cdef long long[::1] offs = block_offsets(dims, sites)
    cdef long long[::1] bases = env_bases(dims, sites)
    cdef Py_ssize_t nb = offs.shape[0]
    cdef Py_ssize_t ne = bases.shape[0]
    table = np.zeros((nb, nb), dtype=np.complex128)
    cdef double complex[:, ::1] E = table
    cdef Py_ssize_t[::1] idx = np.empty(nb, dtype=np.intp)
    cdef Py_ssize_t a, b, e, i, j, cnt
    cdef long long base
    cdef double x_re, x_im, ar, ai, br, bi
    cdef double[::1] vre = np.empty(nb, dtype=np.float64)
    cdef double[::1] vim = np.empty(nb, dtype=np.float64)
    cdef double[:, ::1] Ere = np.zeros((nb, nb), dtype=np.float64)
    cdef double[:, ::1] Eim = np.zeros((nb, nb), dtype=np.float64)
    for e in range(ne):
        base = bases[e]
        cnt = 0
        for a in range(nb):
            x_re = src[base + offs[a]].real
            x_im = src[base + offs[a]].imag
            if x_re != 0 or x_im != 0:
                idx[cnt] = a
                vre[cnt] = x_re
                vim[cnt] = x_im
                cnt += 1
        for i in range(cnt):
            ar = vre[i]
            ai = vim[i]
            a = idx[i]
            for j in range(i, cnt):
                br = vre[j]
                bi = vim[j]
                Ere[a, idx[j]] += ar * br + ai * bi
                Eim[a, idx[j]] += ai * br - ar * bi
    for a in range(nb):
        for b in range(a, nb):
            E[a, b] = Ere[a, b] + 1j * Eim[a, b]
    for a in range(nb):
        for b in range(a + 1, nb):
            E[b, a] = E[a, b].conjugate()
    return table
