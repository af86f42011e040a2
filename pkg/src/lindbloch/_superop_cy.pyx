# cython: language_level=3
# cython: boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled kernels mirroring `_superop_np`; see that module for the entry
conventions.  Inputs must be C-contiguous complex128 arrays."""

import numpy as np


def hamiltonian_superop(const double complex[:, ::1] H,
                        const double complex[:, :, ::1] elements):
    cdef Py_ssize_t n2 = elements.shape[0]
    cdef Py_ssize_t N = elements.shape[1]
    cdef Py_ssize_t m, n, a, b, c

    prod_arr = np.empty((n2, N, N), dtype=np.complex128)
    s_arr = np.empty((n2, n2), dtype=np.complex128)
    out_arr = np.empty((n2, n2), dtype=np.float64)
    cdef double complex[:, :, ::1] prod = prod_arr
    cdef double complex[:, ::1] s = s_arr
    cdef double[:, ::1] out = out_arr
    cdef double complex acc

    for m in range(n2):
        for a in range(N):
            for c in range(N):
                acc = 0
                for b in range(N):
                    acc = acc + H[a, b] * elements[m, b, c]
                prod[m, a, c] = acc
    for m in range(n2):
        for n in range(n2):
            acc = 0
            for a in range(N):
                for c in range(N):
                    acc = acc + prod[m, a, c] * elements[n, c, a]
            s[m, n] = acc
    for m in range(n2):
        for n in range(n2):
            out[m, n] = -(s[m, n].imag - s[n, m].imag)
    return out_arr


def dissipator_superop(const double complex[:, ::1] V,
                       const double complex[:, :, ::1] elements):
    cdef Py_ssize_t n2 = elements.shape[0]
    cdef Py_ssize_t N = elements.shape[1]
    cdef Py_ssize_t m, n, a, b, c

    sandwich_arr = np.empty((n2, N, N), dtype=np.complex128)
    KM_arr = np.empty((n2, N, N), dtype=np.complex128)
    K_arr = np.empty((N, N), dtype=np.complex128)
    scratch_arr = np.empty((N, N), dtype=np.complex128)
    t1_arr = np.empty((n2, n2), dtype=np.float64)
    t2_arr = np.empty((n2, n2), dtype=np.float64)
    cdef double complex[:, :, ::1] sandwich = sandwich_arr
    cdef double complex[:, :, ::1] KM = KM_arr
    cdef double complex[:, ::1] K = K_arr
    cdef double complex[:, ::1] scratch = scratch_arr
    cdef double[:, ::1] t1 = t1_arr
    cdef double[:, ::1] t2 = t2_arr
    cdef double complex acc

    # K = V† V
    for a in range(N):
        for c in range(N):
            acc = 0
            for b in range(N):
                acc = acc + V[b, a].conjugate() * V[b, c]
            K[a, c] = acc
    # sandwich_m = V† nu_m V,  KM_m = K nu_m
    for m in range(n2):
        for a in range(N):
            for c in range(N):
                acc = 0
                for b in range(N):
                    acc = acc + V[b, a].conjugate() * elements[m, b, c]
                scratch[a, c] = acc
        for a in range(N):
            for c in range(N):
                acc = 0
                for b in range(N):
                    acc = acc + scratch[a, b] * V[b, c]
                sandwich[m, a, c] = acc
        for a in range(N):
            for c in range(N):
                acc = 0
                for b in range(N):
                    acc = acc + K[a, b] * elements[m, b, c]
                KM[m, a, c] = acc
    for m in range(n2):
        for n in range(n2):
            acc = 0
            for a in range(N):
                for c in range(N):
                    acc = acc + sandwich[m, a, c] * elements[n, c, a]
            t1[m, n] = acc.real
            acc = 0
            for a in range(N):
                for c in range(N):
                    acc = acc + KM[m, a, c] * elements[n, c, a]
            t2[m, n] = acc.real
    out_arr = np.empty((n2, n2), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    for m in range(n2):
        for n in range(n2):
            out[m, n] = t1[m, n] - 0.5 * (t2[m, n] + t2[n, m])
    return out_arr
