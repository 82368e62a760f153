# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the kernels in ``_pykernels``; same signatures."""
import numpy as np
cimport numpy as cnp

cnp.import_array()


def two_photon_coefficients(U, pairs):
    cdef const double complex[:, ::1] u = np.ascontiguousarray(U, dtype=np.complex128)
    cdef const long[:, ::1] pl = np.ascontiguousarray(pairs, dtype=np.int_)
    cdef Py_ssize_t D = pl.shape[0]
    out_arr = np.zeros((D, D), dtype=np.complex128)
    cdef double complex[:, ::1] out = out_arr
    cdef Py_ssize_t r, c
    cdef long j, k, m, n
    for c in range(D):
        j = pl[c, 0]
        k = pl[c, 1]
        for r in range(D):
            m = pl[r, 0]
            n = pl[r, 1]
            if m == n:
                out[r, c] = u[m, j] * u[m, k]
            else:
                out[r, c] = u[m, j] * u[n, k] + u[n, j] * u[m, k]
    return out_arr


cdef inline Py_ssize_t _search(const double[::1] cum, double x) noexcept nogil:
    cdef Py_ssize_t n = cum.shape[0]
    cdef Py_ssize_t i
    for i in range(n - 1):
        if x < cum[i]:
            return i
    return n - 1


def tally_pulses(event_u, outcome_u, dark_u, double p_single, double p_pair,
                 cum_single, cum_pair, pairs, double p_dark):
    cdef const double[::1] ev = np.ascontiguousarray(event_u, dtype=np.float64)
    cdef const double[::1] oc = np.ascontiguousarray(outcome_u, dtype=np.float64)
    cdef const double[::1] cs = np.ascontiguousarray(cum_single, dtype=np.float64)
    cdef const double[::1] cp = np.ascontiguousarray(cum_pair, dtype=np.float64)
    cdef const long[:, ::1] pl = np.ascontiguousarray(pairs, dtype=np.int_)
    cdef Py_ssize_t M = cs.shape[0]
    cdef bint use_dark = dark_u is not None and p_dark > 0.0
    cdef const double[:, ::1] dk
    if use_dark:
        dk = np.ascontiguousarray(dark_u, dtype=np.float64)

    singles_arr = np.zeros(M, dtype=np.int64)
    coinc_arr = np.zeros((M, M), dtype=np.int64)
    photons_arr = np.zeros(M, dtype=np.int64)
    cdef cnp.int64_t[::1] singles = singles_arr
    cdef cnp.int64_t[:, ::1] coinc = coinc_arr
    cdef cnp.int64_t[::1] photons = photons_arr
    cdef Py_ssize_t N = ev.shape[0]
    cdef Py_ssize_t i, d, e, s
    cdef double u
    cdef double thresh = p_single + p_pair
    cdef long n_one = 0, n_two = 0

    with nogil:
        for i in range(N):
            for d in range(M):
                photons[d] = 0
            u = ev[i]
            if u < p_single:
                photons[_search(cs, oc[i])] += 1
                n_one += 1
            elif u < thresh:
                s = _search(cp, oc[i])
                photons[pl[s, 0]] += 1
                photons[pl[s, 1]] += 1
                n_two += 1
            if use_dark:
                for d in range(M):
                    if dk[i, d] < p_dark:
                        photons[d] += 1
            for d in range(M):
                if photons[d]:
                    singles[d] += photons[d]
                    for e in range(d + 1, M):
                        if photons[e]:
                            coinc[d, e] += 1
    return singles_arr, coinc_arr, n_one, n_two
