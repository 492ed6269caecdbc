# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the batched kernels in _pykernels."""

import numpy as np
cimport numpy as cnp

cnp.import_array()


cdef inline void _bilinear(const double[:, :, ::1] T, const double[:] x, const double[:] y,
                           double[::1] out, Py_ssize_t d) noexcept nogil:
    cdef Py_ssize_t i, j, k
    cdef double xi, w
    for k in range(d):
        out[k] = 0.0
    for i in range(d):
        xi = x[i]
        if xi == 0.0:
            continue
        for j in range(d):
            w = xi * y[j]
            if w == 0.0:
                continue
            for k in range(d):
                out[k] += w * T[i, j, k]


def bracket_batch(const double[:, :, ::1] c, const double[:, ::1] X, const double[:, ::1] Y):
    cdef Py_ssize_t n = X.shape[0], d = X.shape[1], r
    out = np.zeros((n, d))
    cdef double[:, ::1] o = out
    with nogil:
        for r in range(n):
            _bilinear(c, X[r], Y[r], o[r], d)
    return out


def connection_batch(const double[:, :, ::1] G, const double[:, ::1] X, const double[:, ::1] Y):
    return bracket_batch(G, X, Y)


def curvature_batch(const double[:, :, ::1] c, const double[:, :, ::1] G, const double[:, ::1] P,
                    const double[:, ::1] X, const double[:, ::1] Y):
    cdef Py_ssize_t n = X.shape[0], d = X.shape[1], r, k, l
    out = np.zeros(n)
    cdef double[::1] o = out
    cdef double[::1] a = np.zeros(d), b = np.zeros(d), z = np.zeros(d)
    cdef double[::1] t1 = np.zeros(d), t2 = np.zeros(d), t3 = np.zeros(d)
    cdef double s, v
    with nogil:
        for r in range(n):
            _bilinear(G, Y[r], Y[r], a, d)
            _bilinear(G, X[r], Y[r], b, d)
            _bilinear(c, X[r], Y[r], z, d)
            _bilinear(G, X[r], a, t1, d)
            _bilinear(G, Y[r], b, t2, d)
            _bilinear(G, z, Y[r], t3, d)
            s = 0.0
            for k in range(d):
                v = t1[k] - t2[k] - t3[k]
                if v == 0.0:
                    continue
                for l in range(d):
                    s += v * P[k, l] * X[r, l]
            o[r] = s
    return out
