# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Jacobi sweep kernels.

Same contract and rotation order as ``_fallback``; the pairs of a round are
disjoint so applying them one after another gives the same result as the
vectorized fallback.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, sqrt

cnp.import_array()


cdef inline void _angle(double diff, double apq, double* t, double* c, double* s) noexcept nogil:
    cdef double theta = diff / apq
    cdef double sign = 1.0 if theta >= 0.0 else -1.0
    t[0] = sign / (fabs(theta) + sqrt(theta * theta + 1.0))
    c[0] = 1.0 / sqrt(t[0] * t[0] + 1.0)
    s[0] = t[0] * c[0]


def jacobi_eigh_sweep(double[:, ::1] A, double[:, ::1] V,
                      const Py_ssize_t[:, ::1] P, const Py_ssize_t[:, ::1] Q,
                      double skip_tol):
    cdef Py_ssize_t n = A.shape[0]
    cdef Py_ssize_t nrounds = P.shape[0]
    cdef Py_ssize_t npair = P.shape[1]
    cdef Py_ssize_t k, i, j, r, p, q, na
    cdef long count = 0
    cdef double ap, aq, ci, si
    cdef Py_ssize_t[::1] ip = np.empty(npair, dtype=np.intp)
    cdef Py_ssize_t[::1] iq = np.empty(npair, dtype=np.intp)
    cdef double[::1] t = np.empty(npair)
    cdef double[::1] c = np.empty(npair)
    cdef double[::1] s = np.empty(npair)
    cdef double[::1] app = np.empty(npair)
    cdef double[::1] aqq = np.empty(npair)
    cdef double[::1] apq = np.empty(npair)

    with nogil:
        for k in range(nrounds):
            na = 0
            for i in range(npair):
                p = P[k, i]
                q = Q[k, i]
                if fabs(A[p, q]) > skip_tol:
                    ip[na] = p
                    iq[na] = q
                    apq[na] = A[p, q]
                    app[na] = A[p, p]
                    aqq[na] = A[q, q]
                    _angle(0.5 * (aqq[na] - app[na]), apq[na], &t[na], &c[na], &s[na])
                    na += 1
            if na == 0:
                continue
            count += na
            # columns p, q of every row
            for r in range(n):
                for i in range(na):
                    p = ip[i]
                    q = iq[i]
                    ap = A[r, p]
                    aq = A[r, q]
                    A[r, p] = c[i] * ap - s[i] * aq
                    A[r, q] = s[i] * ap + c[i] * aq
            # rows p, q
            for i in range(na):
                p = ip[i]
                q = iq[i]
                ci = c[i]
                si = s[i]
                for j in range(n):
                    ap = A[p, j]
                    aq = A[q, j]
                    A[p, j] = ci * ap - si * aq
                    A[q, j] = si * ap + ci * aq
            for i in range(na):
                p = ip[i]
                q = iq[i]
                A[p, q] = 0.0
                A[q, p] = 0.0
                A[p, p] = app[i] - t[i] * apq[i]
                A[q, q] = aqq[i] + t[i] * apq[i]
            for r in range(V.shape[0]):
                for i in range(na):
                    p = ip[i]
                    q = iq[i]
                    ap = V[r, p]
                    aq = V[r, q]
                    V[r, p] = c[i] * ap - s[i] * aq
                    V[r, q] = s[i] * ap + c[i] * aq
    return count


def jacobi_svd_sweep(double[:, ::1] M, double[:, ::1] V,
                     const Py_ssize_t[:, ::1] P, const Py_ssize_t[:, ::1] Q,
                     double tol, double floor=0.0):
    cdef Py_ssize_t m = M.shape[0]
    cdef Py_ssize_t nrounds = P.shape[0]
    cdef Py_ssize_t npair = P.shape[1]
    cdef Py_ssize_t k, i, r, p, q
    cdef long count = 0
    cdef double alpha, beta, gamma, ap, aq, tt, cc, ss

    with nogil:
        for k in range(nrounds):
            for i in range(npair):
                p = P[k, i]
                q = Q[k, i]
                alpha = 0.0
                beta = 0.0
                gamma = 0.0
                for r in range(m):
                    alpha = alpha + M[r, p] * M[r, p]
                    beta = beta + M[r, q] * M[r, q]
                    gamma = gamma + M[r, p] * M[r, q]
                if not fabs(gamma) > tol * sqrt(alpha * beta) or alpha <= floor or beta <= floor:
                    continue
                count += 1
                _angle(0.5 * (beta - alpha), gamma, &tt, &cc, &ss)
                for r in range(m):
                    ap = M[r, p]
                    aq = M[r, q]
                    M[r, p] = cc * ap - ss * aq
                    M[r, q] = ss * ap + cc * aq
                for r in range(V.shape[0]):
                    ap = V[r, p]
                    aq = V[r, q]
                    V[r, p] = cc * ap - ss * aq
                    V[r, q] = ss * ap + cc * aq
    return count
