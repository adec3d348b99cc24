"""Pure numpy versions of the Jacobi sweep kernels.

Each round of the schedule holds disjoint index pairs, so all rotations in a
round are applied at once with fancy indexing. The compiled kernels in
``_kernels.pyx`` apply the same rotations in the same order and produce the
same numbers (bitwise for the eigen sweep, up to summation order for SVD).
"""
import numpy as np


def _rotation(diff, apq):
    # tan of the angle that zeroes the (p, q) entry; diff = (a_qq - a_pp) / 2
    theta = diff / apq
    sign = np.where(theta >= 0.0, 1.0, -1.0)
    with np.errstate(over="ignore"):
        t = sign / (np.abs(theta) + np.sqrt(theta * theta + 1.0))
    c = 1.0 / np.sqrt(t * t + 1.0)
    s = t * c
    return t, c, s


def jacobi_eigh_sweep(A, V, P, Q, skip_tol):
    """One cyclic sweep of two-sided Jacobi on symmetric ``A`` (in place).

    ``V`` accumulates the rotations column-wise. Returns the number of
    rotations applied.
    """
    count = 0
    for p, q in zip(P, Q):
        apq = A[p, q].copy()
        app = A[p, p].copy()
        aqq = A[q, q].copy()
        active = np.abs(apq) > skip_tol
        if not active.any():
            continue
        p, q = p[active], q[active]
        apq, app, aqq = apq[active], app[active], aqq[active]
        count += len(p)
        t, c, s = _rotation(0.5 * (aqq - app), apq)

        ap = A[:, p].copy()
        aq = A[:, q].copy()
        A[:, p] = c * ap - s * aq
        A[:, q] = s * ap + c * aq

        cc = c[:, None]
        sc = s[:, None]
        ap = A[p, :].copy()
        aq = A[q, :].copy()
        A[p, :] = cc * ap - sc * aq
        A[q, :] = sc * ap + cc * aq

        A[p, q] = 0.0
        A[q, p] = 0.0
        A[p, p] = app - t * apq
        A[q, q] = aqq + t * apq

        vp = V[:, p].copy()
        vq = V[:, q].copy()
        V[:, p] = c * vp - s * vq
        V[:, q] = s * vp + c * vq
    return count


def jacobi_svd_sweep(M, V, P, Q, tol, floor=0.0):
    """One sweep of one-sided (Hestenes) Jacobi on the columns of ``M``.

    Rotates column pairs until they are mutually orthogonal; ``V``
    accumulates the right rotations. Pairs where either squared column norm
    is at most ``floor`` (numerically zero columns) are skipped. Returns the
    number of rotations applied.
    """
    count = 0
    for p, q in zip(P, Q):
        mp = M[:, p]
        mq = M[:, q]
        alpha = np.einsum("ij,ij->j", mp, mp)
        beta = np.einsum("ij,ij->j", mq, mq)
        gamma = np.einsum("ij,ij->j", mp, mq)
        active = (np.abs(gamma) > tol * np.sqrt(alpha * beta)) & (np.minimum(alpha, beta) > floor)
        if not active.any():
            continue
        p, q = p[active], q[active]
        mp, mq = mp[:, active], mq[:, active]
        count += len(p)
        t, c, s = _rotation(0.5 * (beta[active] - alpha[active]), gamma[active])
        M[:, p] = c * mp - s * mq
        M[:, q] = s * mp + c * mq
        vp = V[:, p].copy()
        vq = V[:, q].copy()
        V[:, p] = c * vp - s * vq
        V[:, q] = s * vp + c * vq
    return count
