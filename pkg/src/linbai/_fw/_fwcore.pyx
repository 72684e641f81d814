# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled Frank-Wolfe kernel for minimax design problems.

Same iteration as ``fwpy.minimax_design``; the inner rank-one updates run
as C loops, the periodic exact refresh goes through numpy.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport fabs

cnp.import_array()


def _regularized_cov(arms, weights, double reg_scale):
    d = arms.shape[1]
    cov = (arms.T * weights) @ arms
    reg = reg_scale * np.trace(cov) / d
    cov[np.diag_indices(d)] += reg
    return cov


def minimax_design(arms, directions, int iters, double tol,
                   double reg_scale=1e-10, int refresh_every=100,
                   int window=50):
    """Compiled counterpart of :func:`linbai._fw.fwpy.minimax_design`."""
    # copy=True: inputs may be read-only views, memoryviews need writable
    arms = np.array(arms, dtype=np.float64, order="C", copy=True)
    directions = np.array(directions, dtype=np.float64, order="C", copy=True)

    cdef double[:, ::1] X = arms
    cdef double[:, ::1] Y = directions
    cdef Py_ssize_t K = X.shape[0]
    cdef Py_ssize_t d = X.shape[1]
    cdef Py_ssize_t P = Y.shape[0]

    lam_arr = np.full(K, 1.0 / K)
    cdef double[::1] lam = lam_arr

    ainv_arr = np.linalg.inv(_regularized_cov(arms, lam_arr, reg_scale))
    cdef double[:, ::1] ainv = ainv_arr
    u_arr = np.einsum("pi,ij,pj->p", directions, ainv_arr, directions)
    cdef double[::1] u = u_arr

    cdef double[::1] b = np.empty(d)
    cdef double[::1] v = np.empty(d)

    trajectory = [float(u_arr.max())]
    cdef double window_obj = trajectory[0]
    cdef double cur, best, s, gamma, q, c0, beta, w, score, best_score
    cdef Py_ssize_t i, j, k, p, p_star, k_star, n_done = 0

    for i in range(iters):
        if i > 0 and i % refresh_every == 0:
            ainv_arr = np.linalg.inv(_regularized_cov(arms, lam_arr, reg_scale))
            ainv = ainv_arr
            u_arr = np.einsum("pi,ij,pj->p", directions, ainv_arr, directions)
            u = u_arr
            trajectory.append(float(u_arr.max()))
        if i > 0 and i % window == 0:
            cur = u[0]
            for p in range(1, P):
                if u[p] > cur:
                    cur = u[p]
            # |change| rather than signed improvement: the iterate
            # oscillates around the optimum, and a non-improving window
            # does not mean the weights have settled
            if fabs(window_obj - cur) < tol * max(cur, 1e-300):
                break
            window_obj = cur

        # worst direction (ties: lowest index)
        p_star = 0
        best = u[0]
        for p in range(1, P):
            if u[p] > best:
                best = u[p]
                p_star = p

        # b = Ainv y_{p*}; arm maximizing (x_k' b)^2 (ties: lowest index)
        for j in range(d):
            s = 0.0
            for k in range(d):
                s += ainv[j, k] * Y[p_star, k]
            b[j] = s
        k_star = 0
        best_score = -1.0
        for k in range(K):
            score = 0.0
            for j in range(d):
                score += X[k, j] * b[j]
            score = score * score
            if score > best_score:
                best_score = score
                k_star = k

        gamma = 1.0 / (2.0 * (i + 2))

        # v = Ainv x_{k*}, q = x' Ainv x
        q = 0.0
        for j in range(d):
            s = 0.0
            for k in range(d):
                s += ainv[j, k] * X[k_star, k]
            v[j] = s
            q += X[k_star, j] * s

        c0 = 1.0 / (1.0 - gamma)
        beta = gamma * c0 * c0 / (1.0 + gamma * c0 * q)

        for p in range(P):
            w = 0.0
            for j in range(d):
                w += Y[p, j] * v[j]
            u[p] = c0 * u[p] - beta * w * w

        for j in range(d):
            for k in range(d):
                ainv[j, k] = c0 * ainv[j, k] - beta * v[j] * v[k]

        for k in range(K):
            lam[k] *= 1.0 - gamma
        lam[k_star] += gamma
        n_done = i + 1

    ainv_arr = np.linalg.inv(_regularized_cov(arms, lam_arr, reg_scale))
    u_arr = np.einsum("pi,ij,pj->p", directions, ainv_arr, directions)
    value = float(u_arr.max())
    trajectory.append(value)
    return lam_arr, value, n_done, np.asarray(trajectory)
