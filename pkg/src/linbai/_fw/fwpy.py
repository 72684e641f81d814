"""Pure-python Frank-Wolfe solver for minimax design problems.

Solves  min_{lam in simplex} max_p  y_p' A(lam)^{-1} y_p  over a finite
arm set, where A(lam) = sum_k lam_k x_k x_k'.  The compiled twin in
``_fwcore.pyx`` implements the same iteration; this module is the
fallback selected at import time when the extension is unavailable.
"""

import numpy as np

__all__ = ["minimax_design"]


def _regularized_cov(arms, weights, reg_scale):
    d = arms.shape[1]
    cov = (arms.T * weights) @ arms
    reg = reg_scale * np.trace(cov) / d
    cov[np.diag_indices(d)] += reg
    return cov


def minimax_design(arms, directions, iters, tol, reg_scale=1e-10,
                   refresh_every=100, window=50):
    """Run Frank-Wolfe with stepsize 1/(2(i+2)) on the minimax objective.

    Parameters
    ----------
    arms : (K, d) array, the support points of the design.
    directions : (P, d) array, the vectors whose worst-case Mahalanobis
        norm is minimized.
    iters : maximum number of iterations.
    tol : early-stop threshold on the relative objective improvement over
        a ``window``-iteration window.

    Returns
    -------
    (weights, value, n_iters, trajectory) where ``trajectory`` holds the
    exact objective at every ``refresh_every`` iterations.
    """
    arms = np.ascontiguousarray(arms, dtype=np.float64)
    directions = np.ascontiguousarray(directions, dtype=np.float64)
    K = arms.shape[0]

    lam = np.full(K, 1.0 / K)
    ainv = np.linalg.inv(_regularized_cov(arms, lam, reg_scale))
    # u_p = y_p' Ainv y_p, maintained by rank-one updates between refreshes
    u = np.einsum("pi,ij,pj->p", directions, ainv, directions)

    trajectory = [float(u.max())]
    window_obj = trajectory[0]
    n_done = 0

    for i in range(iters):
        if i > 0 and i % refresh_every == 0:
            ainv = np.linalg.inv(_regularized_cov(arms, lam, reg_scale))
            u = np.einsum("pi,ij,pj->p", directions, ainv, directions)
            trajectory.append(float(u.max()))
        if i > 0 and i % window == 0:
            cur = float(u.max())
            # |change| rather than signed improvement: the iterate
            # oscillates around the optimum, and a non-improving window
            # does not mean the weights have settled
            if abs(window_obj - cur) < tol * max(cur, 1e-300):
                break
            window_obj = cur

        p_star = int(np.argmax(u))
        b = ainv @ directions[p_star]
        scores = (arms @ b) ** 2
        k_star = int(np.argmax(scores))

        gamma = 1.0 / (2.0 * (i + 2))
        x = arms[k_star]
        v = ainv @ x
        q = float(x @ v)
        # A_new = (1-g) A + g x x'; Sherman-Morrison on the inverse
        c0 = 1.0 / (1.0 - gamma)
        beta = gamma * c0 * c0 / (1.0 + gamma * c0 * q)
        w = directions @ v
        u = c0 * u - beta * w * w
        ainv = c0 * ainv - beta * np.outer(v, v)

        lam *= 1.0 - gamma
        lam[k_star] += gamma
        n_done = i + 1

    ainv = np.linalg.inv(_regularized_cov(arms, lam, reg_scale))
    u = np.einsum("pi,ij,pj->p", directions, ainv, directions)
    value = float(u.max())
    trajectory.append(value)
    return lam, value, n_done, np.asarray(trajectory)
