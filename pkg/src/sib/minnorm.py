"""Wolfe's minimum-norm-point algorithm for the convex hull of a finite point set."""

import numpy as np

from .errors import NonConvergence

# weights below this are treated as zero when pruning the active set
_WEIGHT_EPS = 1e-14


def _affine_minimizer(Q):
    """Weights alpha (sum 1) of the point of minimum norm in the affine hull of Q's rows."""
    if len(Q) == 1:
        return np.ones(1)
    A = (Q[1:] - Q[0]).T
    beta, *_ = np.linalg.lstsq(A, -Q[0], rcond=None)
    return np.concatenate(([1.0 - beta.sum()], beta))


def min_norm_point(points, tol=1e-10, max_iter=None):
    """Return ``(x, weights)`` where ``x`` is the point of conv(points) nearest the origin.

    ``weights`` is a convex combination over the rows of ``points`` with
    ``weights @ points == x``. Termination uses Wolfe's criterion
    ``|x|^2 - min_j <x, p_j> <= tol * max_j |p_j|^2``.

    Raises NonConvergence after ``max_iter`` major cycles (default ``100 * m``).
    """
    P = np.asarray(points, dtype=float)
    m = P.shape[0]
    if max_iter is None:
        max_iter = 100 * m
    sq = np.einsum("ij,ij->i", P, P)
    scale = float(sq.max())
    weights = np.zeros(m)
    j = int(np.argmin(sq))
    if scale == 0.0 or m == 1:
        weights[j] = 1.0
        return P[j].copy(), weights

    S = [j]
    lam = np.ones(1)
    x = P[j].copy()
    floor = (1e-15 ** 2) * scale
    for _ in range(max_iter):
        dots = P @ x
        j = int(np.argmin(dots))
        xx = float(x @ x)
        if xx - dots[j] <= tol * scale or xx <= floor or j in S:
            break
        S.append(j)
        lam = np.append(lam, 0.0)
        while True:
            alpha = _affine_minimizer(P[S])
            if np.all(alpha > _WEIGHT_EPS):
                lam = alpha
                break
            neg = alpha <= _WEIGHT_EPS
            denom = lam[neg] - alpha[neg]
            ratios = np.where(denom > 0, lam[neg] / np.where(denom > 0, denom, 1.0), 0.0)
            theta = min(1.0, float(ratios.min()))
            lam = theta * alpha + (1.0 - theta) * lam
            keep = lam > _WEIGHT_EPS
            if not keep.any():
                keep[int(np.argmax(lam))] = True
            S = [s for s, k in zip(S, keep) if k]
            lam = lam[keep]
            lam = lam / lam.sum()
        x = lam @ P[S]
    else:
        raise NonConvergence(
            f"min-norm-point did not converge in {max_iter} iterations",
            iterations=max_iter,
            residual=float(x @ x - (P @ x).min()),
        )
    weights[S] = lam
    return x, weights
