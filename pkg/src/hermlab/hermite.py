"""Stable evaluation of orthonormal Hermite functions.

The degree-m Hermite function is

    h_m(u) = (2^m m! sqrt(pi))^(-1/2) P_m(u) exp(-u^2/2),

with P_m the m-th (physicists') Hermite polynomial.  Everything here is
computed through the weighted three-term recurrence

    h_0(u)     = pi^(-1/4) exp(-u^2/2)
    h_1(u)     = sqrt(2) u h_0(u)
    h_{m+1}(u) = u sqrt(2/(m+1)) h_m(u) - sqrt(m/(m+1)) h_{m-1}(u)

which keeps every intermediate bounded by ~1 (the functions themselves are
uniformly bounded), so there is no overflow for any practical degree.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatchError

__all__ = ["eval_hermite", "eval_hermite_multi", "hermite_matrix"]


def eval_hermite(m: int, u):
    """Evaluate the degree-``m`` Hermite function at ``u``.

    ``u`` may be a scalar or an ndarray; the result has the same shape.
    """
    if m < 0:
        raise ValueError(f"degree must be >= 0, got {m}")
    uu = np.asarray(u, dtype=float)
    h_prev = np.pi ** -0.25 * np.exp(-0.5 * uu * uu)
    if m == 0:
        return h_prev if h_prev.ndim else float(h_prev)
    h = np.sqrt(2.0) * uu * h_prev
    for j in range(1, m):
        h, h_prev = uu * np.sqrt(2.0 / (j + 1)) * h - np.sqrt(j / (j + 1.0)) * h_prev, h
    return h if h.ndim else float(h)


def hermite_matrix(cap: int, u) -> np.ndarray:
    """All Hermite functions of degree 0..cap at the points ``u``.

    Returns an array of shape ``(cap + 1, len(u))``; row m is h_m(u).
    This is the workhorse behind analysis/synthesis on grids.
    """
    uu = np.atleast_1d(np.asarray(u, dtype=float))
    V = np.empty((cap + 1, uu.size))
    V[0] = np.pi ** -0.25 * np.exp(-0.5 * uu * uu)
    if cap >= 1:
        V[1] = np.sqrt(2.0) * uu * V[0]
    for m in range(1, cap):
        V[m + 1] = uu * np.sqrt(2.0 / (m + 1)) * V[m] - np.sqrt(m / (m + 1.0)) * V[m - 1]
    return V


def eval_hermite_multi(k, x) -> float:
    """Product Hermite function h_k(x) = prod_j h_{k_j}(x_j)."""
    k = tuple(int(v) for v in np.atleast_1d(k))
    xx = np.atleast_1d(np.asarray(x, dtype=float))
    if len(k) != xx.size:
        raise DimensionMismatchError(
            f"multi-index has dimension {len(k)} but point has dimension {xx.size}"
        )
    out = 1.0
    for kj, xj in zip(k, xx):
        out *= eval_hermite(kj, float(xj))
    return out
