"""Bounded isotonic regression by pool-adjacent-violators.

Projects a vector onto {nondecreasing sequences with entries in
[lower, upper]} under weighted least squares.  With constant bounds the
projection factorizes: pool first, then clip block values into the box
(clipping block means preserves both the ordering and the KKT
conditions).
"""
from __future__ import annotations

import numpy as np

from .errors import DimensionMismatch, DomainError


def isotonize(values, weights=None, lower_bound: float = 0.0,
              upper_bound: float = 1.0) -> np.ndarray:
    """Weighted least-squares monotone projection with box bounds."""
    y = np.asarray(values, dtype=np.float64).ravel()
    if weights is None:
        w = np.ones_like(y)
    else:
        w = np.asarray(weights, dtype=np.float64).ravel()
    if y.shape != w.shape:
        raise DimensionMismatch("values and weights must have equal length")
    if np.any(w <= 0.0):
        raise DomainError("weights must be positive")
    if not lower_bound <= upper_bound:
        raise DomainError("bounds must be ordered")
    if y.size == 0:
        return y.copy()

    # blocks as (weighted sum, weight, count); merge while out of order
    sums = np.empty(y.size)
    wts = np.empty(y.size)
    counts = np.empty(y.size, dtype=np.intp)
    means = np.empty(y.size)
    top = -1
    for i in range(y.size):
        top += 1
        sums[top] = y[i] * w[i]
        wts[top] = w[i]
        counts[top] = 1
        means[top] = y[i]
        while top > 0 and means[top - 1] > means[top]:
            sums[top - 1] += sums[top]
            wts[top - 1] += wts[top]
            counts[top - 1] += counts[top]
            means[top - 1] = sums[top - 1] / wts[top - 1]
            top -= 1
    out = np.repeat(np.clip(means[:top + 1], lower_bound, upper_bound),
                    counts[:top + 1])
    return out
