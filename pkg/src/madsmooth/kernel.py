"""Gaussian kernel estimators of density and distribution function.

The comparison baseline: rule-of-thumb bandwidth, Gaussian weights, no
boundary correction.
"""
from __future__ import annotations

import numpy as np

from .errors import DomainError, ZeroSpread
from .sample import Sample
from .specfun import std_normal_cdf, std_normal_pdf


def bandwidth_nrd0(sample: Sample) -> float:
    """Rule-of-thumb bandwidth 0.9 * min(sd, IQR/1.34) * n^(-1/5).

    Falls back to the standard deviation when the IQR vanishes; a sample
    with no spread at all has no usable bandwidth.
    """
    sd = float(np.std(sample.values, ddof=1))
    q75, q25 = np.percentile(sample.values, [75.0, 25.0])
    iqr = float(q75 - q25)
    spread = min(sd, iqr / 1.34) if iqr > 0.0 else sd
    if spread <= 0.0:
        raise ZeroSpread("sample has no spread; bandwidth undefined")
    return 0.9 * spread * sample.n ** (-0.2)


def kde_pdf(sample: Sample, h: float, x):
    """Gaussian kernel density estimate at x (scalar or array)."""
    if not h > 0.0:
        raise DomainError("bandwidth must be positive")
    pts = np.atleast_1d(np.asarray(x, dtype=np.float64))
    z = (pts[:, None] - sample.values[None, :]) / h
    out = std_normal_pdf(z).sum(axis=1) / (sample.n * h)
    return float(out[0]) if np.ndim(x) == 0 else out


def kde_cdf(sample: Sample, h: float, x):
    """Gaussian kernel distribution estimate at x (scalar or array)."""
    if not h > 0.0:
        raise DomainError("bandwidth must be positive")
    pts = np.atleast_1d(np.asarray(x, dtype=np.float64))
    z = (pts[:, None] - sample.values[None, :]) / h
    out = std_normal_cdf(z).sum(axis=1) / sample.n
    return float(out[0]) if np.ndim(x) == 0 else out
