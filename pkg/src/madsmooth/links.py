"""Link functions mapping the unit interval onto the real line.

Each link supplies the forward map g, its inverse, and the derivative of
the inverse.  The inverse is itself a distribution function (logistic,
normal, Gumbel-type, Cauchy), which is what turns a monotone linear
predictor into a valid CDF estimate downstream.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .specfun import std_normal_cdf, std_normal_pdf, std_normal_quantile

LINK_NAMES = ("logit", "probit", "cloglog", "cauchit")

# link_forward clamps its argument this far inside (0, 1) so extreme
# empirical CDF values cannot overflow the transform.
_MU_CLAMP = 1e-12


@dataclass(frozen=True)
class LinkFunction:
    """One of the four supported links, selected by name."""

    kind: str

    def __post_init__(self):
        if self.kind not in LINK_NAMES:
            raise DomainError(f"unknown link {self.kind!r}; expected one of {LINK_NAMES}")


def get_link(name: str) -> LinkFunction:
    return LinkFunction(name)


def link_forward(link: LinkFunction, mu):
    """Map mean values in (0, 1) to the linear-predictor scale."""
    arr = np.asarray(mu, dtype=np.float64)
    if np.any(arr <= 0.0) or np.any(arr >= 1.0) or np.any(np.isnan(arr)):
        raise DomainError("link_forward requires mu strictly inside (0, 1)")
    m = np.clip(arr, _MU_CLAMP, 1.0 - _MU_CLAMP)
    if link.kind == "logit":
        out = np.log(m / (1.0 - m))
    elif link.kind == "probit":
        out = std_normal_quantile(m)
    elif link.kind == "cloglog":
        out = np.log(-np.log1p(-m))
    else:  # cauchit
        out = np.tan(math.pi * (m - 0.5))
    return float(out) if np.ndim(mu) == 0 else out


def link_inverse(link: LinkFunction, eta):
    """Map linear predictors back into (0, 1)."""
    arr = np.asarray(eta, dtype=np.float64)
    if link.kind == "logit":
        # branch on sign to avoid overflow of exp for large |eta|
        out = np.where(arr >= 0.0,
                       1.0 / (1.0 + np.exp(-np.abs(arr))),
                       np.exp(-np.abs(arr)) / (1.0 + np.exp(-np.abs(arr))))
    elif link.kind == "probit":
        out = std_normal_cdf(arr)
    elif link.kind == "cloglog":
        with np.errstate(over="ignore"):
            out = -np.expm1(-np.exp(arr))
    else:  # cauchit
        out = np.arctan(arr) / math.pi + 0.5
    return float(out) if np.ndim(eta) == 0 else np.asarray(out)


def link_inverse_derivative(link: LinkFunction, eta):
    """Derivative of the inverse link; strictly positive everywhere.

    This is the density paired with each inverse-link distribution
    function, and multiplies the predictor slope in the chain rule for
    the estimated density.
    """
    arr = np.asarray(eta, dtype=np.float64)
    if link.kind == "logit":
        e = np.exp(-np.abs(arr))
        out = e / (1.0 + e) ** 2
    elif link.kind == "probit":
        out = std_normal_pdf(arr)
    elif link.kind == "cloglog":
        with np.errstate(over="ignore"):
            out = np.exp(arr - np.exp(arr))
    else:  # cauchit
        out = 1.0 / (math.pi * (1.0 + arr * arr))
    return float(out) if np.ndim(eta) == 0 else np.asarray(out)
