"""Design matrices: standardized polynomial powers and B-spline bases.

Both bases carry exact derivative columns so the monotonicity constraint
and the density can be evaluated without numerical differentiation.
Evaluation outside the sample range continues each basis polynomially,
which is the natural extension for both kinds.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import (
    DegreeOutOfRange,
    DimensionOutOfRange,
    InsufficientData,
    ZeroSpread,
)
from .sample import Sample

POLY_DIM_RANGE = (2, 7)
SPLINE_DIM_RANGE = (2, 12)


@dataclass(frozen=True, eq=False)
class BasisSpec:
    """Everything needed to rebuild basis rows at new x values."""

    kind: str                 # "polynomial" | "bspline"
    dimension: int            # m for polynomial, k for spline columns
    center: float
    scale: float
    knots: Optional[np.ndarray] = None  # full clamped knot vector (spline only)

    @property
    def standardization(self) -> tuple[float, float]:
        return (self.center, self.scale)


@dataclass(frozen=True, eq=False)
class DesignMatrix:
    """Rows of basis values and of their x-derivatives.

    The first column is the intercept; its derivative column is zero.
    """

    entries: np.ndarray
    derivative_entries: np.ndarray

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]


def standardize(sample: Sample) -> tuple[float, float]:
    """Sample mean and standard deviation (n-1 denominator)."""
    if sample.n < 2:
        raise InsufficientData("standardize needs at least 2 observations")
    center = float(np.mean(sample.values))
    scale = float(np.std(sample.values, ddof=1))
    if scale == 0.0:
        raise ZeroSpread("all observations are equal")
    return center, scale


def _poly_rows(x: np.ndarray, m: int, center: float, scale: float):
    z = (np.asarray(x, dtype=np.float64) - center) / scale
    n = z.shape[0]
    X = np.ones((n, m + 1))
    dX = np.zeros((n, m + 1))
    for j in range(1, m + 1):
        X[:, j] = z ** j
        dX[:, j] = (j / scale) * z ** (j - 1)
    return X, dX


def polynomial_design(sample: Sample, m: int,
                      standardization: Optional[tuple[float, float]] = None,
                      ) -> tuple[DesignMatrix, BasisSpec]:
    """Powers 1..m of the standardized observation, plus intercept.

    Standardizing before raising to powers keeps degree-7 columns
    numerically workable; predictions are unchanged by it.
    """
    if not (POLY_DIM_RANGE[0] <= m <= POLY_DIM_RANGE[1]):
        raise DegreeOutOfRange(f"polynomial degree must lie in {POLY_DIM_RANGE}, got {m}")
    center, scale = standardization if standardization is not None else standardize(sample)
    if scale <= 0.0:
        raise ZeroSpread("scale must be positive")
    X, dX = _poly_rows(sample.values, m, center, scale)
    spec = BasisSpec(kind="polynomial", dimension=m, center=center, scale=scale)
    return DesignMatrix(entries=X, derivative_entries=dX), spec


def _bspline_knots(a: float, b: float, n_funcs: int, order: int) -> np.ndarray:
    n_interior = n_funcs - order
    interior = np.linspace(a, b, n_interior + 2)[1:-1]
    return np.concatenate([np.full(order, a), interior, np.full(order, b)])


def bspline_all(t: np.ndarray, degree: int, x: np.ndarray) -> np.ndarray:
    """Values of every B-spline basis function on knots t at points x.

    Points outside [t[degree], t[-degree-1]] are evaluated on the
    polynomial extension of the boundary segment.
    """
    return _bspline_eval(t, degree, np.asarray(x, dtype=np.float64))


def bspline_all_deriv(t: np.ndarray, degree: int, x: np.ndarray) -> np.ndarray:
    """First derivatives of every basis function on knots t at points x.

    Uses the derivative recurrence: B'_{i,d} = d * (B_{i,d-1}/(t_{i+d}-t_i)
    - B_{i+1,d-1}/(t_{i+d+1}-t_{i+1})), dropping terms with zero
    denominator.
    """
    x = np.asarray(x, dtype=np.float64)
    n_funcs = len(t) - degree - 1
    if degree == 0:
        return np.zeros((x.shape[0], n_funcs))
    lower = _bspline_eval(t, degree - 1, x, clamp_degree=degree)
    out = np.zeros((x.shape[0], n_funcs))
    for i in range(n_funcs):
        d1 = t[i + degree] - t[i]
        d2 = t[i + degree + 1] - t[i + 1]
        if d1 > 0:
            out[:, i] += degree * lower[:, i] / d1
        if d2 > 0:
            out[:, i] -= degree * lower[:, i + 1] / d2
    return out


def _bspline_eval(t: np.ndarray, degree: int, x: np.ndarray,
                  clamp_degree: Optional[int] = None) -> np.ndarray:
    """Vectorized de Boor triangle over the active window of each point.

    ``clamp_degree`` bounds the segment search to the nonempty segments
    of the full-order knot vector; the derivative recurrence passes it
    when evaluating one degree down on the same knots, so extrapolation
    points never land on an empty boundary segment.
    """
    t = np.asarray(t, dtype=np.float64)
    n_funcs = len(t) - degree - 1
    npts = x.shape[0]
    cd = degree if clamp_degree is None else clamp_degree
    j = np.searchsorted(t, x, side="right") - 1
    j = np.clip(j, cd, len(t) - cd - 2)

    # triangle: N[:, 0] = 1, grown to degree+1 active values per point
    N = np.zeros((npts, degree + 1))
    N[:, 0] = 1.0
    for r in range(1, degree + 1):
        saved = np.zeros(npts)
        for k in range(r):
            t_right = t[j + k + 1]
            t_left = t[j + k - r + 1]
            denom = t_right - t_left
            with np.errstate(invalid="ignore", divide="ignore"):
                temp = np.where(denom > 0, N[:, k] / np.where(denom > 0, denom, 1.0), 0.0)
            N[:, k] = saved + (t_right - x) * temp
            saved = (x - t_left) * temp
        N[:, r] = saved

    out = np.zeros((npts, n_funcs))
    cols = j[:, None] - degree + np.arange(degree + 1)[None, :]
    valid = (cols >= 0) & (cols < n_funcs)
    rows = np.broadcast_to(np.arange(npts)[:, None], cols.shape)
    out[rows[valid], cols[valid]] = N[valid]
    return out


def bspline_design(sample: Sample, k: int) -> tuple[DesignMatrix, BasisSpec]:
    """B-spline basis with k columns beyond the intercept.

    Built as k+1 clamped basis functions (cubic when k >= 3, order k+1
    below that) on equally spaced knots over the sample range; the first
    function is dropped since the full basis sums to one and would be
    collinear with the intercept.  The spanned model space is the
    complete spline space of dimension k+1.
    """
    if not (SPLINE_DIM_RANGE[0] <= k <= SPLINE_DIM_RANGE[1]):
        raise DimensionOutOfRange(f"spline dimension must lie in {SPLINE_DIM_RANGE}, got {k}")
    if sample.n < k + 2:
        raise InsufficientData(f"need n >= {k + 2} observations for k = {k}")
    a, b = float(sample.values[0]), float(sample.values[-1])
    if not b > a:
        raise ZeroSpread("all observations are equal")
    order = min(4, k + 1)
    knots = _bspline_knots(a, b, k + 1, order)
    spec = BasisSpec(kind="bspline", dimension=k, center=0.0, scale=1.0, knots=knots)
    X, dX = evaluate_basis(spec, sample.values)
    return DesignMatrix(entries=X, derivative_entries=dX), spec


def evaluate_basis(spec: BasisSpec, x) -> tuple[np.ndarray, np.ndarray]:
    """Basis rows and derivative rows at arbitrary points."""
    x = np.atleast_1d(np.asarray(x, dtype=np.float64))
    if spec.kind == "polynomial":
        return _poly_rows(x, spec.dimension, spec.center, spec.scale)
    t = spec.knots
    degree = len(t) - (spec.dimension + 1) - 1
    B = bspline_all(t, degree, x)
    dB = bspline_all_deriv(t, degree, x)
    n = x.shape[0]
    X = np.hstack([np.ones((n, 1)), B[:, 1:]])
    dX = np.hstack([np.zeros((n, 1)), dB[:, 1:]])
    return X, dX
