"""Sample ingestion and the raw (pre-smoothing) CDF estimators.

A sample is sorted at construction and immutable afterwards.  Three
estimators of the distribution function at the order statistics are
provided:

* ``empirical_cdf``: the classical step estimator, reaching exactly 1 at
  the maximum, so it is diagnostic-only and never used as a regression
  response;
* ``fbc_cdf``: a three-point estimate built from each observation and its
  two neighbours, strictly inside (0, 1), requiring a tie-free sample;
* ``ties_cdf``: a rank-based estimate strictly inside (0, 1) that is
  well defined with or without ties.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import IO, Union

import numpy as np

from .errors import (
    DomainError,
    EmptyColumn,
    NonNumericCell,
    TiesPresent,
    TooFewPoints,
)


@dataclass(frozen=True, eq=False)
class Sample:
    """Sorted univariate observations with tie metadata."""

    values: np.ndarray
    n: int
    has_ties: bool

    @classmethod
    def from_values(cls, raw) -> "Sample":
        values = np.asarray(raw, dtype=np.float64).ravel()
        if not np.all(np.isfinite(values)):
            raise DomainError("sample values must be finite")
        if values.size < 3:
            raise TooFewPoints(f"need at least 3 observations, got {values.size}")
        values = np.sort(values)
        values.flags.writeable = False
        has_ties = bool(np.any(values[1:] == values[:-1]))
        return cls(values=values, n=int(values.size), has_ties=has_ties)

    @property
    def range(self) -> float:
        return float(self.values[-1] - self.values[0])


@dataclass(frozen=True, eq=False)
class EmpiricalCdf:
    """CDF estimates at the order statistics, one of three kinds."""

    xs: np.ndarray
    ys: np.ndarray
    estimator_kind: str  # empirical | fbc | ties

    def __post_init__(self):
        if self.xs.shape != self.ys.shape:
            raise DomainError("xs and ys must have equal length")
        if self.estimator_kind in ("fbc", "ties"):
            if np.any(self.ys <= 0.0) or np.any(self.ys >= 1.0):
                raise DomainError(f"{self.estimator_kind} values must lie strictly in (0, 1)")

    @property
    def points(self):
        return list(zip(self.xs.tolist(), self.ys.tolist()))


def load_sample(source: Union[str, IO[bytes], IO[str]], column: Union[str, int] = 0) -> Sample:
    """Read one numeric column from CSV text into a sorted Sample.

    ``source`` may be a path, a text stream, or a byte stream (decoded as
    UTF-8).  ``column`` selects by header name or 0-based index.  The
    first row counts as a header exactly when it does not parse as a
    number in the selected position.  Blank cells are skipped; any other
    non-numeric cell is an error naming the 1-based data row.
    """
    if isinstance(source, str):
        with open(source, "rb") as f:
            return load_sample(f, column)
    raw = source.read()
    text = raw.decode("utf-8") if isinstance(raw, bytes) else raw
    rows = [r for r in csv.reader(io.StringIO(text)) if any(cell.strip() for cell in r)]
    if not rows:
        raise EmptyColumn("no rows in input")

    idx: int
    if isinstance(column, int):
        idx = column
    else:
        header = [c.strip() for c in rows[0]]
        if column not in header:
            raise EmptyColumn(f"no column named {column!r}")
        idx = header.index(column)

    def cell_value(row):
        return row[idx].strip() if idx < len(row) else ""

    start = 0
    first = cell_value(rows[0])
    if first:
        try:
            float(first)
        except ValueError:
            start = 1  # header row
    if isinstance(column, str):
        start = 1

    values = []
    for i, row in enumerate(rows[start:], start=1):
        cell = cell_value(row)
        if not cell:
            continue
        try:
            v = float(cell)
        except ValueError:
            raise NonNumericCell(i, cell) from None
        if not math.isfinite(v):
            raise NonNumericCell(i, cell)
        values.append(v)

    if not values:
        raise EmptyColumn("selected column has no numeric rows")
    if len(values) < 3:
        raise TooFewPoints(f"need at least 3 observations, got {len(values)}")
    return Sample.from_values(values)


def left_mad(sample: Sample, v: float) -> float:
    """Mean shortfall below v: (1/n) * sum over x_j <= v of (v - x_j).

    Piecewise linear and convex in v; its slope between sample points is
    the empirical CDF, which is what the smoothing pipeline estimates.
    """
    if not math.isfinite(v):
        raise DomainError("v must be finite")
    x = sample.values
    k = int(np.searchsorted(x, v, side="right"))
    if k == 0:
        return 0.0
    return float((v * k - x[:k].sum()) / sample.n)


def empirical_cdf(sample: Sample) -> EmpiricalCdf:
    """Step-function estimate (count of points <= x_i) / n."""
    x = sample.values
    ys = np.searchsorted(x, x, side="right") / sample.n
    return EmpiricalCdf(xs=x.copy(), ys=ys.astype(np.float64), estimator_kind="empirical")


def fbc_cdf(sample: Sample) -> EmpiricalCdf:
    """Three-point CDF estimate for tie-free samples.

    Interior values are (3i-1)/(3n) shifted left by a third of the
    relative position of x_i between its neighbours, which keeps the
    sequence strictly increasing with steps of at least 2/(3n).  The
    endpoints are pinned at 1/n and (n-1)/n.
    """
    if sample.has_ties:
        raise TiesPresent("fbc_cdf requires a tie-free sample; use ties_cdf")
    x = sample.values
    n = sample.n
    i = np.arange(2, n, dtype=np.float64)  # interior 1-based indices
    ratio = (x[1:-1] - x[:-2]) / (x[2:] - x[:-2])
    ys = np.empty(n, dtype=np.float64)
    ys[0] = 1.0 / n
    ys[1:-1] = (3.0 * i - 1.0) / (3.0 * n) - ratio / (3.0 * n)
    ys[-1] = (n - 1.0) / n
    return EmpiricalCdf(xs=x.copy(), ys=ys, estimator_kind="fbc")


def ties_cdf(sample: Sample) -> EmpiricalCdf:
    """Rank-based CDF estimate, valid with or without ties.

    Interior values are (2i-1)/(2n); endpoints are pinned at 1/n and
    (n-1)/n, matching fbc_cdf at the boundary.
    """
    x = sample.values
    n = sample.n
    i = np.arange(2, n, dtype=np.float64)
    ys = np.empty(n, dtype=np.float64)
    ys[0] = 1.0 / n
    ys[1:-1] = (2.0 * i - 1.0) / (2.0 * n)
    ys[-1] = (n - 1.0) / n
    return EmpiricalCdf(xs=x.copy(), ys=ys, estimator_kind="ties")


def response_cdf(sample: Sample, estimator: str = "auto") -> EmpiricalCdf:
    """Pick the regression response: fbc when tie-free, ties otherwise."""
    if estimator == "auto":
        estimator = "ties" if sample.has_ties else "fbc"
    if estimator == "fbc":
        return fbc_cdf(sample)
    if estimator == "ties":
        return ties_cdf(sample)
    raise DomainError(f"unknown estimator {estimator!r}; expected fbc, ties, or auto")
