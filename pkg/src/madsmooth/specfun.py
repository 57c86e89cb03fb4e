"""Self-contained special functions used by the likelihood, links, and bands.

All functions accept scalars or numpy arrays and are safe for concurrent use.
Scalar inputs return Python floats; array inputs return float64 arrays.
"""
from __future__ import annotations

import math

import numpy as np

from .errors import DomainError, NoConvergence

_LN_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)
_SQRT2 = math.sqrt(2.0)

# Lanczos approximation, g = 7, nine terms; relative error ~ 1e-15 on gamma.
_LANCZOS_G = 7.0
_LANCZOS_C = np.array([
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
])

_CF_MAX_ITER = 200      # continued-fraction iteration cap
_QUANTILE_MAX_ITER = 100
_FPMIN = 1e-300

_erf = np.vectorize(math.erf, otypes=[np.float64])


def _asarray(x) -> tuple[np.ndarray, bool]:
    arr = np.asarray(x, dtype=np.float64)
    return arr, arr.ndim == 0


def _ret(arr: np.ndarray, scalar: bool):
    return float(arr) if scalar else arr


def log_gamma(x):
    """Natural log of the gamma function for x > 0."""
    arr, scalar = _asarray(x)
    if np.any(~(arr > 0.0)):
        raise DomainError("log_gamma requires x > 0")
    arr = np.atleast_1d(arr.copy())
    # Shift arguments below 0.5 up by one to keep the Lanczos series accurate.
    small = arr < 0.5
    adjust = np.zeros_like(arr)
    adjust[small] = -np.log(arr[small])
    arr[small] += 1.0

    z = arr - 1.0
    series = np.full_like(z, _LANCZOS_C[0])
    for k in range(1, len(_LANCZOS_C)):
        series += _LANCZOS_C[k] / (z + k)
    t = z + _LANCZOS_G + 0.5
    out = _LN_SQRT_2PI + (z + 0.5) * np.log(t) - t + np.log(series) + adjust
    return _ret(out.reshape(np.shape(x)) if not scalar else out[0], scalar)


def digamma(x):
    """Logarithmic derivative of the gamma function for x > 0.

    Every argument is shifted up by 10 so a single asymptotic series
    evaluation covers all magnitudes: psi(x) = psi(x+10) - sum 1/(x+j).
    """
    arr, scalar = _asarray(x)
    if np.any(~(arr > 0.0)):
        raise DomainError("digamma requires x > 0")
    arr = np.atleast_1d(arr)
    acc = np.zeros_like(arr)
    for j in range(10):
        acc += 1.0 / (arr + j)
    z = arr + 10.0
    inv2 = 1.0 / (z * z)
    s = (-1.0 / 12.0 + inv2 * (1.0 / 120.0 + inv2 * (-1.0 / 252.0
         + inv2 * (1.0 / 240.0 + inv2 * (-1.0 / 132.0
         + inv2 * (691.0 / 32760.0 + inv2 * (-1.0 / 12.0)))))))
    out = np.log(z) - 0.5 / z + inv2 * s - acc
    return _ret(out.reshape(np.shape(x)) if not scalar else out[0], scalar)


def trigamma(x):
    """Derivative of the digamma function for x > 0."""
    arr, scalar = _asarray(x)
    if np.any(~(arr > 0.0)):
        raise DomainError("trigamma requires x > 0")
    arr = np.atleast_1d(arr)
    acc = np.zeros_like(arr)
    for j in range(10):
        inv = 1.0 / (arr + j)
        acc += inv * inv
    z = arr + 10.0
    inv = 1.0 / z
    inv2 = inv * inv
    s = (1.0 / 6.0 + inv2 * (-1.0 / 30.0 + inv2 * (1.0 / 42.0
         + inv2 * (-1.0 / 30.0 + inv2 * (5.0 / 66.0
         + inv2 * (-691.0 / 2730.0 + inv2 * (7.0 / 6.0)))))))
    out = inv + 0.5 * inv2 + inv * inv2 * s + acc
    return _ret(out.reshape(np.shape(x)) if not scalar else out[0], scalar)


def _stirling_tail(z):
    """Correction S(z) in ln Gamma(z) = (z-1/2) ln z - z + ln(2 pi)/2 + S(z)."""
    inv = 1.0 / z
    inv2 = inv * inv
    return inv * (1.0 / 12.0 + inv2 * (-1.0 / 360.0 + inv2 * (1.0 / 1260.0)))


def _log_gamma_diff(b, a):
    """ln Gamma(b + a) - ln Gamma(b) for b >= 3000, without cancellation.

    Subtracting two log-gamma values of magnitude ~1e9 directly loses
    most of the digits of the ~1e1 result; expanding the difference
    analytically keeps every term modest.
    """
    z = a / b
    log1pz = np.log1p(z)
    return (a * (log1pz / z - 1.0) - 0.5 * log1pz + a * np.log(a + b)
            + _stirling_tail(a + b) - _stirling_tail(b))


def log_beta(p, q):
    """Log of the beta function B(p, q), stable for huge parameters."""
    p_arr = np.atleast_1d(np.asarray(p, dtype=np.float64))
    q_arr = np.atleast_1d(np.asarray(q, dtype=np.float64))
    p_b, q_b = np.broadcast_arrays(p_arr, q_arr)
    a = np.minimum(p_b, q_b)
    b = np.maximum(p_b, q_b)
    out = np.empty(a.shape)
    small = b <= 3000.0
    if small.any():
        out[small] = (log_gamma(a[small]) + log_gamma(b[small])
                      - log_gamma(a[small] + b[small]))
    if (~small).any():
        out[~small] = log_gamma(a[~small]) - _log_gamma_diff(b[~small], a[~small])
    if np.ndim(p) == 0 and np.ndim(q) == 0:
        return float(out[0])
    return out.reshape(np.broadcast_shapes(np.shape(p), np.shape(q)))


def _beta_cf(x, a, b):
    """Modified Lentz continued fraction for the incomplete beta integral.

    Valid on the lower tail; callers switch to the mirrored tail first.
    """
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = np.ones_like(x)
    d = 1.0 - qab * x / qap
    d = np.where(np.abs(d) < _FPMIN, _FPMIN, d)
    d = 1.0 / d
    h = d.copy()
    active = np.ones(x.shape, dtype=bool)
    for m in range(1, _CF_MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        d = np.where(np.abs(d) < _FPMIN, _FPMIN, d)
        c = 1.0 + aa / c
        c = np.where(np.abs(c) < _FPMIN, _FPMIN, c)
        d = 1.0 / d
        h = np.where(active, h * d * c, h)

        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        d = np.where(np.abs(d) < _FPMIN, _FPMIN, d)
        c = 1.0 + aa / c
        c = np.where(np.abs(c) < _FPMIN, _FPMIN, c)
        d = 1.0 / d
        delta = d * c
        h = np.where(active, h * delta, h)
        active &= np.abs(delta - 1.0) > 1e-15
        if not active.any():
            return h
    raise NoConvergence("incomplete beta continued fraction hit iteration cap")


# 64-point Gauss-Legendre rule (mapped to [0,1]) for the large-parameter
# incomplete beta integral (both parameters above 3000, where the
# continued fraction would need thousands of terms).
_GL_T, _GL_WT = np.polynomial.legendre.leggauss(64)
_GL_Y = 0.5 * (_GL_T + 1.0)
_GL_W = 0.5 * _GL_WT
_BIG_SHAPE = 3000.0
_BIG_CDF_ACCURACY = 1e-11


def _beta_quad(x, a, b):
    """Quadrature evaluation of I_x(a, b) for a, b > 3000.

    Integrates the density (normalized by its value at the mean) from x
    away from the bulk, then complements if the integral covered the
    upper tail.  The log of the density at the mean is assembled from
    the Stirling expansion directly: composing it from three log-gamma
    values of magnitude ~1e9 would cancel down to ~10 and lose nine
    digits.
    """
    mu = a / (a + b)
    lnmu = np.log(mu)
    lnmuc = np.log1p(-mu)
    t = np.sqrt(a * b / ((a + b) ** 2 * (a + b + 1.0)))
    upper_dir = x > mu
    xu = np.where(upper_dir,
                  np.minimum(1.0, np.maximum(mu + 10.0 * t, x + 5.0 * t)),
                  np.maximum(0.0, np.minimum(mu - 10.0 * t, x - 5.0 * t)))
    s = np.zeros_like(x)
    with np.errstate(divide="ignore"):
        for yj, wj in zip(_GL_Y, _GL_W):
            th = x + (xu - x) * yj
            s += wj * np.exp((a - 1.0) * (np.log(th) - lnmu)
                             + (b - 1.0) * (np.log1p(-th) - lnmuc))
    # (a-1) lnmu + (b-1) lnmuc - ln B(a, b), cancellation-free
    front_log = (1.5 * np.log(a + b) - 0.5 * np.log(a) - 0.5 * np.log(b)
                 - 0.5 * math.log(2.0 * math.pi)
                 - _stirling_tail(a) - _stirling_tail(b) + _stirling_tail(a + b))
    mass = np.abs(s * (xu - x)) * np.exp(front_log)
    # the integral runs from x toward the bulk: away-side mass complements
    return np.where(upper_dir, 1.0 - mass, mass)


def beta_cdf(x, p, q):
    """Regularized incomplete beta function I_x(p, q).

    Evaluated by continued fraction on whichever tail converges.  The
    switch point is (p+1)/(p+q+2), the classical criterion under which
    the fraction is guaranteed to converge quickly; switching at the
    mean p/(p+q) instead leaves extreme-shape evaluations (p near zero
    with large q, as arise in band tails) in the divergent regime.
    Both parameters above 3000 route to Gauss-Legendre quadrature, where
    the fraction would need thousands of terms.
    """
    x_arr, scalar = _asarray(x)
    p_arr = np.asarray(p, dtype=np.float64)
    q_arr = np.asarray(q, dtype=np.float64)
    if np.any(~(p_arr > 0.0)) or np.any(~(q_arr > 0.0)):
        raise DomainError("beta_cdf requires p > 0 and q > 0")
    if np.any(x_arr < 0.0) or np.any(x_arr > 1.0) or np.any(np.isnan(x_arr)):
        raise DomainError("beta_cdf requires x in [0, 1]")

    x_b, p_b, q_b = np.broadcast_arrays(x_arr, p_arr, q_arr)
    x_b = np.atleast_1d(x_b.astype(np.float64))
    p_b = np.atleast_1d(p_b.astype(np.float64))
    q_b = np.atleast_1d(q_b.astype(np.float64))

    interior = (x_b > 0.0) & (x_b < 1.0)
    out = np.where(x_b >= 1.0, 1.0, 0.0)
    big = interior & (p_b > _BIG_SHAPE) & (q_b > _BIG_SHAPE)
    if big.any():
        out[big] = _beta_quad(x_b[big], p_b[big], q_b[big])
    rest = interior & ~big
    if rest.any():
        xr, pr, qr = x_b[rest], p_b[rest], q_b[rest]
        upper = xr > (pr + 1.0) / (pr + qr + 2.0)
        xx = np.where(upper, 1.0 - xr, xr)
        aa = np.where(upper, qr, pr)
        bb = np.where(upper, pr, qr)
        front = np.exp(aa * np.log(xx) + bb * np.log1p(-xx) - log_beta(aa, bb))
        val = front * _beta_cf(xx, aa, bb) / aa
        out[rest] = np.where(upper, 1.0 - val, val)
    out = np.clip(out, 0.0, 1.0)
    return _ret(out.reshape(np.shape(x_b)) if not scalar else out.reshape(-1)[0], scalar)


def _beta_quantile_lower(u, p, q):
    """Solve beta_cdf(x, p, q) = u for u <= 0.5, elementwise.

    Newton iteration on log(CDF) = log(u) inside a maintained bracket,
    falling back to bisection whenever Newton leaves it.  Working in the
    log domain keeps convergence fast for extreme lower-tail targets,
    where the CDF decays exponentially and plain Newton crawls.
    """
    lo = np.zeros_like(u)
    hi = np.ones_like(u)
    lnB = log_beta(p, q)
    ln_u = np.log(u)
    # lanes with a huge shape parameter cannot resolve the CDF below the
    # front factor's accuracy; their densities are enormous there, so x
    # stays pinpoint sharp regardless
    big = (p > _BIG_SHAPE) | (q > _BIG_SHAPE)
    tol = np.where(big, np.maximum(1e-10 * u, _BIG_CDF_ACCURACY), 1e-12 * u)
    # Small-x expansion I_x ~ x^p / (p B(p, q)) locates deep lower-tail
    # solutions directly; below exp(-700) the quantile underflows float64
    # and the representable answer is 0.
    ln_x0 = (ln_u + np.log(p) + lnB) / p
    mean_init = np.clip(p / (p + q), 1e-6, 1.0 - 1e-6)
    x = np.where(ln_x0 < np.log(mean_init),
                 np.exp(np.maximum(ln_x0, -700.0)), mean_init)
    underflow = ln_x0 < -700.0
    x[underflow] = 0.0
    active = ~underflow
    for _ in range(_QUANTILE_MAX_ITER):
        xa, ua, pa, qa = x[active], u[active], p[active], q[active]
        F = beta_cdf(xa, pa, qa)
        f = F - ua
        now_done = np.abs(f) <= tol[active]
        now_done |= hi[active] - lo[active] <= np.spacing(hi[active])
        loa = np.where((f < 0.0), xa, lo[active])
        hia = np.where((f > 0.0), xa, hi[active])
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            pdf = np.exp((pa - 1.0) * np.log(xa) + (qa - 1.0) * np.log1p(-xa)
                         - lnB[active])
            step = xa - (np.log(F) - ln_u[active]) * F / pdf
        bad = ~np.isfinite(step) | (step <= loa) | (step >= hia) | (step == xa)
        xa = np.where(now_done, xa, np.where(bad, 0.5 * (loa + hia), step))
        x[active], lo[active], hi[active] = xa, loa, hia
        keep = ~now_done
        active[active] = keep
        if not active.any():
            break
    else:
        resid = np.abs(beta_cdf(x, p, q) - u)
        floor = np.where(big, 1e-9, 1e-15)
        if np.any(resid > np.maximum(1e-9 * u, floor)):
            raise NoConvergence("beta_quantile failed to invert the CDF")
    return x


def beta_quantile(u, p, q):
    """Inverse of beta_cdf in its first argument.

    Targets above 0.5 are solved on the mirrored distribution
    (Q(u; p, q) = 1 - Q(1-u; q, p)) so both tails invert without
    cancellation.
    """
    u_arr, scalar = _asarray(u)
    p_arr = np.asarray(p, dtype=np.float64)
    q_arr = np.asarray(q, dtype=np.float64)
    if np.any(~(p_arr > 0.0)) or np.any(~(q_arr > 0.0)):
        raise DomainError("beta_quantile requires p > 0 and q > 0")
    if np.any(u_arr <= 0.0) or np.any(u_arr >= 1.0) or np.any(np.isnan(u_arr)):
        raise DomainError("beta_quantile requires u in (0, 1)")

    u_b, p_b, q_b = np.broadcast_arrays(u_arr, p_arr, q_arr)
    shape = u_b.shape
    u_b = np.atleast_1d(u_b.astype(np.float64)).ravel()
    p_b = np.atleast_1d(p_b.astype(np.float64)).ravel()
    q_b = np.atleast_1d(q_b.astype(np.float64)).ravel()

    upper = u_b > 0.5
    uu = np.where(upper, 1.0 - u_b, u_b)   # exact for u in [0.5, 1)
    pp = np.where(upper, q_b, p_b)
    qq = np.where(upper, p_b, q_b)
    x = _beta_quantile_lower(uu, pp, qq)
    x = np.where(upper, 1.0 - x, x)
    return _ret(x.reshape(shape) if not scalar else x[0], scalar)


def std_normal_cdf(z):
    """Standard normal distribution function, via erf."""
    arr, scalar = _asarray(z)
    out = 0.5 * (1.0 + _erf(arr / _SQRT2))
    return _ret(out, scalar)


def std_normal_pdf(z):
    """Standard normal density."""
    arr, scalar = _asarray(z)
    out = np.exp(-0.5 * arr * arr) / math.sqrt(2.0 * math.pi)
    return _ret(out, scalar)


# Rational minimax approximation to the normal quantile (Acklam), refined
# below by one Newton step against the erf-based CDF.
_NQ_A = (-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
         1.383577518672690e+02, -3.066479806614716e+01, 2.506628277459239e+00)
_NQ_B = (-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
         6.680131188771972e+01, -1.328068155288572e+01)
_NQ_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
         -2.549732539343734e+00, 4.374664141464968e+00, 2.938163982698783e+00)
_NQ_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
         3.754408661907416e+00)
_NQ_SPLIT = 0.02425


def _nq_tail(r):
    s = np.sqrt(-2.0 * np.log(r))
    num = ((((_NQ_C[0] * s + _NQ_C[1]) * s + _NQ_C[2]) * s + _NQ_C[3]) * s + _NQ_C[4]) * s + _NQ_C[5]
    den = (((_NQ_D[0] * s + _NQ_D[1]) * s + _NQ_D[2]) * s + _NQ_D[3]) * s + 1.0
    return num / den


def _nq_central(u):
    t = u - 0.5
    r = t * t
    num = (((((_NQ_A[0] * r + _NQ_A[1]) * r + _NQ_A[2]) * r + _NQ_A[3]) * r + _NQ_A[4]) * r + _NQ_A[5]) * t
    den = ((((_NQ_B[0] * r + _NQ_B[1]) * r + _NQ_B[2]) * r + _NQ_B[3]) * r + _NQ_B[4]) * r + 1.0
    return num / den


def std_normal_quantile(u):
    """Inverse standard normal CDF for u in (0, 1)."""
    arr, scalar = _asarray(u)
    if np.any(arr <= 0.0) or np.any(arr >= 1.0) or np.any(np.isnan(arr)):
        raise DomainError("std_normal_quantile requires u in (0, 1)")
    arr = np.atleast_1d(arr)
    out = np.empty_like(arr)
    low = arr < _NQ_SPLIT
    high = arr > 1.0 - _NQ_SPLIT
    mid = ~(low | high)
    if low.any():
        out[low] = _nq_tail(arr[low])
    if high.any():
        out[high] = -_nq_tail(1.0 - arr[high])
    if mid.any():
        out[mid] = _nq_central(arr[mid])
    # One Newton step against the high-accuracy CDF; skip where the density
    # underflows (|z| > ~38) since the step would be 0/0.
    pdf = std_normal_pdf(out)
    safe = pdf > _FPMIN
    if np.any(safe):
        err = std_normal_cdf(out[safe]) - arr[safe]
        out[safe] -= err / pdf[safe]
    return _ret(out.reshape(np.shape(u)) if not scalar else out[0], scalar)
