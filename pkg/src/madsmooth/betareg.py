"""Maximum-likelihood beta regression with constant precision.

The response mean passes through a link onto a linear predictor; the
precision is a single free parameter.  Fitting is Fisher scoring on
(beta, log phi) with step-halving, so the log-likelihood never decreases
across accepted iterations and positivity of phi needs no constraint
handling.  Once improvements fall below float64 resolution of the
log-likelihood, a short polish phase drives the score norm down with
steps gated on gradient decrease instead.  Everything is deterministic:
refitting the same inputs is bit-reproducible.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basis import DesignMatrix
from .errors import DomainError, InsufficientData, SingularDesign
from .links import LinkFunction, link_forward, link_inverse, link_inverse_derivative
from .specfun import digamma, log_gamma, trigamma

_Y_CLAMP = 1e-10        # defensive response clamp; fbc/ties responses are interior anyway
_MU_CLAMP = 1e-12
_MAX_ITER = 500
_MAX_HALVINGS = 12
_MAX_POLISH = 30
_TOL_LOGLIK = 1e-10
_TOL_GRAD = 1e-6
_LOG_PHI_BOUNDS = (np.log(1e-8), np.log(1e12))


@dataclass(frozen=True, eq=False)
class BetaFit:
    """A fitted beta regression and its diagnostics."""

    beta: np.ndarray
    phi: float
    loglik: float
    mu_hat: np.ndarray
    eta_hat: np.ndarray
    residuals_response: np.ndarray
    residuals_link: np.ndarray
    converged: bool
    iterations: int
    loglik_trace: tuple


def beta_loglik(y, mu, phi) -> float:
    """Sum of beta log-densities in the mean/precision parametrization."""
    y = np.atleast_1d(np.asarray(y, dtype=np.float64))
    mu = np.broadcast_to(np.asarray(mu, dtype=np.float64), y.shape)
    if not phi > 0.0:
        raise DomainError("phi must be positive")
    if np.any(y <= 0.0) or np.any(y >= 1.0) or np.any(mu <= 0.0) or np.any(mu >= 1.0):
        raise DomainError("y and mu must lie strictly in (0, 1)")
    return _loglik_core(y, np.log(y), np.log1p(-y), mu, phi)


def _loglik_core(y, log_y, log1m_y, mu, phi) -> float:
    n = y.shape[0]
    a = mu * phi
    b = (1.0 - mu) * phi
    lg = log_gamma(np.concatenate([a, b, [phi]]))
    return float(n * lg[-1] - np.sum(lg[:n]) - np.sum(lg[n:2 * n])
                 + np.sum((a - 1.0) * log_y) + np.sum((b - 1.0) * log1m_y))


def score_and_information(design: DesignMatrix, y, beta, phi: float,
                          link: LinkFunction):
    """Gradient and expected information of the log-likelihood at (beta, phi).

    The gradient stacks the beta block and the phi component; the
    information matrix is symmetric positive semidefinite at interior
    points, which is what makes Fisher scoring steps ascent directions.
    """
    X = design.entries
    y = np.clip(np.asarray(y, dtype=np.float64), _Y_CLAMP, 1.0 - _Y_CLAMP)
    beta = np.asarray(beta, dtype=np.float64)
    if not phi > 0.0:
        raise DomainError("phi must be positive")
    eta = X @ beta
    mu = np.clip(link_inverse(link, eta), _MU_CLAMP, 1.0 - _MU_CLAMP)
    dmu = link_inverse_derivative(link, eta)
    y_star = np.log(y) - np.log1p(-y)
    return _score_info_core(X, y, np.log1p(-y), y_star, mu, dmu, phi)


def _score_info_core(X, y, log1m_y, y_star, mu, dmu, phi):
    n = y.shape[0]
    a = mu * phi
    b = (1.0 - mu) * phi
    packed = np.concatenate([a, b, [phi]])
    dg = digamma(packed)
    tg = trigamma(packed)
    dga, dgb, dgphi = dg[:n], dg[n:2 * n], dg[-1]
    ta, tb, tphi = tg[:n], tg[n:2 * n], tg[-1]

    resid_star = y_star - (dga - dgb)
    g_beta = phi * (X.T @ (dmu * resid_star))
    g_phi = float(np.sum(mu * resid_star + log1m_y - dgb + dgphi))
    grad = np.concatenate([g_beta, [g_phi]])

    w = (ta + tb) * dmu * dmu
    i_bb = phi * phi * (X.T @ (w[:, None] * X))
    cvec = phi * (ta * mu - tb * (1.0 - mu))
    i_bp = X.T @ (dmu * cvec)
    i_pp = float(np.sum(ta * mu * mu + tb * (1.0 - mu) ** 2) - n * tphi)

    k = X.shape[1]
    info = np.empty((k + 1, k + 1))
    info[:k, :k] = i_bb
    info[:k, k] = i_bp
    info[k, :k] = i_bp
    info[k, k] = i_pp
    return grad, info


def _initial_values(X, y, link):
    z = link_forward(link, y)
    beta, *_ = np.linalg.lstsq(X, z, rcond=None)
    eta = X @ beta
    mu = np.clip(link_inverse(link, eta), _MU_CLAMP, 1.0 - _MU_CLAMP)
    resid = z - eta
    dof = max(X.shape[0] - X.shape[1], 1)
    sigma2 = float(resid @ resid) / dof
    dmu = link_inverse_derivative(link, eta)
    var_y = np.maximum(sigma2 * dmu * dmu, 1e-12)
    phi = float(np.mean(mu * (1.0 - mu) / var_y - 1.0))
    return beta, min(max(phi, 1e-2), 1e8)


def fit(design: DesignMatrix, y, link: LinkFunction) -> BetaFit:
    """Maximize the beta log-likelihood over (beta, phi).

    Raises SingularDesign for rank-deficient designs.  Hitting the
    iteration cap is not an error: the fit comes back with
    converged=False and model selection treats it as infeasible.
    """
    X = design.entries
    y_raw = np.asarray(y, dtype=np.float64)
    if X.shape[0] != y_raw.shape[0]:
        raise DomainError("design rows must match response length")
    if X.shape[0] <= X.shape[1]:
        raise InsufficientData("need more observations than design columns")
    if np.linalg.matrix_rank(X) < X.shape[1]:
        raise SingularDesign("design matrix is rank deficient")
    y = np.clip(y_raw, _Y_CLAMP, 1.0 - _Y_CLAMP)
    log_y = np.log(y)
    log1m_y = np.log1p(-y)
    y_star = log_y - log1m_y

    def state_at(b, lphi):
        phi = float(np.exp(lphi))
        eta = X @ b
        mu = np.clip(link_inverse(link, eta), _MU_CLAMP, 1.0 - _MU_CLAMP)
        dmu = link_inverse_derivative(link, eta)
        ll = _loglik_core(y, log_y, log1m_y, mu, phi)
        grad, info = _score_info_core(X, y, log1m_y, y_star, mu, dmu, phi)
        return ll, grad, info

    def transform(grad, info, phi):
        # chain rule to the (beta, log phi) coordinates
        grad_t = grad.copy()
        grad_t[-1] *= phi
        info_t = info.copy()
        info_t[:-1, -1] *= phi
        info_t[-1, :-1] *= phi
        info_t[-1, -1] *= phi * phi
        return grad_t, info_t

    beta, phi0 = _initial_values(X, y, link)
    log_phi = float(np.log(phi0))
    ll, grad, info = state_at(beta, log_phi)
    trace = [ll]
    converged = False
    iterations = 0
    rel_delta = np.inf

    while iterations < _MAX_ITER:
        if np.max(np.abs(grad)) < _TOL_GRAD and rel_delta < _TOL_LOGLIK:
            converged = True
            break
        iterations += 1
        phi = float(np.exp(log_phi))
        grad_t, info_t = transform(grad, info, phi)
        step = _solve_step(info_t, grad_t)
        lam = 1.0
        improved = False
        for _ in range(_MAX_HALVINGS + 1):
            b_try = beta + lam * step[:-1]
            lp_try = float(np.clip(log_phi + lam * step[-1], *_LOG_PHI_BOUNDS))
            ll_try, grad_try, info_try = state_at(b_try, lp_try)
            if np.isfinite(ll_try) and ll_try >= ll:
                improved = True
                break
            lam *= 0.5
        if not improved:
            break
        rel_delta = (ll_try - ll) / (abs(ll) + 1e-10)
        beta, log_phi = b_try, lp_try
        ll, grad, info = ll_try, grad_try, info_try
        trace.append(ll)

    if not converged and rel_delta < _TOL_LOGLIK:
        # Ascent stalled at float64 resolution of the log-likelihood.
        # Polish the score down with steps gated on gradient decrease;
        # each moves the log-likelihood by at most a couple of ulps.
        beta, log_phi, ll, grad, info, polished = _polish(
            state_at, transform, beta, log_phi, ll, grad, info)
        iterations += polished
        converged = bool(np.max(np.abs(grad)) < _TOL_GRAD)

    phi = float(np.exp(log_phi))
    eta = X @ beta
    mu = np.clip(link_inverse(link, eta), _MU_CLAMP, 1.0 - _MU_CLAMP)
    if trace[-1] < ll:
        trace.append(ll)
    return BetaFit(
        beta=beta,
        phi=phi,
        loglik=ll,
        mu_hat=mu,
        eta_hat=eta,
        residuals_response=y_raw - mu,
        residuals_link=link_forward(link, y) - eta,
        converged=converged,
        iterations=iterations,
        loglik_trace=tuple(trace),
    )


def _polish(state_at, transform, beta, log_phi, ll, grad, info):
    polished = 0
    for _ in range(_MAX_POLISH):
        gnorm = float(np.max(np.abs(grad)))
        if gnorm < 0.1 * _TOL_GRAD:
            break
        phi = float(np.exp(log_phi))
        grad_t, info_t = transform(grad, info, phi)
        step = _solve_step(info_t, grad_t)
        lam = 1.0
        accepted = False
        for _ in range(_MAX_HALVINGS + 1):
            b_try = beta + lam * step[:-1]
            lp_try = float(np.clip(log_phi + lam * step[-1], *_LOG_PHI_BOUNDS))
            ll_try, grad_try, info_try = state_at(b_try, lp_try)
            if np.isfinite(ll_try) and float(np.max(np.abs(grad_try))) < gnorm:
                accepted = True
                break
            lam *= 0.5
        if not accepted:
            break
        polished += 1
        beta, log_phi = b_try, lp_try
        ll, grad, info = ll_try, grad_try, info_try
    return beta, log_phi, ll, grad, info, polished


def _solve_step(info: np.ndarray, grad: np.ndarray) -> np.ndarray:
    """Fisher step with a ridge fallback for ill-conditioned information."""
    ridge = 0.0
    eye = np.eye(info.shape[0])
    for _ in range(8):
        try:
            step = np.linalg.solve(info + ridge * eye, grad)
        except np.linalg.LinAlgError:
            step = None
        if step is not None and np.all(np.isfinite(step)):
            return step
        ridge = max(ridge * 10.0, 1e-8 * max(float(np.trace(info)) / info.shape[0], 1.0))
    return grad  # last resort: plain gradient direction