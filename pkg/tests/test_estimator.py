"""Smooth estimator surface: isotonic projection, CDF/PDF evaluation,
bands, and mode detection."""
import numpy as np
import pytest
from scipy.optimize import brentq

from madsmooth.basis import BasisSpec
from madsmooth.betareg import BetaFit
from madsmooth.errors import DimensionMismatch, DomainError
from madsmooth.estimator import (
    BandResult,
    EvaluationGrid,
    ModeReport,
    cdf_eval,
    find_modes,
    make_grid,
    pdf_eval,
    pointwise_band,
)
from madsmooth.isotonic import isotonize
from madsmooth.links import get_link
from madsmooth.sample import Sample
from madsmooth.selection import SelectedModel


def bounded_isotonic_oracle(y, w, lo, hi):
    """Exact brute force: enumerate consecutive-block partitions, set each
    block to its clipped weighted mean, keep the cheapest nondecreasing
    candidate.  The true projection's block structure is always among the
    partitions, so the minimum is the exact solution."""
    y = np.asarray(y, dtype=float)
    w = np.asarray(w, dtype=float)
    n = len(y)
    best_cost, best_v = np.inf, None
    for mask in range(1 << (n - 1)):
        bounds_idx = [0]
        for i in range(n - 1):
            if (mask >> i) & 1:
                bounds_idx.append(i + 1)
        bounds_idx.append(n)
        vals = []
        for a, b in zip(bounds_idx[:-1], bounds_idx[1:]):
            m = float(np.average(y[a:b], weights=w[a:b]))
            vals.append(min(max(m, lo), hi))
        if any(v2 < v1 for v1, v2 in zip(vals, vals[1:])):
            continue
        v = np.concatenate([np.full(b - a, val) for (a, b), val in
                            zip(zip(bounds_idx[:-1], bounds_idx[1:]), vals)])
        cost = float(np.sum(w * (v - y) ** 2))
        if cost < best_cost:
            best_cost, best_v = cost, v
    return best_v


def synthetic_model(beta, link_name="logit", phi=2.0, n=20):
    """A hand-assembled model: polynomial basis in raw coordinates."""
    beta = np.asarray(beta, dtype=float)
    spec = BasisSpec(kind="polynomial", dimension=max(len(beta) - 1, 2),
                     center=0.0, scale=1.0)
    beta_full = np.zeros(spec.dimension + 1)
    beta_full[:len(beta)] = beta
    f = BetaFit(beta=beta_full, phi=phi, loglik=0.0,
                mu_hat=np.full(n, 0.5), eta_hat=np.zeros(n),
                residuals_response=np.zeros(n), residuals_link=np.zeros(n),
                converged=True, iterations=1, loglik_trace=(0.0,))
    return SelectedModel(basis=spec, fit=f, link=get_link(link_name),
                         errR=0.0, candidates=(),
                         constraint_grid=np.linspace(-1, 1, 512))


class TestIsotonize:
    def test_monotone_unchanged(self):
        v = np.array([0.1, 0.5, 0.9])
        np.testing.assert_array_equal(isotonize(v), v)

    def test_single_violation_pools(self):
        np.testing.assert_allclose(isotonize([0.6, 0.4]), [0.5, 0.5])

    def test_bound_clipping(self):
        np.testing.assert_allclose(isotonize([-0.2, 0.1]), [0.0, 0.1])

    def test_idempotent_exact(self):
        rng = np.random.default_rng(6)
        for _ in range(200):
            v = rng.uniform(-0.3, 1.3, size=int(rng.integers(2, 12)))
            once = isotonize(v)
            twice = isotonize(once)
            np.testing.assert_array_equal(once, twice)

    def test_matches_bruteforce_oracle(self):
        rng = np.random.default_rng(31)
        for _ in range(300):
            n = int(rng.integers(2, 9))
            y = rng.choice(np.round(np.arange(-0.2, 1.25, 0.1), 10), size=n)
            w = rng.uniform(0.2, 3.0, size=n) if rng.random() < 0.5 else np.ones(n)
            mine = isotonize(y, w, 0.0, 1.0)
            ref = bounded_isotonic_oracle(y, w, 0.0, 1.0)
            np.testing.assert_allclose(mine, ref, atol=1e-6)

    def test_weighted_pooling(self):
        # weights tilt the pooled value toward the heavier observation
        out = isotonize([0.8, 0.2], weights=[3.0, 1.0])
        np.testing.assert_allclose(out, [0.65, 0.65])

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            isotonize([0.1, 0.2], weights=[1.0])

    def test_bad_weights_and_bounds(self):
        with pytest.raises(DomainError):
            isotonize([0.1], weights=[0.0])
        with pytest.raises(DomainError):
            isotonize([0.1], lower_bound=1.0, upper_bound=0.0)


class TestGrid:
    def test_padding(self, normal_model):
        sample, _ = normal_model
        g = make_grid(sample, 1001)
        pad = 0.05 * sample.range
        assert g.points[0] == pytest.approx(sample.values[0] - pad)
        assert g.points[-1] == pytest.approx(sample.values[-1] + pad)
        assert g.size == 1001

    def test_minimum_size_enforced(self, normal_model):
        sample, _ = normal_model
        with pytest.raises(DomainError):
            make_grid(sample, 100)
        with pytest.raises(DomainError):
            EvaluationGrid(points=np.array([0.0, 1.0]))


class TestCdfPdfEval:
    def test_logit_zero_predictor(self):
        model = synthetic_model([0.0, 1.0])
        assert cdf_eval(model, 0.0) == pytest.approx(0.5, abs=1e-12)

    def test_cauchit_unit_predictor(self):
        model = synthetic_model([0.0, 1.0], link_name="cauchit")
        assert cdf_eval(model, 1.0) == pytest.approx(0.75, abs=1e-12)

    def test_fitted_zero_crossing(self, normal_model):
        """Root of the fitted predictor maps to CDF one half."""
        sample, model = normal_model
        eta = lambda x: float(np.dot(
            np.r_[1.0, [((x - model.basis.center) / model.basis.scale) ** j
                        for j in range(1, model.basis.dimension + 1)]],
            model.fit.beta))
        x_star = brentq(eta, sample.values[0], sample.values[-1])
        assert cdf_eval(model, x_star) == pytest.approx(0.5, abs=1e-10)

    def test_zero_slope_gives_zero_density(self):
        model = synthetic_model([0.3])  # constant predictor
        assert pdf_eval(model, 0.7) == pytest.approx(0.0, abs=1e-15)

    def test_logit_closed_form(self):
        model = synthetic_model([0.0, 2.0])  # eta = 2x, slope 2
        assert pdf_eval(model, 0.0) == pytest.approx(0.5, abs=1e-12)

    def test_monotone_cdf_on_grid(self, normal_model):
        sample, model = normal_model
        g = make_grid(sample)
        vals = cdf_eval(model, g.points)
        assert np.all(np.diff(vals) >= -1e-12)

    def test_pdf_matches_cdf_derivative(self, normal_model):
        sample, model = normal_model
        g = make_grid(sample, 512)
        h = 1e-5
        fd = (cdf_eval(model, g.points + h) - cdf_eval(model, g.points - h)) / (2 * h)
        np.testing.assert_allclose(pdf_eval(model, g.points), fd, atol=1e-6)

    def test_conservation(self, normal_model):
        sample, model = normal_model
        g = make_grid(sample)
        pdf = pdf_eval(model, g.points)
        integral = np.trapezoid(pdf, g.points)
        span = cdf_eval(model, g.points[-1]) - cdf_eval(model, g.points[0])
        assert integral == pytest.approx(span, abs=1e-3)


class TestPointwiseBand:
    def test_alpha_per_test_division(self):
        model = synthetic_model([0.0, 1.0], n=20)
        band = pointwise_band(model, np.linspace(-1, 1, 11), alpha_family=0.05)
        assert band.alpha_per_test == pytest.approx(0.05 / 20)

    def test_uniform_shapes_closed_form(self):
        """mu=1/2 with phi=2 gives Beta(1,1): quantiles are the levels."""
        model = synthetic_model([0.0, 1.0], phi=2.0, n=20)
        band = pointwise_band(model, np.array([0.0]), alpha_family=0.05)
        assert band.cdf[0] == pytest.approx(0.5, abs=1e-12)
        assert band.lower[0] == pytest.approx(0.0025, abs=1e-10)
        assert band.upper[0] == pytest.approx(0.9975, abs=1e-10)

    def test_ordering_and_monotone_cdf(self, normal_model):
        sample, model = normal_model
        band = pointwise_band(model, make_grid(sample), alpha_family=0.05)
        assert np.all(band.lower <= band.cdf + 1e-12)
        assert np.all(band.cdf <= band.upper + 1e-12)
        assert np.all(np.diff(band.cdf) >= 0)
        assert np.all((band.lower >= 0) & (band.upper <= 1))

    def test_width_shrinks_with_alpha(self, normal_model):
        sample, model = normal_model
        pts = np.linspace(sample.values[10], sample.values[-10], 21)
        wide = pointwise_band(model, pts, alpha_family=0.01)
        narrow = pointwise_band(model, pts, alpha_family=0.20)
        assert np.all(narrow.upper - narrow.lower <= wide.upper - wide.lower + 1e-12)

    def test_alpha_domain(self, normal_model):
        _, model = normal_model
        with pytest.raises(DomainError):
            pointwise_band(model, np.array([0.0]), alpha_family=0.0)


class TestFindModes:
    def test_single_mode_normal(self, normal_model):
        sample, model = normal_model
        report = find_modes(model, make_grid(sample))
        assert not report.flagged_monotone
        assert abs(report.global_mode) <= 0.3
        assert report.density_at_modes[0] == max(report.density_at_modes)

    def test_monotone_density_flagged(self):
        # cauchit with eta = x on a grid left of zero: density increasing
        model = synthetic_model([0.0, 1.0], link_name="cauchit")
        report = find_modes(model, np.linspace(-6.0, -1.0, 512))
        assert report.flagged_monotone
        assert report.global_mode == pytest.approx(-1.0)
        assert report.local_modes.size == 0

    def test_golden_section_refinement(self):
        """Logistic density peaks exactly where the predictor crosses zero."""
        model = synthetic_model([0.4, 1.0])  # eta = 0.4 + x, peak at -0.4
        report = find_modes(model, np.linspace(-4.0, 4.0, 513))
        assert report.global_mode == pytest.approx(-0.4, abs=1e-6)
