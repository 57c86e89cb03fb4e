"""Mixture generators, closed-form truths, and the study harness."""
import numpy as np
import pytest

from madsmooth.errors import BadSpec
from madsmooth.simulate import (
    STUDIES,
    MixtureSpec,
    mixture,
    run_study,
    sample_mixture,
    true_cdf,
    true_pdf,
)


class TestMixtureSpec:
    def test_weights_must_sum_to_one(self):
        with pytest.raises(BadSpec):
            mixture((0.5, "normal", 0.0, 1.0), (0.4, "normal", 1.0, 1.0))

    def test_unknown_family(self):
        with pytest.raises(BadSpec):
            mixture((1.0, "cauchy", 0.0, 1.0))

    def test_bad_scale_or_weight(self):
        with pytest.raises(BadSpec):
            mixture((1.0, "normal", 0.0, 0.0))
        with pytest.raises(BadSpec):
            mixture((-1.0, "normal", 0.0, 1.0), (2.0, "normal", 0.0, 1.0))

    def test_builtin_studies_valid(self):
        for name, (spec, default_n) in STUDIES.items():
            assert isinstance(spec, MixtureSpec)
            assert default_n >= 3


class TestSampleMixture:
    def test_standard_normal_moments(self):
        spec = mixture((1.0, "normal", 0.0, 1.0))
        s = sample_mixture(spec, 10_000, seed=1)
        assert abs(float(np.mean(s.values))) < 0.05
        assert abs(float(np.std(s.values, ddof=1)) - 1.0) < 0.05

    def test_laplace_moments(self):
        spec = mixture((1.0, "laplace", 0.0, 1.0))
        s = sample_mixture(spec, 10_000, seed=2)
        assert abs(float(np.mean(s.values))) < 0.05
        assert abs(float(np.mean(np.abs(s.values))) - 1.0) < 0.05

    def test_degenerate_weight_routes_all_draws(self):
        spec = mixture((1.0, "normal", 50.0, 0.1))
        s = sample_mixture(spec, 500, seed=3)
        assert np.all(np.abs(s.values - 50.0) < 5.0)

    def test_deterministic(self):
        spec, _ = STUDIES["study1"]
        a = sample_mixture(spec, 100, seed=7)
        b = sample_mixture(spec, 100, seed=7)
        assert a.values.tobytes() == b.values.tobytes()

    def test_seed_changes_sample(self):
        spec, _ = STUDIES["study1"]
        a = sample_mixture(spec, 100, seed=7)
        b = sample_mixture(spec, 100, seed=8)
        assert a.values.tobytes() != b.values.tobytes()

    def test_min_n(self):
        with pytest.raises(BadSpec):
            sample_mixture(STUDIES["fig1"][0], 2, seed=0)


class TestTruth:
    def test_cdf_limits(self):
        spec, _ = STUDIES["study1"]
        assert true_cdf(spec, -100.0) == pytest.approx(0.0, abs=1e-12)
        assert true_cdf(spec, 100.0) == pytest.approx(1.0, abs=1e-12)

    def test_symmetric_laplace_center(self):
        spec = mixture((1.0, "laplace", 0.0, 1.0))
        assert true_cdf(spec, 0.0) == pytest.approx(0.5, abs=1e-14)
        assert true_pdf(spec, 0.0) == pytest.approx(0.5, abs=1e-14)

    def test_pdf_is_cdf_derivative(self):
        for name in STUDIES:
            spec, _ = STUDIES[name]
            x = np.linspace(-4.0, 4.0, 81)
            h = 1e-6
            fd = (true_cdf(spec, x + h) - true_cdf(spec, x - h)) / (2 * h)
            np.testing.assert_allclose(true_pdf(spec, x), fd, atol=1e-6)

    def test_mixture_cdf_matches_empirical(self):
        """Large-sample empirical CDF approaches the closed form."""
        spec, _ = STUDIES["study2"]
        s = sample_mixture(spec, 20_000, seed=11)
        for x in (-1.0, 0.0, 1.0, 2.0):
            emp = float(np.mean(s.values <= x))
            assert emp == pytest.approx(true_cdf(spec, x), abs=0.02)


class TestRunStudy:
    def test_row_structure(self):
        report = run_study("fig1", n=20, seed=1)
        assert len(report.rows) == 5  # 4 links + kernel
        methods = [r.method for r in report.rows]
        assert methods.count("kernel") == 1

    def test_metrics_bounded(self):
        report = run_study("study1", n=60, seed=3)
        for row in report.rows:
            if row.sup_cdf_error is not None:
                assert 0.0 <= row.sup_cdf_error <= 1.0
            if row.band_coverage is not None:
                assert 0.0 <= row.band_coverage <= 1.0

    def test_reproducible(self):
        a = run_study("study1", n=50, seed=9)
        b = run_study("study1", n=50, seed=9)
        assert a == b

    def test_unknown_study(self):
        with pytest.raises(BadSpec):
            run_study("study9", n=50, seed=0)

    def test_kernel_and_beta_share_sample(self):
        """Paired comparison: consistency of the sup metric scale."""
        report = run_study("study1", n=200, seed=4)
        sups = [r.sup_cdf_error for r in report.rows if r.sup_cdf_error is not None]
        assert len(sups) >= 2
        assert max(sups) < 0.5
