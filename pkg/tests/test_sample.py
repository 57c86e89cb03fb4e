"""Sample loading and the three raw CDF estimators."""
import io
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from madsmooth.errors import (
    DomainError,
    EmptyColumn,
    NonNumericCell,
    TiesPresent,
    TooFewPoints,
)
from madsmooth.sample import (
    Sample,
    empirical_cdf,
    fbc_cdf,
    left_mad,
    load_sample,
    response_cdf,
    ties_cdf,
)


def make(values):
    return Sample.from_values(values)


class TestLoadSample:
    def test_sorts(self):
        s = load_sample(io.BytesIO(b"x\n3\n1\n2\n"), "x")
        assert s.n == 3 and not s.has_ties
        np.testing.assert_array_equal(s.values, [1.0, 2.0, 3.0])

    def test_detects_ties(self):
        s = load_sample(io.BytesIO(b"x\n1\n1\n2\n"), "x")
        assert s.has_ties

    def test_non_numeric_cell_reports_row(self):
        with pytest.raises(NonNumericCell) as exc:
            load_sample(io.BytesIO(b"x\nfoo\n2\n3\n"), "x")
        assert exc.value.row == 1

    def test_nan_cell_rejected(self):
        with pytest.raises(NonNumericCell):
            load_sample(io.BytesIO(b"x\n1\nnan\n3\n"), "x")

    def test_headerless_by_index(self):
        s = load_sample(io.BytesIO(b"5\n4\n6\n"), 0)
        np.testing.assert_array_equal(s.values, [4.0, 5.0, 6.0])

    def test_blank_cells_skipped(self):
        s = load_sample(io.BytesIO(b"x,y\n1,9\n,8\n2,7\n3,6\n"), "x")
        assert s.n == 3

    def test_empty_column(self):
        with pytest.raises(EmptyColumn):
            load_sample(io.BytesIO(b"x\n\n\n"), "x")

    def test_missing_named_column(self):
        with pytest.raises(EmptyColumn):
            load_sample(io.BytesIO(b"x\n1\n2\n3\n"), "z")

    def test_too_few_points(self):
        with pytest.raises(TooFewPoints):
            load_sample(io.BytesIO(b"x\n1\n2\n"), "x")


class TestSample:
    def test_rejects_nonfinite(self):
        with pytest.raises(DomainError):
            make([1.0, np.nan, 2.0])
        with pytest.raises(DomainError):
            make([1.0, np.inf, 2.0])

    def test_immutable(self):
        s = make([3, 1, 2])
        with pytest.raises(ValueError):
            s.values[0] = 99.0


class TestLeftMad:
    def test_direct_sum(self):
        s = make([1.0, 2.0, 3.0])
        # (1/3)((3-1)+(3-2)+(3-3))
        assert left_mad(s, 3.0) == pytest.approx(1.0, abs=1e-15)

    def test_below_min_is_zero(self):
        s = make([1.0, 2.0, 3.0])
        assert left_mad(s, 0.5) == 0.0

    def test_at_min_is_zero(self):
        s = make([1.0, 2.0, 3.0])
        assert left_mad(s, 1.0) == 0.0

    def test_matches_bruteforce(self):
        rng = np.random.default_rng(21)
        x = rng.normal(size=40)
        s = make(x)
        for v in np.linspace(x.min() - 1, x.max() + 1, 50):
            brute = np.mean(np.where(x <= v, v - x, 0.0))
            assert left_mad(s, v) == pytest.approx(float(brute), abs=1e-12)

    def test_nondecreasing_and_convex(self):
        rng = np.random.default_rng(8)
        s = make(rng.normal(size=60))
        v = np.linspace(s.values[0] - 1, s.values[-1] + 1, 400)
        vals = np.array([left_mad(s, vi) for vi in v])
        assert np.all(np.diff(vals) >= -1e-12)
        assert np.all(np.diff(vals, 2) >= -1e-12)

    def test_forward_difference_recovers_empirical_cdf(self):
        """The slope between consecutive order statistics is the
        empirical CDF at the left point."""
        rng = np.random.default_rng(13)
        x = np.sort(rng.normal(size=50))
        s = make(x)
        emp = empirical_cdf(s).ys
        for i in range(s.n - 1):
            slope = (left_mad(s, x[i + 1]) - left_mad(s, x[i])) / (x[i + 1] - x[i])
            assert slope == pytest.approx(emp[i], abs=1e-9)

    def test_domain(self):
        with pytest.raises(DomainError):
            left_mad(make([1, 2, 3]), np.nan)


class TestEmpiricalCdf:
    def test_distinct(self):
        ys = empirical_cdf(make([1, 2, 3, 4])).ys
        np.testing.assert_allclose(ys, [0.25, 0.5, 0.75, 1.0])

    def test_first_order_statistic(self):
        assert empirical_cdf(make([1, 2, 3, 4])).ys[0] == pytest.approx(0.25)

    def test_with_ties(self):
        ys = empirical_cdf(make([1, 1, 2])).ys
        np.testing.assert_allclose(ys, [2 / 3, 2 / 3, 1.0])


class TestFbcCdf:
    def test_interior_formula(self):
        # exact rational arithmetic oracle for n=4, i=2
        n = 4
        expected = Fraction(3 * 2 - 1, 3 * n) - Fraction(1, 3 * n) * Fraction(2 - 1, 3 - 1)
        ys = fbc_cdf(make([1.0, 2.0, 3.0, 4.0])).ys
        assert ys[1] == pytest.approx(float(expected), abs=1e-15)
        assert float(expected) == 0.375

    def test_boundaries(self):
        ys = fbc_cdf(make([1.0, 2.0, 3.0, 4.0])).ys
        assert ys[0] == pytest.approx(0.25, abs=1e-15)
        assert ys[-1] == pytest.approx(0.75, abs=1e-15)

    def test_equally_spaced_midpoint(self):
        ys = fbc_cdf(make([0.0, 1.0, 2.0, 3.0, 4.0])).ys
        assert ys[2] == pytest.approx(0.5, abs=1e-15)

    def test_rejects_ties(self):
        with pytest.raises(TiesPresent):
            fbc_cdf(make([1.0, 1.0, 2.0]))

    def test_strictly_increasing_random_samples(self):
        """Provable step margins: 2/(3n) between interior points, 1/(3n)
        at the two boundary steps (the pinned endpoints shrink those)."""
        rng = np.random.default_rng(99)
        for _ in range(1000):
            n = int(rng.integers(3, 40))
            x = rng.normal(size=n)
            while len(np.unique(x)) < n:
                x = rng.normal(size=n)
            ys = fbc_cdf(make(x)).ys
            d = np.diff(ys)
            assert np.all(d >= 1.0 / (3.0 * n) - 1e-12)
            assert np.all(d[1:-1] >= 2.0 / (3.0 * n) - 1e-12)
            assert np.all((ys > 0) & (ys < 1))

    def test_close_to_empirical(self):
        rng = np.random.default_rng(4)
        for _ in range(50):
            x = rng.normal(size=int(rng.integers(3, 60)))
            s = make(x)
            emp = empirical_cdf(s).ys
            for est in (fbc_cdf(s).ys, ties_cdf(s).ys):
                assert np.max(np.abs(est - emp)) <= 1.0 / s.n + 1e-12


class TestTiesCdf:
    def test_interior_values(self):
        ys = ties_cdf(make([1.0, 2.0, 3.0, 4.0])).ys
        assert ys[1] == pytest.approx(3 / 8, abs=1e-15)
        assert ys[2] == pytest.approx(5 / 8, abs=1e-15)

    def test_boundaries(self):
        ys = ties_cdf(make([1.0, 2.0, 3.0, 4.0])).ys
        assert ys[0] == pytest.approx(0.25, abs=1e-15)
        assert ys[-1] == pytest.approx(0.75, abs=1e-15)

    def test_n10_i5(self):
        ys = ties_cdf(make(np.arange(10.0))).ys
        assert ys[4] == pytest.approx(9 / 20, abs=1e-15)

    def test_works_with_ties(self):
        ys = ties_cdf(make([1.0, 1.0, 2.0, 5.0])).ys
        assert np.all((ys > 0) & (ys < 1))
        assert np.all(np.diff(ys) >= 0)

    @settings(max_examples=100, deadline=None)
    @given(st.integers(min_value=3, max_value=200))
    def test_open_interval_any_n(self, n):
        ys = ties_cdf(make(np.arange(float(n)))).ys
        assert np.all((ys > 0) & (ys < 1))
        assert np.all(np.diff(ys) > 0)


class TestResponseRouting:
    def test_auto_prefers_fbc(self):
        assert response_cdf(make([1, 2, 3])).estimator_kind == "fbc"

    def test_auto_falls_back_on_ties(self):
        assert response_cdf(make([1, 1, 3])).estimator_kind == "ties"

    def test_explicit_override(self):
        assert response_cdf(make([1, 2, 3]), "ties").estimator_kind == "ties"
        with pytest.raises(TiesPresent):
            response_cdf(make([1, 1, 3]), "fbc")
