"""Regression slopes, the slope-product identity, and attenuation."""

from fractions import Fraction

import numpy as np
import pytest

from manifoldcorr import (
    Dataset,
    DegenerateVariance,
    InvalidNoise,
    NoiseModel,
    attenuation_factor,
    dilution_corrected_rho_sq,
    make_rng,
    ols_fit,
    pearson,
    slope_product_identity,
)

X4 = np.array([0.0, 1.0, 2.0, 3.0])
Y4 = np.array([0.0, 1.0, 2.0, 4.0])


class TestOlsFit:
    def test_interpolating_line(self):
        x = np.array([1.0, 2.0, 3.0])
        fit = ols_fit(x, 2 * x + 1)
        assert fit.slope == pytest.approx(2.0, abs=1e-12)
        assert fit.intercept == pytest.approx(1.0, abs=1e-12)
        assert fit.sse == pytest.approx(0.0, abs=1e-24)

    def test_known_slope(self):
        # oracle: slope = cov/var = (13/8)/(5/4) = 13/10, intercept = 7/4 - 13/10 * 3/2
        slope = Fraction(13, 8) / Fraction(5, 4)
        intercept = Fraction(7, 4) - slope * Fraction(3, 2)
        resid = [Fraction(int(y)) - (slope * int(x) + intercept) for x, y in zip(X4, Y4)]
        sse = sum(r * r for r in resid)
        assert (slope, intercept, sse) == (Fraction(13, 10), Fraction(-1, 5), Fraction(3, 10))
        fit = ols_fit(X4, Y4)
        assert fit.slope == pytest.approx(1.3, abs=1e-14)
        assert fit.intercept == pytest.approx(-0.2, abs=1e-14)
        assert fit.sse == pytest.approx(0.3, abs=1e-14)

    def test_constant_response(self):
        fit = ols_fit(np.array([1.0, 2.0, 3.0]), np.array([5.0, 5.0, 5.0]))
        assert fit.slope == 0.0
        assert fit.intercept == 5.0

    def test_constant_regressor_raises(self):
        with pytest.raises(DegenerateVariance):
            ols_fit(np.array([2.0, 2.0, 2.0]), np.array([1.0, 2.0, 3.0]))

    def test_normal_equations_residual(self):
        rng = make_rng(11)
        for trial in range(100):
            n = int(rng.integers(3, 80))
            x = rng.standard_normal(n) * rng.uniform(0.5, 3)
            y = rng.standard_normal(n) * rng.uniform(0.5, 3)
            fit = ols_fit(x, y)
            r = y - (fit.slope * x + fit.intercept)
            scale = 1e-9 * max(np.linalg.norm(y), 1.0)
            assert abs(r.sum()) <= scale
            assert abs(r @ x) <= scale * max(np.linalg.norm(x), 1.0)


class TestSlopeProduct:
    def test_exact_line_reciprocal_slopes(self):
        x = np.array([0.0, 1.0, 2.0])
        bx, by, rho_sq = slope_product_identity(x, 3 * x)
        assert bx == pytest.approx(3.0, abs=1e-12)
        assert by == pytest.approx(1.0 / 3.0, abs=1e-12)
        assert rho_sq == pytest.approx(1.0, abs=1e-12)

    def test_known_values(self):
        # oracle: beta_y = (13/8)/(35/16) = 26/35, product = 13/10 * 26/35 = 169/175
        assert Fraction(13, 10) * Fraction(26, 35) == Fraction(169, 175)
        bx, by, rho_sq = slope_product_identity(X4, Y4)
        assert bx == pytest.approx(1.3, abs=1e-14)
        assert by == pytest.approx(float(Fraction(26, 35)), abs=1e-14)
        assert rho_sq == pytest.approx(float(Fraction(169, 175)), abs=1e-14)

    def test_orthogonal_design(self):
        bx, by, rho_sq = slope_product_identity(
            np.array([-1.0, 1.0, -1.0, 1.0]), np.array([-1.0, -1.0, 1.0, 1.0])
        )
        assert (bx, by, rho_sq) == (0.0, 0.0, 0.0)

    def test_identity_over_random_datasets(self):
        rng = make_rng(12)
        for trial in range(300):
            n = int(rng.integers(3, 200))
            x = rng.standard_normal(n) * rng.uniform(0.1, 5)
            y = rng.standard_normal(n) * rng.uniform(0.1, 5) + rng.uniform(-1, 1) * x
            bx, by, rho_sq = slope_product_identity(x, y)
            assert abs(bx * by - rho_sq) <= 1e-12 * max(1.0, rho_sq)
            assert -1e-12 <= bx * by <= 1 + 1e-12

    def test_matches_pearson_squared(self):
        rng = make_rng(13)
        x = rng.standard_normal(50)
        y = 0.7 * x + 0.3 * rng.standard_normal(50)
        _, _, rho_sq = slope_product_identity(x, y)
        p = pearson(Dataset(np.column_stack([x, y])), 0, 1)
        assert rho_sq == pytest.approx(p * p, abs=1e-14)


class TestAttenuation:
    @pytest.mark.parametrize(
        "sigma_sq,eta_sq,expected",
        [(4.0, 0.0, 1.0), (4.0, 4.0, 0.0), (5.0, 1.0, 0.8)],
    )
    def test_values(self, sigma_sq, eta_sq, expected):
        assert attenuation_factor(sigma_sq, eta_sq) == pytest.approx(expected, abs=1e-15)

    def test_noise_exceeding_variance(self):
        with pytest.raises(InvalidNoise):
            attenuation_factor(1.0, 1.5)

    def test_strictly_decreasing_in_noise(self):
        etas = np.linspace(0.0, 3.0, 50)
        factors = [attenuation_factor(3.0, e) for e in etas]
        assert np.all(np.diff(factors) < 0)

    def test_negative_noise_rejected(self):
        with pytest.raises(InvalidNoise):
            attenuation_factor(1.0, -0.1)


class TestDilutionCorrection:
    def test_zero_noise_gives_one(self):
        x = np.array([0.0, 1.0, 2.0, 5.0])
        assert dilution_corrected_rho_sq(x, 2 * x, NoiseModel(0.0, 0.0)) == 1.0

    def test_exact_variances(self):
        # columns engineered to have sample variances exactly 2 and 4
        s2 = np.sqrt(2.0)
        x = np.array([-s2, -s2, s2, s2])
        y = np.array([-2.0, 2.0, -2.0, 2.0])
        got = dilution_corrected_rho_sq(x, y, NoiseModel(1.0, 1.0))
        assert got == pytest.approx(0.5 * 0.75, abs=1e-15)

    def test_invalid_noise_propagates(self):
        x = np.array([0.0, 1.0, 2.0])
        with pytest.raises(InvalidNoise):
            dilution_corrected_rho_sq(x, x + 1, NoiseModel(100.0, 0.0))
