"""Straight-line least squares and the attenuation correction.

The slope of the regression of y on x is Cov(x, y) / Var(x); the product
of the two opposite-direction slopes equals the squared correlation, and
correcting each slope for known error variance in its regressor yields
the noise-corrected squared correlation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import Dataset
from .errors import DegenerateVariance, InvalidNoise
from .stats import compute_moments, pearson


@dataclass(frozen=True)
class RegressionFit:
    slope: float
    intercept: float
    sse: float


@dataclass(frozen=True)
class NoiseModel:
    """Known error variances of the two observed variables."""

    eta_x_sq: float
    eta_y_sq: float

    def __post_init__(self):
        if self.eta_x_sq < 0 or self.eta_y_sq < 0:
            raise ValueError("error variances must be non-negative")


def _two_column(x, y) -> Dataset:
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.ndim != 1 or y.ndim != 1 or x.shape != y.shape:
        raise ValueError("x and y must be 1-d vectors of equal length")
    return Dataset(np.column_stack([x, y]), ("x", "y"))


def ols_fit(x, y) -> RegressionFit:
    """Least squares line of y on x: slope = Cov(x, y) / Var(x)."""
    data = _two_column(x, y)
    m = compute_moments(data)
    if m.variance[0] <= 0.0:
        raise DegenerateVariance("x")
    slope = float(m.covariance[0, 1] / m.variance[0])
    intercept = float(m.mean[1] - slope * m.mean[0])
    resid = data.values[:, 1] - (slope * data.values[:, 0] + intercept)
    return RegressionFit(slope=slope, intercept=intercept, sse=float(resid @ resid))


def slope_product_identity(x, y) -> tuple[float, float, float]:
    """Both regression slopes and the squared correlation they multiply to.

    Returns (beta_x, beta_y, rho_sq) with rho_sq computed independently as
    pearson**2; the product beta_x * beta_y matches it to ~1e-15 relative.
    """
    data = _two_column(x, y)
    m = compute_moments(data)
    for idx, name in ((0, "x"), (1, "y")):
        if m.variance[idx] <= 0.0:
            raise DegenerateVariance(name)
    beta_x = float(m.covariance[0, 1] / m.variance[0])
    beta_y = float(m.covariance[0, 1] / m.variance[1])
    rho = pearson(data, 0, 1, moments=m)
    return beta_x, beta_y, rho * rho


def attenuation_factor(sigma_sq: float, eta_sq: float) -> float:
    """Slope shrinkage factor 1 - eta_sq / sigma_sq for a noisy regressor."""
    if sigma_sq <= 0.0:
        raise DegenerateVariance("sigma_sq")
    if eta_sq < 0.0:
        raise InvalidNoise(f"noise variance must be non-negative, got {eta_sq}")
    if eta_sq > sigma_sq:
        raise InvalidNoise(
            f"noise variance {eta_sq} exceeds total variance {sigma_sq}"
        )
    return 1.0 - eta_sq / sigma_sq


def dilution_corrected_rho_sq(x, y, noise: NoiseModel) -> float:
    """Asymptotic squared correlation under known measurement error.

    The product of the two attenuation factors, evaluated with sample
    variances: (1 - eta_x^2/var(x)) * (1 - eta_y^2/var(y)).
    """
    data = _two_column(x, y)
    m = compute_moments(data)
    for idx, name in ((0, "x"), (1, "y")):
        if m.variance[idx] <= 0.0:
            raise DegenerateVariance(name)
    fx = attenuation_factor(float(m.variance[0]), noise.eta_x_sq)
    fy = attenuation_factor(float(m.variance[1]), noise.eta_y_sq)
    return fx * fy
