"""Sample moments and the classical product-moment correlation.

Variances and covariances use the 1/n normalization throughout the
package. Accumulation is two-pass (means first, then centered products),
which keeps the slope-product identity tight to ~1e-15 relative.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import Dataset
from .errors import DegenerateVariance


@dataclass(frozen=True)
class MomentSummary:
    """Per-column means/variances and the full covariance matrix (1/n)."""

    mean: np.ndarray
    variance: np.ndarray
    covariance: np.ndarray

    def __post_init__(self):
        cov = self.covariance
        if not np.array_equal(cov, cov.T):
            raise ValueError("covariance matrix must be exactly symmetric")
        if not np.array_equal(np.diagonal(cov), self.variance):
            raise ValueError("covariance diagonal must equal the variance vector")
        if np.any(self.variance < 0):
            raise ValueError("negative variance")
        scale = np.max(np.abs(cov)) if cov.size else 0.0
        if scale > 0:
            w = np.linalg.eigvalsh(cov)
            if w[0] < -1e-10 * scale:
                raise ValueError(f"covariance not PSD: min eigenvalue {w[0]:.3e}")


def compute_moments(data: Dataset) -> MomentSummary:
    """Two-pass sample moments with 1/n normalization."""
    x = data.values
    n = x.shape[0]
    if n < 2:
        raise ValueError("moments need at least 2 rows")
    mean = x.mean(axis=0)
    centered = x - mean
    cov = centered.T @ centered / n
    cov = (cov + cov.T) / 2.0  # exact symmetry; diagonal unchanged
    variance = np.diagonal(cov).copy()
    return MomentSummary(mean=mean, variance=variance, covariance=cov)


def _check_nondegenerate(data: Dataset, variance: np.ndarray, indices) -> None:
    for i in indices:
        if variance[i] <= 0.0:
            raise DegenerateVariance(data.column_names[i])


def pearson(data: Dataset, i: int, j: int, moments: MomentSummary | None = None) -> float:
    """Correlation of columns i and j: Cov_ij / (sigma_i * sigma_j).

    Symmetric in (i, j) bit-exactly (canonical index order is used for the
    shared expression). Raises DegenerateVariance on constant columns.
    """
    i = data.column_index(i)
    j = data.column_index(j)
    m = moments if moments is not None else compute_moments(data)
    _check_nondegenerate(data, m.variance, (i, j))
    if i == j:
        return 1.0
    a, b = (i, j) if i < j else (j, i)
    sd_a = float(np.sqrt(m.variance[a]))
    sd_b = float(np.sqrt(m.variance[b]))
    return float(m.covariance[a, b]) / (sd_a * sd_b)


def pearson_matrix(data: Dataset) -> np.ndarray:
    """d x d matrix of pairwise correlations with unit diagonal.

    Entries are produced by the same scalar expression pearson() uses,
    so the matrix agrees with pairwise calls bit-exactly.
    """
    m = compute_moments(data)
    _check_nondegenerate(data, m.variance, range(data.d))
    sd = np.sqrt(m.variance)
    rho = np.eye(data.d)
    for a in range(data.d):
        for b in range(a + 1, data.d):
            r = float(m.covariance[a, b]) / (float(sd[a]) * float(sd[b]))
            rho[a, b] = r
            rho[b, a] = r
    return rho
