"""Linear principal manifolds: eigendecomposition, projection, L-correlation.

The fitted manifold stores the sample mean, an orthonormal basis of the
top-k eigenspace of the (1/n) sample covariance, the corresponding
eigenvalues, and the full spectrum. Eigenvectors are deterministic:
ordered by descending eigenvalue, sign-normalized so the first
non-negligible component is positive, and equal-eigenvalue groups are
ordered lexicographically by components.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .dataset import Dataset
from .errors import DegenerateVariance, NotOrthonormal, RankDeficientWarning
from .stats import compute_moments

_ORTHO_TOL = 1e-10


@dataclass(frozen=True)
class LinearPrincipalManifold:
    """Affine subspace through the mean spanned by top-k principal components."""

    mean: np.ndarray          # (d,)
    basis: np.ndarray         # (d, k), orthonormal columns
    eigenvalues: np.ndarray   # (k,), descending
    full_spectrum: np.ndarray  # (d,), descending

    def __post_init__(self):
        d, k = self.basis.shape
        if self.mean.shape != (d,):
            raise ValueError("mean/basis dimension mismatch")
        if self.eigenvalues.shape != (k,) or self.full_spectrum.shape != (d,):
            raise ValueError("spectrum shape mismatch")
        if k > 0:
            gram = self.basis.T @ self.basis
            if np.max(np.abs(gram - np.eye(k))) > _ORTHO_TOL:
                raise NotOrthonormal("basis columns are not orthonormal")

    @property
    def d(self) -> int:
        return self.basis.shape[0]

    @property
    def k(self) -> int:
        return self.basis.shape[1]

    def to_json(self) -> dict:
        return {
            "kind": "linear",
            "mean": [float(v) for v in self.mean],
            "basis": [[float(v) for v in row] for row in self.basis],
            "eigenvalues": [float(v) for v in self.eigenvalues],
            "full_spectrum": [float(v) for v in self.full_spectrum],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "LinearPrincipalManifold":
        if obj.get("kind") != "linear":
            raise ValueError(f"expected kind 'linear', got {obj.get('kind')!r}")
        return cls(
            mean=np.asarray(obj["mean"], dtype=np.float64),
            basis=np.asarray(obj["basis"], dtype=np.float64),
            eigenvalues=np.asarray(obj["eigenvalues"], dtype=np.float64),
            full_spectrum=np.asarray(obj["full_spectrum"], dtype=np.float64),
        )


@dataclass(frozen=True)
class VarianceDecomposition:
    """Per-coordinate total / explained / unexplained variance triple."""

    total: np.ndarray
    explained: np.ndarray
    unexplained: np.ndarray

    @property
    def defect(self) -> np.ndarray:
        """total - explained - unexplained; twice the projection/residual
        cross-covariance, zero for orthogonal projection onto an eigenbasis."""
        return self.total - self.explained - self.unexplained


def _normalize_signs(vectors: np.ndarray) -> np.ndarray:
    """Flip columns so the first non-negligible component is positive."""
    out = vectors.copy()
    for j in range(out.shape[1]):
        col = out[:, j]
        nz = np.nonzero(np.abs(col) > 1e-12 * max(1.0, np.max(np.abs(col))))[0]
        if nz.size and col[nz[0]] < 0:
            out[:, j] = -col
    return out


def _sorted_eigh(cov: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Symmetric eigendecomposition, descending, deterministic tie order."""
    w, v = np.linalg.eigh(cov)
    order = np.argsort(w)[::-1]
    w = w[order]
    v = _normalize_signs(v[:, order])
    # negative dust from rounding (PSD guaranteed at moment construction)
    w[w < 0.0] = 0.0
    # lexicographic order inside equal-eigenvalue groups
    tol = 1e-10 * max(w[0], 1e-300)
    i = 0
    d = w.shape[0]
    while i < d:
        j = i + 1
        while j < d and abs(w[j] - w[i]) <= tol:
            j += 1
        if j - i > 1:
            cols = sorted(range(i, j), key=lambda c: tuple(v[:, c]))
            v[:, i:j] = v[:, cols]
        i = j
    return w, v


def fit_linear(data: Dataset, k: int) -> LinearPrincipalManifold:
    """Fit the maximal linear principal manifold of dimension k."""
    if not 0 <= k <= data.d:
        raise ValueError(f"k must be in [0, {data.d}], got {k}")
    if data.n <= k:
        raise ValueError(f"need n > k samples, got n={data.n}, k={k}")
    m = compute_moments(data)
    w, v = _sorted_eigh(m.covariance)
    positive = int(np.sum(w > 1e-12 * max(w[0], 1.0)))
    if k > positive:
        warnings.warn(
            f"requested k={k} components but only {positive} strictly positive "
            f"eigenvalues; trailing directions carry zero variance",
            RankDeficientWarning,
            stacklevel=2,
        )
    return LinearPrincipalManifold(
        mean=m.mean,
        basis=v[:, :k],
        eigenvalues=w[:k].copy(),
        full_spectrum=w,
    )


def project_linear(m: LinearPrincipalManifold, points: np.ndarray) -> np.ndarray:
    """Orthogonal projection of each row onto the manifold."""
    points = np.asarray(points, dtype=np.float64)
    centered = points - m.mean
    return m.mean + (centered @ m.basis) @ m.basis.T


def projected_variance(m: LinearPrincipalManifold, data: Dataset) -> float:
    """Total variance of the projected data: sum of u^T Cov u over the basis."""
    cov = compute_moments(data).covariance
    return float(np.sum(np.einsum("dk,de,ek->k", m.basis, cov, m.basis)))


def subspace_coefficients(eigenvectors: np.ndarray, basis: np.ndarray) -> np.ndarray:
    """Weights a_i of each eigenvalue in the projected variance of a subspace.

    eigenvectors is the full d x d orthonormal eigenvector matrix (columns),
    basis a d x k orthonormal frame. Each a_i is in [0, 1], they sum to k,
    and sum(lambda_i * a_i) equals the projected variance onto the frame.
    """
    eigenvectors = np.asarray(eigenvectors, dtype=np.float64)
    basis = np.asarray(basis, dtype=np.float64)
    for name, mat in (("eigenvectors", eigenvectors), ("basis", basis)):
        gram = mat.T @ mat
        if np.max(np.abs(gram - np.eye(mat.shape[1]))) > _ORTHO_TOL:
            raise NotOrthonormal(f"{name} columns are not orthonormal")
    coords = eigenvectors.T @ basis  # (d, k): components of each frame vector
    return np.sum(coords * coords, axis=1)


def variance_decomposition(m: LinearPrincipalManifold, data: Dataset) -> VarianceDecomposition:
    """Per-coordinate split of variance into explained and unexplained parts."""
    proj = project_linear(m, data.values)
    resid = data.values - proj
    return VarianceDecomposition(
        total=_column_variance(data.values),
        explained=_column_variance(proj),
        unexplained=_column_variance(resid),
    )


def _column_variance(arr: np.ndarray) -> np.ndarray:
    centered = arr - arr.mean(axis=0)
    return np.einsum("nd,nd->d", centered, centered) / arr.shape[0]


def l_correlation(data: Dataset, m: LinearPrincipalManifold, i, j) -> tuple[float, float, float]:
    """L-correlation of columns i and j: product of their reliabilities.

    Reliability of a column is 1 - Var(residual) / Var(total) against the
    orthogonal projection onto the manifold.
    """
    i = data.column_index(i)
    j = data.column_index(j)
    total = _column_variance(data.values)
    for idx in (i, j):
        if total[idx] <= 0.0:
            raise DegenerateVariance(data.column_names[idx])
    resid = data.values - project_linear(m, data.values)
    resid_var = _column_variance(resid)
    r_i = 1.0 - resid_var[i] / total[i]
    r_j = 1.0 - resid_var[j] / total[j]
    return float(r_i * r_j), float(r_i), float(r_j)


def l_correlation_matrix(data: Dataset, m: LinearPrincipalManifold) -> tuple[np.ndarray, np.ndarray]:
    """All pairwise L-correlations and the reliability vector."""
    total = _column_variance(data.values)
    for idx in range(data.d):
        if total[idx] <= 0.0:
            raise DegenerateVariance(data.column_names[idx])
    resid = data.values - project_linear(m, data.values)
    rel = 1.0 - _column_variance(resid) / total
    rho_sq = np.empty((data.d, data.d), dtype=np.float64)
    for a in range(data.d):
        for b in range(a, data.d):
            val = float(rel[a] * rel[b])
            rho_sq[a, b] = val
            rho_sq[b, a] = val
    return rho_sq, rel
